"""Haar wavelets on the half-line, finite expansions and step functions.

``h(j, k)`` is ``+2^(j/2)`` on the left half of ``I(j, k)`` and ``-2^(j/2)``
on the right half. A :class:`HaarExpansion` is a finite sparse map from
``(j, k)`` to a coefficient; a :class:`StepFunction` is its pointwise
realization on the level-``J`` cells of a window ``[0, 2**M)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from .dyadic import DyadicPoint, cell_at
from .errors import GridTooCoarse, WindowTooSmall

__all__ = [
    "ZERO_CUTOFF",
    "HaarExpansion",
    "StepFunction",
    "haar_amplitude",
    "haar_sign",
    "haar_eval",
    "haar_product",
    "window_for",
    "synthesize",
    "analyze",
    "inner_product",
]

# coefficients smaller than this are dropped from the sparse map
ZERO_CUTOFF = 1e-300

Key = tuple[int, int]


def haar_amplitude(j: int) -> float:
    return 2.0 ** (j / 2)


def haar_sign(j: int, k: int, x: DyadicPoint) -> int:
    """Sign of ``h(j, k)`` at ``x``: +1 on the left half, -1 on the right, 0 outside."""
    c = cell_at(x, j + 1).position
    if c >> 1 != k:
        return 0
    return 1 if c % 2 == 0 else -1


def haar_eval(j: int, k: int, x: DyadicPoint) -> float:
    return haar_sign(j, k, x) * haar_amplitude(j)


def haar_product(j: int, k: int, x: DyadicPoint, y: DyadicPoint) -> Fraction:
    """``h(j,k)(x) * h(j,k)(y)`` exactly: always 0 or ``+-2**j``."""
    s = haar_sign(j, k, x) * haar_sign(j, k, y)
    return s * Fraction(2) ** j if s else Fraction(0)


class HaarExpansion(Mapping):
    """Finite linear combination of Haar wavelets.

    Behaves as a read-only mapping ``(j, k) -> coefficient`` and supports
    ``+``, ``-`` and scalar ``*``. Zero coefficients are never stored.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Key, float] | Iterable[tuple[Key, float]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        store: dict[Key, float] = {}
        for (j, k), c in items:
            j, k = int(j), int(k)
            if k < 0:
                raise ValueError(f"negative Haar position {k}")
            store[(j, k)] = store.get((j, k), 0.0) + float(c)
        self._coeffs = {key: c for key, c in store.items() if abs(c) >= ZERO_CUTOFF}

    @classmethod
    def single(cls, j: int, k: int, c: float = 1.0) -> "HaarExpansion":
        return cls({(j, k): c})

    def __getitem__(self, key: Key) -> float:
        return self._coeffs[key]

    def __iter__(self) -> Iterator[Key]:
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, HaarExpansion):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        body = ", ".join(f"({j}, {k}): {c!r}" for (j, k), c in sorted(self._coeffs.items()))
        return f"HaarExpansion({{{body}}})"

    def __add__(self, other: "HaarExpansion") -> "HaarExpansion":
        return HaarExpansion(list(self._coeffs.items()) + list(other.items()))

    def __neg__(self) -> "HaarExpansion":
        return HaarExpansion({key: -c for key, c in self._coeffs.items()})

    def __sub__(self, other: "HaarExpansion") -> "HaarExpansion":
        return self + (-other)

    def __mul__(self, scalar: float) -> "HaarExpansion":
        return HaarExpansion({key: scalar * c for key, c in self._coeffs.items()})

    __rmul__ = __mul__

    def map(self, weight) -> "HaarExpansion":
        """Multiply each coefficient by ``weight(j, k)``, evaluated as ``weight * c``."""
        return HaarExpansion({(j, k): weight(j, k) * c for (j, k), c in self._coeffs.items()})

    def sq_norm(self) -> float:
        """Squared L2 norm, by orthonormality the sum of squared coefficients."""
        return math.fsum(c * c for c in self._coeffs.values())

    def dot(self, other: "HaarExpansion") -> float:
        return math.fsum(c * other._coeffs[key] for key, c in self._coeffs.items() if key in other._coeffs)

    @property
    def positions(self) -> set[int]:
        return {k for _, k in self._coeffs}

    @property
    def max_level(self) -> int | None:
        return max((j for j, _ in self._coeffs), default=None)

    @property
    def min_level(self) -> int | None:
        return min((j for j, _ in self._coeffs), default=None)

    def to_json(self) -> dict:
        return {"coeffs": [{"j": j, "k": k, "c": c} for (j, k), c in sorted(self._coeffs.items())]}

    @classmethod
    def from_json(cls, obj) -> "HaarExpansion":
        return cls([((e["j"], e["k"]), e["c"]) for e in obj["coeffs"]])


@dataclass(frozen=True)
class StepFunction:
    """Piecewise constant function on the level-``grid_level`` cells of ``[0, 2**window)``."""

    grid_level: int
    window: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        n = self.grid_level + self.window
        if n < 0 or values.shape != (1 << n,):
            raise ValueError(
                f"expected {2 ** max(n, 0)} values for J={self.grid_level}, M={self.window}, "
                f"got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid_level: int, window: int) -> "StepFunction":
        return cls(grid_level, window, np.zeros(1 << (grid_level + window)))

    @property
    def cell_measure(self) -> float:
        return 2.0 ** (-self.grid_level)

    def refine(self, grid_level: int, window: int) -> "StepFunction":
        """Same function on a finer grid and/or a larger window (zero-extended)."""
        if grid_level < self.grid_level or window < self.window:
            raise ValueError("refine can only make the grid finer and the window larger")
        v = np.repeat(self.values, 1 << (grid_level - self.grid_level))
        out = np.zeros(1 << (grid_level + window))
        out[: v.size] = v
        return StepFunction(grid_level, window, out)

    def integral(self) -> float:
        return math.fsum(self.values) * self.cell_measure

    def support_cells(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    def __call__(self, x: DyadicPoint) -> float:
        k = cell_at(x, self.grid_level).position
        return float(self.values[k]) if k < self.values.size else 0.0

    def to_csv(self) -> str:
        """Header ``j=J,M=M`` then one value per line, cells left to right."""
        lines = [f"j={self.grid_level},M={self.window}"]
        lines.extend(repr(float(v)) for v in self.values)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "StepFunction":
        rows = [r.strip() for r in text.strip().splitlines() if r.strip()]
        try:
            header = dict(part.split("=") for part in rows[0].split(","))
            J, M = int(header["j"]), int(header["M"])
        except (IndexError, KeyError, ValueError) as exc:
            raise ValueError(f"bad step function header {rows[:1]!r}; expected 'j=J,M=M'") from exc
        return cls(J, M, np.array([float(r) for r in rows[1:]]))


def common_grid(*fs: StepFunction) -> list[StepFunction]:
    J = max(f.grid_level for f in fs)
    M = max(f.window for f in fs)
    return [f.refine(J, M) for f in fs]


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def window_for(f: Mapping[Key, float]) -> tuple[int, int]:
    """Smallest ``(J, M)`` on which ``f`` is exactly representable."""
    if not f:
        return 0, 0
    J = max(j for j, _ in f) + 1
    M = max(_ceil_log2(k + 1) - j for j, k in f)
    return J, M


def synthesize(f: Mapping[Key, float], grid_level: int | None = None, window: int | None = None) -> StepFunction:
    """Evaluate ``sum c_jk h(j, k)`` on every level-``grid_level`` cell.

    Defaults to the smallest grid that resolves ``f``. Haar functions of
    level ``j`` are constant on level ``j + 1`` cells, so the grid must be
    strictly finer than the finest level present.
    """
    J0, M0 = window_for(f)
    J = J0 if grid_level is None else grid_level
    M = M0 if window is None else window
    if f and J < J0:
        raise GridTooCoarse(f"grid level {J} cannot resolve Haar level {J0 - 1}")
    if f and M < M0:
        raise WindowTooSmall(f"window [0, 2^{M}) does not contain every support, need M >= {M0}")
    values = np.zeros(1 << (J + M))
    for (j, k), c in f.items():
        width = 1 << (J - j)
        half = width >> 1
        start = k * width
        a = c * haar_amplitude(j)
        values[start : start + half] += a
        values[start + half : start + width] -= a
    return StepFunction(J, M, values)


def analyze(g: StepFunction, j_min: int | None = None) -> tuple[HaarExpansion, float]:
    """Haar coefficients of ``g`` for all levels ``>= j_min``.

    Returns ``(expansion, residual)`` where ``residual`` is the l2 norm of
    the omitted coefficients below ``j_min``. Coarser than the window,
    only ``I(j, 0)`` meets the support and ``<g, h(j, 0)> = 2^(j/2) * int g``,
    so the omitted tail has squared norm ``(int g)^2 * 2^min(j_min, -M)``
    plus whatever in-window levels were cut.
    """
    J, M = g.grid_level, g.window
    if j_min is None:
        j_min = -M
    coeffs: dict[Key, float] = {}
    omitted = []
    sums = g.values * g.cell_measure
    for j in range(J - 1, -M - 1, -1):
        left, right = sums[0::2], sums[1::2]
        detail = haar_amplitude(j) * (left - right)
        if j >= j_min:
            for k in np.flatnonzero(detail):
                coeffs[(j, int(k))] = float(detail[k])
        else:
            omitted.append(detail)
        sums = left + right
    total = math.fsum(sums)
    for j in range(min(-M - 1, J - 1), j_min - 1, -1):
        coeffs[(j, 0)] = haar_amplitude(j) * total
    tail = total * total * 2.0 ** min(j_min, -M)
    tail += math.fsum(float(np.dot(d, d)) for d in omitted)
    return HaarExpansion(coeffs), math.sqrt(tail)


def inner_product(f: StepFunction, g: StepFunction) -> float:
    """L2 pairing by exact cell sums over a common refinement."""
    f, g = common_grid(f, g)
    return math.fsum(f.values * g.values) * f.cell_measure
