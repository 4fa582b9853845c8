"""Haar-diagonal operators: fractional Laplacian, multipliers, partials, gradient.

Every operator here acts on coefficients. On ``I(j, k)`` the fractional
Laplacian of order ``s`` multiplies by ``|I|^-s = 2^(j s)``; a multiplier
operator multiplies by ``m(I(0, k))``; the ``i``-th projector keeps
position ``k == i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidOrder
from .haar import HaarExpansion, StepFunction, synthesize, window_for
from .multipliers import Multiplier, canonical_partial

__all__ = [
    "GradientField",
    "check_order",
    "frac_laplacian",
    "inv_frac_laplacian",
    "apply_multiplier",
    "project",
    "directional",
    "partial",
    "gradient",
    "project_all",
    "dilate_expansion",
    "field_modulus",
]


def check_order(s: float) -> float:
    s = float(s)
    if not 0.0 < s < 1.0:
        raise InvalidOrder(f"fractional order must lie in (0, 1), got {s}")
    return s


def _gain(j: int, s: float) -> float:
    return 2.0 ** (j * s)


def frac_laplacian(f: HaarExpansion, s: float) -> HaarExpansion:
    s = check_order(s)
    return f.map(lambda j, k: _gain(j, s))


def inv_frac_laplacian(f: HaarExpansion, s: float) -> HaarExpansion:
    """Solve ``D^s u = f`` on the span of the Haar system."""
    s = check_order(s)
    return f.map(lambda j, k: _gain(-j, s))


def apply_multiplier(f: HaarExpansion, m: Multiplier) -> HaarExpansion:
    return f.map(lambda j, k: float(m.at_position(k)))


def project(f: HaarExpansion, i: int) -> HaarExpansion:
    return HaarExpansion({(j, k): c for (j, k), c in f.items() if k == i})


def directional(f: HaarExpansion, s: float, m: Multiplier) -> HaarExpansion:
    # m * (2^(js) c): same rounding as applying the multiplier after D^s
    s = check_order(s)
    return HaarExpansion({(j, k): float(m.at_position(k)) * (_gain(j, s) * c) for (j, k), c in f.items()})


def partial(f: HaarExpansion, s: float, i: int) -> HaarExpansion:
    return directional(f, s, canonical_partial(i))


@dataclass(frozen=True)
class GradientField:
    """Finitely many nonzero components of an l2-valued function.

    A gradient has only position-``i`` coefficients in component ``i``; a
    general test vector for the kernel pairing need not.
    """

    components: Mapping[int, HaarExpansion] = field(default_factory=dict)

    def __post_init__(self):
        comps = {int(i): e for i, e in dict(self.components).items() if len(e)}
        object.__setattr__(self, "components", comps)

    def __getitem__(self, i: int) -> HaarExpansion:
        return self.components.get(i, HaarExpansion())

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        if isinstance(other, GradientField):
            return dict(self.components) == dict(other.components)
        return NotImplemented

    def is_diagonal(self) -> bool:
        return all(k == i for i, e in self.components.items() for _, k in e)

    def sq_norm(self) -> float:
        return math.fsum(e.sq_norm() for e in self.components.values())

    def window(self) -> tuple[int, int]:
        grids = [window_for(e) for e in self.components.values()]
        if not grids:
            return 0, 0
        return max(J for J, _ in grids), max(M for _, M in grids)

    def to_json(self) -> dict:
        return {"components": [{"i": i, "expansion": e.to_json()} for i, e in sorted(self.components.items())]}

    @classmethod
    def from_json(cls, obj) -> "GradientField":
        return cls({int(c["i"]): HaarExpansion.from_json(c["expansion"]) for c in obj["components"]})


def project_all(g: HaarExpansion) -> GradientField:
    """The vector projector: component ``i`` keeps the position-``i`` terms."""
    comps: dict[int, dict] = {}
    for (j, k), c in g.items():
        comps.setdefault(k, {})[(j, k)] = c
    return GradientField({i: HaarExpansion(d) for i, d in comps.items()})


def gradient(f: HaarExpansion, s: float) -> GradientField:
    s = check_order(s)
    return GradientField({i: partial(f, s, i) for i in sorted(f.positions)})


def dilate_expansion(f: HaarExpansion, l: int = 1) -> HaarExpansion:
    """Reindex ``(j, k) -> (j + l, k)``, i.e. ``x -> 2^(l/2) f(2^l x)``."""
    return HaarExpansion({(j + l, k): c for (j, k), c in f.items()})


def field_modulus(v: GradientField, grid_level: int | None = None, window: int | None = None) -> StepFunction:
    """Pointwise l2 modulus ``|v(x)|`` as a step function."""
    J0, M0 = v.window()
    J = J0 if grid_level is None else grid_level
    M = M0 if window is None else window
    acc = StepFunction.zeros(J, M).values.copy()
    for e in v.components.values():
        comp = synthesize(e, J, M).values
        acc += comp * comp
    return StepFunction(J, M, acc ** 0.5)
