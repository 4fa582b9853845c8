"""Degree-zero homogeneous Haar multipliers and the l2-valued kernel.

A multiplier with ``m(I) = m(2I)`` is fixed by its values on the unit
intervals ``[k, k+1)``, so ``m(I(j, k)) = m(I(0, k))``. For such ``m``

    Omega_m(x, y) = delta(x, y) * sum_I m(I) h_I(x) h_I(y)
                  = -m(I(x, y)) + sum_{l >= 1} 2^-l m(I(x, y)^(l)),

where ``I^(l)`` is the ``l``-th ancestor. Ancestor positions reach 0
after ``k.bit_length()`` steps and stay there, so the series closes with
a geometric tail and is exact in rational arithmetic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .dyadic import DyadicInterval, DyadicPoint, cell_at, delta, min_common_interval
from .sampling import near_point, random_pair

__all__ = [
    "Multiplier",
    "KernelVector",
    "CZReport",
    "multiplier_eval",
    "canonical_partial",
    "omega_eval",
    "kernel_component",
    "kernel_vector",
    "check_cz_hypotheses",
]


@dataclass(frozen=True)
class Multiplier:
    """Values on ``[k, k+1)``; positions not listed take ``default``.

    Values are held as exact :class:`~fractions.Fraction` (binary64 input
    converts exactly), which keeps kernel evaluation rational.
    """

    base: Mapping[int, Fraction] = field(default_factory=dict)
    default: Fraction = Fraction(0)

    def __post_init__(self):
        base = {int(k): Fraction(v) for k, v in dict(self.base).items()}
        if any(k < 0 for k in base):
            raise ValueError("multiplier positions must be nonnegative")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "default", Fraction(self.default))

    @property
    def bound(self) -> Fraction:
        return max([abs(self.default), *map(abs, self.base.values())])

    def at_position(self, k: int) -> Fraction:
        return self.base.get(k, self.default)

    def __call__(self, interval: DyadicInterval) -> Fraction:
        return self.at_position(interval.position)

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        keys = set(self.base) | set(other.base)
        return Multiplier({k: self.at_position(k) * other.at_position(k) for k in keys},
                          self.default * other.default)

    def to_json(self) -> dict:
        return {"base": [{"k": k, "v": float(v)} for k, v in sorted(self.base.items())],
                "default": float(self.default)}

    @classmethod
    def from_json(cls, obj) -> "Multiplier":
        return cls({int(e["k"]): e["v"] for e in obj.get("base", [])}, obj.get("default", 0.0))


def multiplier_eval(m: Multiplier, interval: DyadicInterval) -> Fraction:
    return m(interval)


def canonical_partial(i: int) -> Multiplier:
    """The multiplier selecting unit interval ``[i, i+1)`` and all its dilates."""
    if i < 0:
        raise ValueError("partial index must be nonnegative")
    return Multiplier({i: Fraction(1)})


def _ancestor_weights(k: int) -> list[tuple[int, Fraction]]:
    """``(position, weight)`` terms of Omega for a common interval at position ``k``.

    The last entry is position 0 carrying the closed-form tail.
    """
    terms = [(k, Fraction(-1))]
    depth = max(k.bit_length(), 1)
    for l in range(1, depth):
        terms.append((k >> l, Fraction(1, 1 << l)))
    terms.append((0, Fraction(1, 1 << (depth - 1))))
    return terms


def omega_eval(m: Multiplier, x: DyadicPoint, y: DyadicPoint) -> Fraction:
    interval = min_common_interval(x, y)
    return sum((w * m.at_position(pos) for pos, w in _ancestor_weights(interval.position)), Fraction(0))


def kernel_component(i: int, x: DyadicPoint, y: DyadicPoint) -> Fraction:
    """``K_i(x, y) = sum_j h(j, i)(x) h(j, i)(y) = Omega_{m_i}(x, y) / delta(x, y)``."""
    return omega_eval(canonical_partial(i), x, y) / delta(x, y)


@dataclass(frozen=True)
class KernelVector:
    """One l2 column ``K(x, y)``; absent components are zero."""

    entries: Mapping[int, Fraction]
    delta_xy: Fraction

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, Fraction(0))

    def sq_norm(self) -> Fraction:
        return sum((v * v for v in self.entries.values()), Fraction(0))

    def norm(self) -> float:
        return math.sqrt(self.sq_norm())

    def nonzero(self) -> dict[int, Fraction]:
        return {i: v for i, v in self.entries.items() if v}

    def to_json(self) -> dict:
        return {
            "delta": str(self.delta_xy),
            "entries": {str(i): str(v) for i, v in sorted(self.entries.items())},
            "norm": self.norm(),
        }


def kernel_vector(x: DyadicPoint, y: DyadicPoint) -> KernelVector:
    interval = min_common_interval(x, y)
    d = interval.measure
    entries: dict[int, Fraction] = {}
    for pos, w in _ancestor_weights(interval.position):
        entries[pos] = entries.get(pos, Fraction(0)) + w
    return KernelVector({i: v / d for i, v in entries.items()}, d)


# -- hypothesis checks -------------------------------------------------------

@dataclass
class CZReport:
    trials: int
    seed: int
    c0_witness: float = 2.0
    c1: float = 0.0
    max_delta_knorm_sq: Fraction = Fraction(0)
    worst_pair: tuple[str, str] | None = None
    size_violations: int = 0
    regularity_checks: int = 0
    regularity_violations: int = 0
    worst_regularity: tuple[str, str, str] | None = None

    @property
    def max_delta_knorm(self) -> float:
        return math.sqrt(self.max_delta_knorm_sq)

    @property
    def passed(self) -> bool:
        return self.size_violations == 0 and self.regularity_violations == 0

    def to_json(self) -> dict:
        return {
            "c0_witness": self.c0_witness,
            "c1": self.c1,
            "max_delta_knorm": self.max_delta_knorm,
            "max_delta_knorm_sq": str(self.max_delta_knorm_sq),
            "worst_pair": self.worst_pair,
            "size_violations": self.size_violations,
            "regularity_checks": self.regularity_checks,
            "regularity_violations": self.regularity_violations,
            "worst_regularity": self.worst_regularity,
            "trials": self.trials,
            "seed": self.seed,
        }


def _one_trial(seed: int, t: int, sampler) -> tuple:
    rng = np.random.default_rng([seed, t])
    x, y = sampler(rng)
    K = kernel_vector(x, y)
    size = K.delta_xy ** 2 * K.sq_norm()
    # perturb x, then y, inside the half of I(x, y) containing it: 2 delta(x, x') <= delta(x, y)
    top = min_common_interval(x, y)
    bad = []
    checks = 0
    for moved, other, first in ((x, y, True), (y, x, False)):
        half = cell_at(moved, top.level + 1)
        moved2 = near_point(rng, half, extra_scale=int(rng.integers(1, 24)))
        if moved2 == moved:
            continue
        checks += 1
        K2 = kernel_vector(moved2, other) if first else kernel_vector(other, moved2)
        if K2.nonzero() != K.nonzero():
            bad.append((str(x), str(y), str(moved2)))
    return size, (str(x), str(y)), checks, bad


def check_cz_hypotheses(
    trials: int,
    seed: int = 0,
    sampler: Callable[[np.random.Generator], tuple[DyadicPoint, DyadicPoint]] | None = None,
    workers: int = 1,
) -> CZReport:
    """Sample pairs and check the size bound and the smoothness conditions.

    Trial ``t`` draws from its own stream seeded by ``(seed, t)`` and the
    reduction runs in trial order, so the report does not depend on
    ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sampler = sampler or random_pair
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda t: _one_trial(seed, t, sampler), range(trials)))
    else:
        results = [_one_trial(seed, t, sampler) for t in range(trials)]

    report = CZReport(trials=trials, seed=seed)
    for size, pair, checks, bad in results:
        if size > report.max_delta_knorm_sq or report.worst_pair is None:
            report.max_delta_knorm_sq = size
            report.worst_pair = pair
        if size > 4:
            report.size_violations += 1
        report.regularity_checks += checks
        report.regularity_violations += len(bad)
        if bad and report.worst_regularity is None:
            report.worst_regularity = bad[0]
    return report
