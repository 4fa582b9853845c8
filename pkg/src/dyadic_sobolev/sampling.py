"""Seeded random generators for points, expansions and test pairs.

All randomness goes through :class:`numpy.random.Generator`. Batch
routines derive trial ``t`` from ``default_rng([seed, t])`` so that each
trial is reproducible on its own.
"""

from __future__ import annotations

import numpy as np

from .dyadic import DyadicInterval, DyadicPoint, cell_at
from .haar import HaarExpansion, StepFunction, analyze

__all__ = [
    "trial_rng",
    "random_point",
    "near_point",
    "random_pair",
    "random_expansion",
    "random_separated_pair",
]


def trial_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng([seed, t])


def _big_int(rng, bits):
    n = 0
    for _ in range(0, bits, 32):
        n = (n << 32) | int(rng.integers(0, 1 << 32))
    return n & ((1 << bits) - 1)


def random_point(rng: np.random.Generator, max_scale: int = 16, max_log_value: int = 12) -> DyadicPoint:
    """Uniform point of ``2**-q Z`` in ``[0, 2**max_log_value)`` with random ``q``."""
    q = int(rng.integers(0, max_scale + 1))
    bits = q + max_log_value
    n = int(rng.integers(0, 1 << bits)) if bits < 63 else _big_int(rng, bits)
    return DyadicPoint.of(n, q)


def near_point(rng: np.random.Generator, cell: DyadicInterval, extra_scale: int = 8) -> DyadicPoint:
    """Random dyadic point inside ``cell``, resolved up to ``extra_scale`` finer levels."""
    r = int(rng.integers(0, extra_scale + 1))
    offset = int(rng.integers(0, 1 << r))
    return DyadicPoint.of((cell.position << r) + offset, cell.level + r)


def random_pair(rng: np.random.Generator) -> tuple[DyadicPoint, DyadicPoint]:
    """Distinct pair; half the time independent, half the time sharing a small cell."""
    x = random_point(rng)
    while True:
        if rng.random() < 0.5:
            y = random_point(rng)
        else:
            y = near_point(rng, cell_at(x, int(rng.integers(-12, 17))))
        if y != x:
            return x, y


def random_expansion(
    rng: np.random.Generator,
    count: int = 20,
    level_range: tuple[int, int] = (-4, 6),
    pos_max: int = 64,
) -> HaarExpansion:
    """``count`` i.i.d. uniform[-1, 1] coefficients at uniform keys; repeated keys add up."""
    lo, hi = level_range
    levels = rng.integers(lo, hi + 1, size=count)
    positions = rng.integers(0, pos_max, size=count)
    values = rng.uniform(-1.0, 1.0, size=count)
    return HaarExpansion([((int(j), int(k)), float(c)) for j, k, c in zip(levels, positions, values)])


def _mean_zero_on(rng, n_cells, cells, grid_level, window):
    v = np.zeros(n_cells)
    v[cells] = rng.uniform(-1.0, 1.0, size=cells.size)
    v[cells] -= v[cells].mean()
    f, _ = analyze(StepFunction(grid_level, window, v))
    return f


def random_separated_pair(
    rng: np.random.Generator,
    grid_level: int = 4,
    window: int = 1,
    n_components: int = 3,
) -> tuple[HaarExpansion, dict[int, HaarExpansion]]:
    """Mean-zero ``phi`` and vector ``psi`` living on disjoint sets of grid cells.

    Each component index is drawn from the positions ``[0, 2**window)``
    so that the pairing has coarse coefficients in common.
    """
    n = 1 << (grid_level + window)
    cells = rng.permutation(n)
    a = int(rng.integers(2, n // 2 + 1))
    phi = _mean_zero_on(rng, n, np.sort(cells[:a]), grid_level, window)
    rest = cells[a:]
    idx = rng.choice(1 << window, size=min(n_components, 1 << window), replace=False)
    psi = {}
    for i in idx:
        b = int(rng.integers(2, rest.size + 1))
        psi[int(i)] = _mean_zero_on(rng, n, np.sort(rng.choice(rest, size=b, replace=False)), grid_level, window)
    return phi, psi
