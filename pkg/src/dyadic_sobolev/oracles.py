"""Brute-force reference computations.

These deliberately avoid the shortcuts used by the main code paths:
they walk levels one by one, enumerate cell pairs, or iterate dilations,
so that agreement with the fast routines is evidence rather than
tautology.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .dyadic import DyadicInterval, DyadicPoint, cell_at, dilate
from .haar import HaarExpansion, haar_product, synthesize, window_for
from .multipliers import Multiplier

__all__ = [
    "homogeneous_value",
    "series_omega",
    "brute_energy",
    "butterfly_labels",
]


def homogeneous_value(m: Multiplier, interval: DyadicInterval) -> Fraction:
    """``m(I)`` by dilating ``I`` one step at a time until it has unit length."""
    while interval.level != 0:
        interval = dilate(interval, 1 if interval.level > 0 else -1)
    return m.base.get(interval.position, m.default)


def series_omega(m: Multiplier, x: DyadicPoint, y: DyadicPoint) -> Fraction:
    """``delta(x, y) * sum_j m(I) h_I(x) h_I(y)`` summed level by level.

    Walks down from the finest level of the two points. Once both points
    sit in the left half of ``I(j, 0)`` every coarser term is ``2^j m(0)``
    and the remainder is summed in closed form. ``delta`` is read off as
    the first level where the two points share a cell.
    """
    if x == y:
        raise ValueError("series_omega needs distinct points")
    j = max(x.scale, y.scale) + 1
    total = Fraction(0)
    dist = None
    while True:
        cx, cy = cell_at(x, j).position, cell_at(y, j).position
        if cx == cy and dist is None:
            dist = Fraction(2) ** (-j)
        if cx == cy == 0 and cell_at(x, j + 1).position == cell_at(y, j + 1).position == 0:
            total += homogeneous_value(m, DyadicInterval(j, 0)) * Fraction(2) ** (j + 1)
            break
        if cx == cy:
            total += homogeneous_value(m, DyadicInterval(j, cx)) * haar_product(j, cx, x, y)
        j -= 1
    return dist * total


def brute_energy(f: HaarExpansion, g: HaarExpansion, s: float, grid: tuple[int, int] | None = None) -> float:
    """Bilinear energy by enumerating every ordered pair of grid cells.

    Inside the window, pairs of distinct level-``J`` cells ``p``, ``q`` have
    ``delta = 2^(bitlen(p ^ q) - J)``. Outside the window the ``y``
    variable is cut into shells ``[2^(l-1), 2^l)``, ``l > M``, where
    ``delta(x, y) = 2^l``; shells are summed until they stop changing the
    total.
    """
    J, M = grid or tuple(max(a, b) for a, b in zip(window_for(f), window_for(g)))
    v = synthesize(f, J, M).values
    w = synthesize(g, J, M).values
    n = v.size
    idx = np.arange(n, dtype=np.int64)
    cell = 2.0 ** (-J)
    near = 0.0
    for p in range(n):
        d = np.frexp((idx ^ p).astype(float))[1]
        weight = np.where(idx == p, 0.0, np.ldexp(1.0, -(d - J)) ** (1 + 2 * s))
        near += math.fsum((v[p] - v) * (w[p] - w) * weight) * cell * cell
    fg = math.fsum(v * w) * cell
    shells = []
    l = M + 1
    while True:
        term = 2 * fg * 2.0 ** (l - 1) * 2.0 ** (-l * (1 + 2 * s))
        shells.append(term)
        if abs(term) <= 1e-18 * (abs(near) + abs(fg)) or l > M + 4000:
            break
        l += 1
    return near + math.fsum(shells)


def butterfly_labels(points: list[DyadicPoint], coarsest: int, finest: int):
    """Label every ordered pair by enumerating butterflies ``B(I)`` directly.

    Returns ``(count, klabel, jlabel)`` arrays: how many butterflies with
    level in ``[coarsest, finest]`` contain ``(x_a, x_b)`` and, for the
    last one found, its position and level.
    """
    n = len(points)
    count = np.zeros((n, n), dtype=np.int64)
    klabel = np.full((n, n), -1, dtype=np.int64)
    jlabel = np.full((n, n), 10**9, dtype=np.int64)
    for j in range(coarsest, finest + 1):
        left = np.array([cell_at(x, j + 1).position for x in points], dtype=object)
        parent = left // 2
        plus = np.array([c % 2 == 0 for c in left])
        groups: dict[int, list[int]] = {}
        for a, k in enumerate(parent):
            groups.setdefault(int(k), []).append(a)
        for k, members in groups.items():
            members = np.array(members)
            lo = members[plus[members]]
            hi = members[~plus[members]]
            if lo.size == 0 or hi.size == 0:
                continue
            for a_idx, b_idx in ((lo, hi), (hi, lo)):
                sub = np.ix_(a_idx, b_idx)
                count[sub] += 1
                klabel[sub] = k
                jlabel[sub] = j
    return count, klabel, jlabel
