"""L^p norms, the kernel pairing identity and Monte Carlo L^p ratio sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .dyadic import DyadicPoint
from .errors import InvalidP, SupportsNotSeparated
from .haar import HaarExpansion, StepFunction, synthesize, window_for
from .multipliers import kernel_vector
from .operators import GradientField, check_order, field_modulus, frac_laplacian, gradient
from .sampling import random_expansion, trial_rng

__all__ = [
    "lp_norm",
    "support_cells",
    "cz_pairing",
    "pairing_rhs_reference",
    "lp_ratio",
    "SweepConfig",
    "SweepReport",
    "ratio_sweep",
]

# cells below this fraction of the peak amplitude count as outside the support
SUPPORT_RTOL = 1e-12


def lp_norm(g: StepFunction, p: float) -> float:
    """``(sum |v|^p |cell|)^(1/p)``."""
    if not p >= 1.0:
        raise InvalidP(f"p must be >= 1, got {p}")
    a = np.abs(g.values)
    peak = float(a.max()) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    # scale out the peak to keep |v|^p in range
    return peak * (math.fsum((a / peak) ** p) * g.cell_measure) ** (1.0 / p)


def support_cells(values: np.ndarray, scale: float | None = None) -> np.ndarray:
    scale = float(np.abs(values).max(initial=0.0)) if scale is None else scale
    return np.flatnonzero(np.abs(values) > SUPPORT_RTOL * scale)


def _components(psi) -> dict[int, HaarExpansion]:
    if isinstance(psi, GradientField):
        return dict(psi.components)
    return {int(i): e for i, e in dict(psi).items() if len(e)}


def _pairing_grid(phi, comps):
    grids = [window_for(phi)] + [window_for(e) for e in comps.values()]
    return max(J for J, _ in grids), max(M for _, M in grids)


def _bit_length(a: np.ndarray) -> np.ndarray:
    # exact for integers below 2**53
    return np.frexp(a.astype(float))[1].astype(np.int64)


def cz_pairing(phi: HaarExpansion, psi: GradientField | Mapping[int, HaarExpansion]) -> tuple[float, float]:
    """Both sides of ``<T phi, psi> = iint <K(x, y) phi(y), psi(x)> dx dy``.

    ``lhs`` pairs Haar coefficients: ``sum_i sum_j <phi, h(j,i)> <psi_i, h(j,i)>``.
    ``rhs`` sums the kernel over pairs of grid cells; for ``x``, ``y`` in
    distinct cells ``K(x, y)`` only depends on the cells, so each cell pair
    contributes one term. Both functions vanish outside the window, which
    means there is no far field left to add.

    Raises :class:`SupportsNotSeparated` when some grid cell carries both
    ``phi`` and a component of ``psi``.
    """
    comps = _components(psi)
    lhs = math.fsum(
        phi[(j, i)] * c for i, e in comps.items() for (j, k), c in e.items() if k == i and (j, i) in phi
    )
    J, M = _pairing_grid(phi, comps)
    fphi = synthesize(phi, J, M).values
    vals = {i: synthesize(e, J, M).values for i, e in comps.items()}
    ys = support_cells(fphi)
    scale = max((float(np.abs(v).max()) for v in vals.values()), default=0.0)
    xs = np.unique(np.concatenate([support_cells(v, scale) for v in vals.values()] or [np.zeros(0, int)]))
    if np.intersect1d(xs, ys).size:
        raise SupportsNotSeparated("phi and psi share a grid cell; their delta-distance is 0")
    if xs.size == 0 or ys.size == 0:
        return lhs, 0.0

    order = sorted(vals)
    n = fphi.size
    table = np.zeros((len(order) + 1, n))
    for r, i in enumerate(order):
        table[r] = vals[i]
    lookup = np.full(max(n, max(order) + 1), len(order), dtype=np.int64)
    for r, i in enumerate(order):
        lookup[i] = r

    X = xs[:, None].astype(np.int64)
    Y = ys[None, :].astype(np.int64)
    d = _bit_length(X ^ Y)
    k = X >> d
    depth = np.maximum(_bit_length(k), 1)
    acc = -table[lookup[k], X]
    for l in range(1, int(depth.max()) + 1):
        finite = l < depth
        if finite.any():
            acc += np.where(finite, 2.0 ** -l * table[lookup[k >> l], X], 0.0)
        acc += np.where(depth == l, 2.0 ** (1 - l) * table[lookup[0], X], 0.0)
    # K = bracket / delta with delta = 2^(d - J); the cell pair has measure 2^-2J
    weights = np.ldexp(1.0, -(d + J))
    rhs = math.fsum((acc * weights * fphi[ys][None, :]).ravel())
    return lhs, rhs


def pairing_rhs_reference(phi: HaarExpansion, psi: Mapping[int, HaarExpansion]) -> float:
    """Slow cell-by-cell reference for the kernel side, one exact kernel column per pair."""
    comps = _components(psi)
    J, M = _pairing_grid(phi, comps)
    fphi = synthesize(phi, J, M).values
    vals = {i: synthesize(e, J, M).values for i, e in comps.items()}
    scale = max((float(np.abs(v).max()) for v in vals.values()), default=0.0)
    xs = np.unique(np.concatenate([support_cells(v, scale) for v in vals.values()]))
    ys = support_cells(fphi)
    terms = []
    for p in xs:
        x = DyadicPoint.of(int(p), J)
        for q in ys:
            K = kernel_vector(x, DyadicPoint.of(int(q), J))
            terms.append(math.fsum(float(K[i]) * vals[i][p] for i in vals) * fphi[q])
    return math.fsum(terms) * 2.0 ** (-2 * J)


def lp_ratio(u: HaarExpansion, s: float, p: float | Sequence[float]):
    """``|| |grad^s u|_l2 ||_p / || D^s u ||_p`` for one ``p`` or a list of them."""
    du = frac_laplacian(u, s)
    J, M = window_for(du)
    top = field_modulus(gradient(u, s), J, M)
    bottom = synthesize(du, J, M)
    if isinstance(p, (int, float)):
        return lp_norm(top, p) / lp_norm(bottom, p)
    return [lp_norm(top, q) / lp_norm(bottom, q) for q in p]


@dataclass(frozen=True)
class SweepConfig:
    s: float
    p_list: tuple[float, ...]
    trials: int
    seed: int = 0
    coeff_count: int = 20
    level_range: tuple[int, int] = (-3, 5)
    pos_max: int = 16

    def __post_init__(self):
        check_order(self.s)
        object.__setattr__(self, "p_list", tuple(float(p) for p in self.p_list))
        bad = [p for p in self.p_list if not (1.0 < p < math.inf)]
        if bad or not self.p_list:
            raise InvalidP(f"every p must satisfy 1 < p < inf, got {list(self.p_list)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.level_range[0] > self.level_range[1] or self.pos_max < 1 or self.coeff_count < 1:
            raise ValueError("empty sampling range")


@dataclass
class SweepReport:
    s: float
    trials: int
    seed: int
    per_p: dict[float, dict] = field(default_factory=dict)
    ratios: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "trials": self.trials,
            "seed": self.seed,
            "perP": [{"p": p, **stats} for p, stats in self.per_p.items()],
        }

    def to_rows(self) -> list[dict]:
        return [{"s": self.s, "p": p, "trials": self.trials, **stats} for p, stats in self.per_p.items()]


def _sweep_trial(cfg: SweepConfig, t: int) -> list[float]:
    rng = trial_rng(cfg.seed, t)
    u = random_expansion(rng, cfg.coeff_count, cfg.level_range, cfg.pos_max)
    return lp_ratio(u, cfg.s, cfg.p_list)


def ratio_sweep(cfg: SweepConfig, workers: int = 1) -> SweepReport:
    """Empirical ``R_p(u)`` over seeded random ``u``; reduction in trial order."""
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            rows = list(ex.map(lambda t: _sweep_trial(cfg, t), range(cfg.trials)))
    else:
        rows = [_sweep_trial(cfg, t) for t in range(cfg.trials)]
    ratios = np.array(rows)
    report = SweepReport(s=cfg.s, trials=cfg.trials, seed=cfg.seed, ratios=ratios)
    for col, p in enumerate(cfg.p_list):
        r = ratios[:, col]
        report.per_p[p] = {
            "maxRatio": float(r.max()),
            "meanRatio": math.fsum(r) / r.size,
            "argmaxSeedIndex": int(r.argmax()),
        }
    return report
