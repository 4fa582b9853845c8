"""Property batteries run by ``dyadic-sobolev verify``.

Each suite returns a :class:`SuiteResult` holding one :class:`Check` per
property, with the worst observed discrepancy as witness.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import dyadic as dy
from .energy import bilinear_energy, energy_constant, energy_integral, gradient_energy, spectral_energy
from .errors import UnknownSuite
from .haar import HaarExpansion, StepFunction, analyze, inner_product, synthesize
from .harness import SweepConfig, cz_pairing, lp_ratio, ratio_sweep
from .multipliers import Multiplier, canonical_partial, check_cz_hypotheses, kernel_vector, omega_eval
from .operators import (
    apply_multiplier,
    dilate_expansion,
    directional,
    field_modulus,
    frac_laplacian,
    gradient,
    inv_frac_laplacian,
    partial,
    project,
    project_all,
)
from .oracles import brute_energy, butterfly_labels, homogeneous_value, series_omega
from .sampling import near_point, random_expansion, random_pair, random_separated_pair, trial_rng

__all__ = ["Check", "SuiteResult", "SUITES", "run_suite", "grid_points", "fixed_pairing_example"]

ORDERS = (0.25, 0.5, 0.75)


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "witness": self.witness}


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness="") -> None:
        self.checks.append(Check(name, bool(passed), str(witness)))

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "seconds": round(self.seconds, 3),
                "checks": [c.to_json() for c in self.checks]}


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def grid_points(n: int = 256, scale: int = 6) -> list[dy.DyadicPoint]:
    return [dy.DyadicPoint.of(i, scale) for i in range(n)]


def _random_multiplier(rng, width=32) -> Multiplier:
    base = {int(k): Fraction(int(rng.integers(-64, 65)), 1 << int(rng.integers(0, 8)))
            for k in rng.integers(0, width, size=int(rng.integers(1, 10)))}
    return Multiplier(base, Fraction(int(rng.integers(-8, 9)), 4))


def metric_suite(seed: int = 0) -> SuiteResult:
    res = SuiteResult("metric")
    pts = grid_points()
    n = len(pts)
    level = np.zeros((n, n), dtype=np.int64)
    cls = np.full((n, n), -1, dtype=np.int64)
    powers_ok = True
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            d = dy.delta(pts[a], pts[b])
            lvl = -(d.numerator.bit_length() - 1) if d.denominator == 1 else d.denominator.bit_length() - 1
            powers_ok &= d == Fraction(2) ** (-lvl)
            lab = dy.classify(pts[a], pts[b])
            powers_ok &= lab.level_index == lvl
            level[a, b], cls[a, b] = lvl, lab.class_index
    off = ~np.eye(n, dtype=bool)
    res.add("symmetry", np.array_equal(level, level.T) and np.array_equal(cls, cls.T))
    res.add("dyadic-power values", powers_ok)
    res.add("identity", dy.delta(pts[3], pts[3]) == 0)
    # delta(x, z) <= max(delta(x, y), delta(y, z))  <=>  level(x, z) >= min(level(x, y), level(y, z))
    big = np.where(off, level, 10**6)
    worst = 0
    for y in range(n):
        bound = np.minimum(big[:, y][:, None], big[y, :][None, :])
        viol = (big < bound) & off
        worst += int(viol.sum())
    res.add("ultrametric inequality", worst == 0, f"violations={worst}")
    count, klab, jlab = butterfly_labels(pts, -2, 6)
    res.add("butterflies partition off-diagonal pairs", bool((count[off] == 1).all() and (count[~off] == 0).all()))
    res.add("labels match butterfly enumeration",
            np.array_equal(klab[off], cls[off]) and np.array_equal(jlab[off], level[off]))
    rng = trial_rng(seed, 0)
    ok_eq = ok_dil = True
    for _ in range(500):
        x, y = random_pair(rng)
        ok_eq &= dy.delta(x.scaled(1), y.scaled(1)) == 2 * dy.delta(x, y)
        ok_eq &= dy.classify(x.scaled(1), y.scaled(1)).class_index == dy.classify(x, y).class_index
        I = dy.DyadicInterval(int(rng.integers(-8, 9)), int(rng.integers(0, 64)))
        ok_dil &= (dy.dilate(I, 1) == dy.ancestor(I, 1)) == (I.position == 0)
    res.add("scale equivariance", ok_eq)
    res.add("dilation equals ancestry only at position 0", ok_dil)
    return res


def haar_suite(seed: int = 0, count: int = 200) -> SuiteResult:
    res = SuiteResult("haar")
    rng = trial_rng(seed, 1)
    worst_on = 0.0
    for _ in range(count):
        a = (int(rng.integers(-3, 6)), int(rng.integers(0, 8)))
        b = a if rng.random() < 0.3 else (int(rng.integers(-3, 6)), int(rng.integers(0, 8)))
        ip = inner_product(synthesize(HaarExpansion({a: 1.0})), synthesize(HaarExpansion({b: 1.0})))
        worst_on = max(worst_on, abs(ip - (1.0 if a == b else 0.0)))
    res.add("orthonormality", worst_on <= 1e-12, f"max err {worst_on:.3e}")
    worst_p = worst_rt = 0.0
    for t in range(count):
        f = random_expansion(trial_rng(seed, 100 + t), 20, (-3, 5), 16)
        sf = synthesize(f)
        worst_p = max(worst_p, _rel(inner_product(sf, sf), f.sq_norm()))
        back, resid = analyze(sf, f.min_level)
        keys = set(f) | set(back)
        scale = max(abs(c) for c in f.values())
        err = max(abs(f.get(k, 0.0) - back.get(k, 0.0)) for k in keys) / scale
        worst_rt = max(worst_rt, err, resid / scale)
    res.add("Parseval", worst_p <= 1e-12, f"max rel err {worst_p:.3e}")
    res.add("analyze(synthesize(f)) == f", worst_rt <= 1e-12, f"max rel err {worst_rt:.3e}")
    return res


def multiplier_suite(seed: int = 0, count: int = 1000) -> SuiteResult:
    res = SuiteResult("multiplier")
    rng = trial_rng(seed, 2)
    m = _random_multiplier(rng)
    ok = ok_parts = True
    for _ in range(count):
        I = dy.DyadicInterval(int(rng.integers(-20, 21)), int(rng.integers(0, 40)))
        ok &= m(I) == m(dy.DyadicInterval(0, I.position)) == homogeneous_value(m, I)
        ok_parts &= sum(canonical_partial(i)(I) ** 2 for i in range(41)) == 1
    res.add("m(I(j,k)) == m(I(0,k))", ok)
    res.add("sum_i m_i(I)^2 == 1", ok_parts)
    return res


def kernel_suite(seed: int = 0, count: int = 1000) -> SuiteResult:
    res = SuiteResult("kernel")
    rng = trial_rng(seed, 3)
    bad_series = bad_hom = bad_size = bad_comp = 0
    worst = Fraction(0)
    for _ in range(count):
        m = _random_multiplier(rng)
        x, y = random_pair(rng)
        om = omega_eval(m, x, y)
        bad_series += om != series_omega(m, x, y)
        bad_hom += om != omega_eval(m, x.scaled(1), y.scaled(1))
        K = kernel_vector(x, y)
        size = K.delta_xy ** 2 * K.sq_norm()
        worst = max(worst, size)
        bad_size += size > 4
        bad_comp += any(omega_eval(canonical_partial(i), x, y) / K.delta_xy != v for i, v in K.entries.items())
    res.add("omega == delta * direct series", bad_series == 0, f"mismatches={bad_series}")
    res.add("Omega(2x, 2y) == Omega(x, y)", bad_hom == 0, f"mismatches={bad_hom}")
    res.add("delta |K|_l2 <= 2", bad_size == 0, f"max delta^2 |K|^2 = {worst}")
    res.add("kernel_vector agrees with components", bad_comp == 0)
    # constancy on butterflies
    bad_const = 0
    for _ in range(200):
        I = dy.DyadicInterval(int(rng.integers(-6, 8)), int(rng.integers(0, 200)))
        lo, hi = I.children()
        first = kernel_vector(near_point(rng, lo), near_point(rng, hi)).nonzero()
        bad_const += any(kernel_vector(near_point(rng, hi), near_point(rng, lo)).nonzero() != first for _ in range(3))
    res.add("K constant on each butterfly", bad_const == 0, f"non-constant={bad_const}")
    return res


def operators_suite(seed: int = 0, count: int = 200) -> SuiteResult:
    res = SuiteResult("operators")
    bad = 0
    inv_err = iso_err = 0.0
    bad_dil = 0
    for t in range(count):
        rng = trial_rng(seed, 1000 + t)
        f = random_expansion(rng, 20, (-4, 6), 64)
        m = Multiplier({int(k): float(v) for k, v in zip(rng.integers(0, 64, 8), rng.uniform(-2, 2, 8))},
                       float(rng.uniform(-1, 1)))
        for s in ORDERS:
            ds = frac_laplacian(f, s)
            bad += directional(f, s, m) != apply_multiplier(ds, m)
            bad += any(partial(f, s, i) != project(ds, i) for i in f.positions)
            bad += gradient(f, s) != project_all(ds)
            back = frac_laplacian(inv_frac_laplacian(f, s), s)
            inv_err = max(inv_err, max(_rel(back[k], f[k]) for k in f))
            uf = dilate_expansion(f)
            scaled = dilate_expansion(ds) * 2.0 ** s
            bad_dil += max(_rel(frac_laplacian(uf, s)[k], scaled[k]) for k in scaled) > 1e-15
        g = random_expansion(rng, 20, (-3, 5), 16)
        sg = synthesize(g)
        mod = field_modulus(project_all(g), sg.grid_level, sg.window)
        iso_err = max(iso_err, _rel(inner_product(mod, mod), g.sq_norm()))
    res.add("D_m = T_m D, D_(i) = T_(i) D, grad = T D (exact)", bad == 0, f"mismatches={bad}")
    res.add("inverse round trip", inv_err <= 1e-12, f"max rel err {inv_err:.3e}")
    res.add("dilation equivariance", bad_dil == 0)
    res.add("|| |T g|_l2 ||_2 == ||g||_2", iso_err <= 1e-12, f"max rel err {iso_err:.3e}")
    return res


def energy_suite(seed: int = 0, count: int = 100) -> SuiteResult:
    res = SuiteResult("energy")
    worst_id = worst_grad = worst_pol = 0.0
    for s in ORDERS:
        c = energy_constant(s)
        for t in range(count):
            f = random_expansion(trial_rng(seed, 2000 + t), 20, (-4, 6), 64)
            worst_id = max(worst_id, _rel(energy_integral(f, s), c * spectral_energy(f, s)))
            worst_grad = max(worst_grad, _rel(spectral_energy(f, s), gradient_energy(f, s)))
        f = random_expansion(trial_rng(seed, 3000), 10, (-2, 3), 8)
        g = random_expansion(trial_rng(seed, 3001), 10, (-2, 3), 8)
        pol = 0.25 * (energy_integral(f + g, s) - energy_integral(f - g, s))
        worst_pol = max(worst_pol, _rel(bilinear_energy(f, g, s), pol))
    res.add("integral == c(s) * spectral", worst_id <= 1e-9, f"max rel err {worst_id:.3e}")
    res.add("spectral == gradient energy", worst_grad <= 1e-12, f"max rel err {worst_grad:.3e}")
    res.add("polarization", worst_pol <= 1e-10, f"max rel err {worst_pol:.3e}")
    h = HaarExpansion.single(0, 0)
    c_half = brute_energy(h, h, 0.5)
    res.add("c(1/2) == 3 by cell-pair oracle", abs(c_half - 3) <= 1e-9, f"oracle {c_half!r}")
    spread = 0.0
    for s in ORDERS:
        ratios = [energy_integral(HaarExpansion.single(j, k), s) / 2.0 ** (2 * j * s)
                  for j, k in ((0, 0), (1, 0), (2, 3), (3, 5))]
        spread = max(spread, max(_rel(r, ratios[0]) for r in ratios))
    res.add("c(s) independent of the Haar function", spread <= 1e-9, f"max rel spread {spread:.3e}")
    return res


def fixed_pairing_example() -> tuple[HaarExpansion, dict[int, HaarExpansion]]:
    """phi = 1 on [3/8,1/2), -1 on [1/2,5/8); psi_0 = 1 on [1/4,3/8), -1 on [5/8,3/4)."""
    v = np.zeros(8)
    v[3], v[4] = 1.0, -1.0
    w = np.zeros(8)
    w[2], w[5] = 1.0, -1.0
    return analyze(StepFunction(3, 0, v))[0], {0: analyze(StepFunction(3, 0, w))[0]}


def cz_suite(seed: int = 0, trials: int = 10_000, pairs: int = 50) -> SuiteResult:
    res = SuiteResult("cz")
    rep = check_cz_hypotheses(trials, seed)
    res.add("(i) delta |K|_l2 <= 2", rep.size_violations == 0, f"max {rep.max_delta_knorm:.6f} at {rep.worst_pair}")
    res.add("(ii) K(x', y) == K(x, y) when 2 delta(x, x') <= delta(x, y)",
            rep.regularity_violations == 0, f"{rep.regularity_checks} checks")
    phi, psi = fixed_pairing_example()
    lhs, rhs = cz_pairing(phi, psi)
    res.add("(iii) fixed example == 3/32", abs(lhs - 3 / 32) <= 1e-12 and abs(rhs - 3 / 32) <= 1e-12,
            f"lhs={lhs!r} rhs={rhs!r}")
    lhs, rhs = cz_pairing(HaarExpansion.single(0, 0), {0: HaarExpansion.single(1, 2)})
    res.add("(iii) far-apart example == 0", lhs == 0 and abs(rhs) <= 1e-15, f"lhs={lhs!r} rhs={rhs!r}")
    worst = 0.0
    for t in range(pairs):
        phi, psi = random_separated_pair(trial_rng(seed, 4000 + t))
        lhs, rhs = cz_pairing(phi, psi)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1.0))
    res.add("(iii) pairing identity on random separated pairs", worst < 1e-8, f"max err {worst:.3e}")
    return res


def sweep_suite(seed: int = 0, trials: int = 500, s: float = 0.5) -> SuiteResult:
    res = SuiteResult("sweep")
    ps = (1.5, 2.0, 3.0, 4.0)
    full = ratio_sweep(SweepConfig(s, ps, 2 * trials, seed))
    r2 = full.ratios[:, 1]
    res.add("R_2 == 1", bool(np.all(np.abs(r2 - 1) <= 1e-10)), f"max dev {np.abs(r2 - 1).max():.3e}")
    for col, p in enumerate(ps):
        if p == 2.0:
            continue
        half = full.ratios[:trials, col].max()
        both = full.ratios[:, col].max()
        change = (both - half) / half
        res.add(f"max R_{p:g} finite and stable when trials double",
                bool(np.isfinite(both) and change < 0.05), f"{half:.6f} -> {both:.6f}")
    worst = 0.0
    for t in range(50):
        u = random_expansion(trial_rng(seed, 5000 + t), 20, (-3, 5), 16)
        a = lp_ratio(u, s, ps)
        b = lp_ratio(dilate_expansion(u), s, ps)
        worst = max(worst, max(abs(x - y) for x, y in zip(a, b)))
    res.add("R_p(Uu) == R_p(u)", worst <= 1e-8, f"max err {worst:.3e}")
    return res


SUITES = {
    "metric": metric_suite,
    "haar": haar_suite,
    "multiplier": multiplier_suite,
    "kernel": kernel_suite,
    "operators": operators_suite,
    "energy": energy_suite,
    "cz": cz_suite,
    "sweep": sweep_suite,
}


def run_suite(name: str, seed: int = 0) -> list[SuiteResult]:
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    out = []
    for n in names:
        t0 = time.perf_counter()
        r = SUITES[n](seed=seed)
        r.seconds = time.perf_counter() - t0
        out.append(r)
    return out
