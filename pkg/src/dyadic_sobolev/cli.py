"""Command line entry point.

Exit status: 0 when every checked invariant holds, 1 when one fails,
2 on usage errors (bad arguments, unreadable input, invalid domain values).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from .dyadic import DyadicPoint, classify, delta, min_common_interval
from .energy import energy_report
from .haar import HaarExpansion
from .harness import SweepConfig, cz_pairing, ratio_sweep
from .multipliers import Multiplier, kernel_component, kernel_vector
from .operators import (
    GradientField,
    apply_multiplier,
    directional,
    frac_laplacian,
    gradient,
    inv_frac_laplacian,
    partial,
)
from .suites import SUITES, run_suite

log = logging.getLogger("dyadic_sobolev")

ENERGY_RTOL = 1e-9
GRADIENT_RTOL = 1e-12
PAIRING_TOL = 1e-8
R2_TOL = 1e-10


class UsageError(Exception):
    pass


def _point(text: str) -> DyadicPoint:
    try:
        return DyadicPoint.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _p_list(text: str) -> list[float]:
    try:
        return [float(Fraction(t)) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}") from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def cmd_delta(args) -> int:
    _emit({"x": str(args.x), "y": str(args.y), "delta": str(DyadicPoint.from_fraction(delta(args.x, args.y)))})
    return 0


def cmd_classify(args) -> int:
    lab = classify(args.x, args.y)
    _emit({"x": str(args.x), "y": str(args.y), "interval": min_common_interval(args.x, args.y).to_json(),
           "class": lab.class_index, "level": lab.level_index})
    return 0


def cmd_kernel(args) -> int:
    if args.component is not None:
        v = kernel_component(args.component, args.x, args.y)
        _emit({"i": args.component, "value": str(v), "float": float(v)})
        return 0
    K = kernel_vector(args.x, args.y)
    out = K.to_json()
    out["delta_times_norm"] = float(K.delta_xy) * K.norm()
    _emit(out)
    return 0 if K.delta_xy ** 2 * K.sq_norm() <= 4 else 1


def cmd_apply(args) -> int:
    f = HaarExpansion.from_json(_load_json(args.input))
    op = args.op
    if op == "laplacian":
        out = frac_laplacian(f, args.s).to_json()
    elif op == "inverse":
        out = inv_frac_laplacian(f, args.s).to_json()
    elif op == "partial":
        if args.i is None:
            raise UsageError("--op partial needs --i")
        out = partial(f, args.s, args.i).to_json()
    elif op == "directional":
        if args.m is None:
            raise UsageError("--op directional needs --m FILE")
        out = directional(f, args.s, Multiplier.from_json(_load_json(args.m))).to_json()
    elif op == "multiplier":
        if args.m is None:
            raise UsageError("--op multiplier needs --m FILE")
        out = apply_multiplier(f, Multiplier.from_json(_load_json(args.m))).to_json()
    else:
        out = gradient(f, args.s).to_json()
    _emit(out)
    return 0


def cmd_energy(args) -> int:
    f = HaarExpansion.from_json(_load_json(args.input))
    rep = energy_report(f, args.s)
    _emit(rep.to_json())
    ok = _rel(rep.integral, rep.c * rep.spectral) <= ENERGY_RTOL or rep.integral == rep.spectral == 0
    ok &= _rel(rep.spectral, rep.gradient) <= GRADIENT_RTOL or rep.spectral == rep.gradient == 0
    return 0 if ok else 1


def cmd_pairing(args) -> int:
    phi = HaarExpansion.from_json(_load_json(args.phi))
    psi = GradientField.from_json(_load_json(args.psi))
    lhs, rhs = cz_pairing(phi, psi)
    err = abs(lhs - rhs) / max(abs(lhs), 1.0)
    _emit({"lhs": lhs, "rhs": rhs, "error": err})
    return 0 if err < PAIRING_TOL else 1


def cmd_sweep(args) -> int:
    cfg = SweepConfig(args.s, tuple(args.p), args.trials, args.seed, args.coeffs,
                      (args.levels[0], args.levels[1]), args.pos_max)
    rep = ratio_sweep(cfg, workers=args.workers)
    if args.format == "csv":
        buf = io.StringIO()
        rows = rep.to_rows()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        _emit(rep.to_json())
    if 2.0 in cfg.p_list:
        col = cfg.p_list.index(2.0)
        if abs(rep.ratios[:, col] - 1).max() > R2_TOL:
            return 1
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, seed=args.seed)
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["suite", "check", "passed", "witness"])
        for r in results:
            for c in r.checks:
                writer.writerow([r.name, c.name, int(c.passed), c.witness])
    else:
        _emit({"passed": all(r.passed for r in results), "suites": [r.to_json() for r in results]})
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyadic-sobolev", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("delta", cmd_delta, "dyadic distance of two points"),
                               ("classify", cmd_classify, "butterfly class and level of a pair")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("x", type=_point, help='point as "n/2^q"')
        sp.add_argument("y", type=_point)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("kernel", help="exact l2-valued kernel K(x, y)")
    sp.add_argument("x", type=_point)
    sp.add_argument("y", type=_point)
    sp.add_argument("--component", type=int, default=None)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("apply", help="apply a Haar-diagonal operator to an expansion")
    sp.add_argument("--op", required=True,
                    choices=["laplacian", "inverse", "partial", "directional", "multiplier", "gradient"])
    sp.add_argument("--s", type=float, default=0.5)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--i", type=int)
    group.add_argument("--m", metavar="FILE")
    sp.add_argument("input", metavar="IN.json")
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("energy", help="integral, spectral and gradient energies")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("input", metavar="IN.json")
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("pairing", help="both sides of the kernel pairing identity")
    sp.add_argument("phi", metavar="PHI.json")
    sp.add_argument("psi", metavar="PSI.json")
    sp.set_defaults(func=cmd_pairing)

    sp = sub.add_parser("sweep", help="Monte Carlo L^p ratio sweep")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--p", type=_p_list, required=True, help="comma separated, e.g. 3/2,2,3,4")
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--coeffs", type=int, default=20)
    sp.add_argument("--levels", type=int, nargs=2, default=(-3, 5), metavar=("JLO", "JHI"))
    sp.add_argument("--pos-max", type=int, default=16)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run a property suite")
    sp.add_argument("suite", help=f"one of {', '.join([*SUITES, 'all'])}")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        log.debug("usage error", exc_info=True)
        print(f"dyadic-sobolev: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
