"""Command-line entry point.

Exit codes: 0 pass or success, 1 fail, 2 usage or input error, 3 vacuous.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .checkers import Bound, Sense, Tolerances, Verdict, estimate_K, run_sense
from .errors import LorentzBoundsError, NonMonotoneVerdicts, SpaceFormatError, VacuousBracket
from .finite_space import (Diamond, geodesic_lattice, hub_preset, load_space, save_space, sprinkle,
                           validate_space)
from .harness import ExperimentPlan, cross_validate, refinement_study, refinement_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_VACUOUS = 0, 1, 2, 3
_EXIT = {Verdict.PASS: EXIT_OK, Verdict.FAIL: EXIT_FAIL, Verdict.VACUOUS: EXIT_VACUOUS}


def dumps(obj) -> str:
    """Canonical JSON text shared by the CLI and golden files."""
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sense(text):
    try:
        return Sense.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown sense {text!r}; choose from {', '.join(s.cli_name for s in Sense)}") from None


def _bound(text):
    try:
        return Bound.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bound must be lower or upper") from None


def _region(text: str) -> Diamond:
    # "diamond:H" or just the height H
    name, _, h = text.rpartition(":")
    if name not in ("", "diamond"):
        raise argparse.ArgumentTypeError("region must be diamond:HEIGHT")
    return Diamond(float(h))


def _m_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------- commands

def cmd_sprinkle(a) -> int:
    save_space(sprinkle(a.k, a.region, a.n, a.seed), a.out)
    return EXIT_OK


def cmd_lattice(a) -> int:
    save_space(geodesic_lattice(a.k, hub_preset(a.k, a.hubs, a.long_side), a.m), a.out)
    return EXIT_OK


def cmd_validate(a) -> int:
    rep = validate_space(load_space(a.inp))
    _emit(dumps({"ok": rep.ok, "violations": [{"kind": v.kind, "witness": list(v.witness)} for v in rep.violations],
                 "not_applicable": list(rep.not_applicable)}), a.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_check(a) -> int:
    S = load_space(a.inp)
    tols = Tolerances(a.tol, a.tol_ang, a.eps_straight)
    rep = run_sense(S, a.sense, a.bound, a.k, tols, angle_version=a.angle_version)
    _emit(dumps(rep.to_dict()), a.out)
    return _EXIT[rep.verdict]


def _finite(x):
    return x if math.isfinite(x) else None


def cmd_estimate(a) -> int:
    S = load_space(a.inp)
    tols = Tolerances(a.tol, a.tol_ang, a.eps_straight)
    out = {"sense": a.sense.value, "bound": a.bound.value, "bracket": [a.lo, a.hi], "tol_K": a.tol_k}
    try:
        k1, k2 = estimate_K(S, a.sense, a.bound, (a.lo, a.hi), a.tol_k, tols, a.grid)
    except VacuousBracket as e:
        out["error"] = str(e)
        _emit(dumps(out), a.out)
        return EXIT_VACUOUS
    except NonMonotoneVerdicts as e:
        out["error"] = str(e)
        _emit(dumps(out), a.out)
        return EXIT_FAIL
    keys = ("K_fail", "K_pass") if a.bound is Bound.LOWER else ("K_pass", "K_fail")
    out["interval"] = [_finite(k1), _finite(k2)]
    out.update(zip(keys, out["interval"]))
    _emit(dumps(out), a.out)
    return EXIT_OK


def cmd_cross_validate(a) -> int:
    M = cross_validate(ExperimentPlan.load(a.plan))
    _emit(dumps(M.to_dict()), a.out)
    if a.csv:
        Path(a.csv).write_text(M.to_csv())
    return EXIT_FAIL if M.disagreements else EXIT_OK


def cmd_refine(a) -> int:
    rows = refinement_study(a.k0, a.hubs, a.m_list, a.sense, a.long_side)
    _emit(refinement_table(rows), a.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _add_tols(p):
    p.add_argument("--tol", type=float, default=1e-7, help="tolerance on time separations")
    p.add_argument("--tol-ang", type=float, default=1e-7, help="tolerance on angles")
    p.add_argument("--eps-straight", type=float, default=1e-9,
                   help="slack for treating a four-point configuration as straight")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lorentz-bounds", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sprinkle", help="uniform sample of a causal diamond in the model space")
    p.add_argument("--k", type=float, required=True, help="curvature of the model space")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--seed", type=int, required=True, help="random seed")
    p.add_argument("--region", type=_region, default=Diamond(2.0), help="diamond:HEIGHT (default diamond:2)")
    p.add_argument("--out", required=True, help="output space JSON")
    p.set_defaults(func=cmd_sprinkle)

    p = sub.add_parser("lattice", help="hubs joined by sampled model geodesics")
    p.add_argument("--k", type=float, required=True, help="curvature of the model space")
    p.add_argument("--hubs", default="diamond", choices=["diamond", "pair", "triangle", "kite"],
                   help="hub layout")
    p.add_argument("--m", type=int, required=True, help="interior samples per geodesic")
    p.add_argument("--long-side", type=float, default=2.0, help="separation of the outer hubs")
    p.add_argument("--out", required=True, help="output space JSON")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("validate", help="check the axioms of a space file")
    p.add_argument("--in", dest="inp", required=True, help="space JSON")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="test one curvature bound at one K")
    p.add_argument("--in", dest="inp", required=True, help="space JSON")
    p.add_argument("--sense", type=_sense, required=True, help="e.g. four-point-timelike")
    p.add_argument("--bound", type=_bound, required=True, help="lower or upper")
    p.add_argument("--k", type=float, required=True, help="comparison curvature")
    _add_tols(p)
    p.add_argument("--angle-version", action="store_true",
                   help="use the angle form for four-point senses")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("estimate-k", help="bracket the critical K by bisection")
    p.add_argument("--in", dest="inp", required=True, help="space JSON")
    p.add_argument("--sense", type=_sense, required=True)
    p.add_argument("--bound", type=_bound, required=True)
    p.add_argument("--lo", type=float, default=-2.0)
    p.add_argument("--hi", type=float, default=2.0)
    p.add_argument("--tol-k", type=float, default=0.05, help="width of the returned interval")
    p.add_argument("--grid", type=int, default=9, help="points of the initial scan")
    _add_tols(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("cross-validate", help="run an experiment plan")
    p.add_argument("--plan", required=True, help="plan JSON")
    p.add_argument("--out", help="matrix JSON (default stdout)")
    p.add_argument("--csv", help="also write the verdict matrix as CSV")
    p.set_defaults(func=cmd_cross_validate)

    p = sub.add_parser("refine", help="limit-angle refinement study on model lattices")
    p.add_argument("--k0", type=float, required=True)
    p.add_argument("--sense", type=_sense, required=True, help="angle, hinge or monotonicity")
    p.add_argument("--m-list", type=_m_list, default=[2, 4, 8, 16], help="comma separated")
    p.add_argument("--hubs", default="diamond", choices=["diamond", "pair", "triangle", "kite"])
    p.add_argument("--long-side", type=float, default=2.0)
    p.add_argument("--out", help="CSV output (default stdout)")
    p.set_defaults(func=cmd_refine)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return a.func(a)
    except SpaceFormatError as e:
        print(f"error: invalid space file: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LorentzBoundsError, ValueError, OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
