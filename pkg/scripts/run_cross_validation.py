"""Verdict matrices for the model lattices on a K grid around the model curvature.

Writes one JSON and one CSV matrix per (K0, bound) into --out.
"""
import argparse
from pathlib import Path

from lorentz_bounds.harness import ExperimentPlan, SpaceSpec, cross_validate

SENSES = ["TRIANGLE", "ONE_SIDED_TRIANGLE", "CAUSAL_TRIANGLE", "ONE_SIDED_CAUSAL_TRIANGLE",
          "STRICT_CAUSAL_TRIANGLE", "ONE_SIDED_STRICT_CAUSAL_TRIANGLE", "MONOTONICITY",
          "ONE_SIDED_MONOTONICITY", "ANGLE", "HINGE", "FOUR_POINT_TIMELIKE", "FOUR_POINT_ANGLE_VERSION",
          "FOUR_POINT_CAUSAL", "FOUR_POINT_STRICT_CAUSAL", "TAU_CONVEXITY"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/cross_validation")
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--long-side", type=float, default=2.0)
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for K0 in (-1.0, 0.0, 1.0):
        grid = [K0 - 1, K0 - 0.5, K0, K0 + 0.5, K0 + 1]
        spec = SpaceSpec("lattice", K0, {"hubs": "diamond", "long_side": a.long_side, "m": a.m})
        S = spec.build()
        for bound in ("LOWER", "UPPER"):
            M = cross_validate(ExperimentPlan(spec, SENSES, grid, bound), S)
            stem = out / f"K0_{K0:+g}_{bound.lower()}"
            stem.with_suffix(".json").write_text(M.to_json())
            stem.with_suffix(".csv").write_text(M.to_csv())
            print(f"K0={K0:+g} {bound}: disagreements={len(M.disagreements)} "
                  f"flagged={M.flagged}")
            for s in SENSES:
                print(f"  {s:34s} {M.pattern(s)}")


if __name__ == "__main__":
    main()
