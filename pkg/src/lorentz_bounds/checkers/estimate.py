"""Dispatch by sense and bracket the critical curvature by bisection."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NonMonotoneVerdicts, VacuousBracket
from ..finite_space import FiniteLorentzSpace
from .angles import check_angle, check_hinge, check_monotonicity
from .convexity import check_tau_convexity
from .four_point import FourPointVariant, check_four_point
from .report import Bound, CheckReport, Sense, Verdict
from .triangle import TriangleKind, Variant, check_triangle


@dataclass(frozen=True)
class Tolerances:
    tol: float = 1e-7
    tol_ang: float = 1e-7
    eps_straight: float = 1e-9


_TRIANGLES = {
    Sense.TRIANGLE: (Variant.BOTH_POINTS, TriangleKind.TIMELIKE),
    Sense.ONE_SIDED_TRIANGLE: (Variant.ONE_SIDED, TriangleKind.TIMELIKE),
    Sense.CAUSAL_TRIANGLE: (Variant.BOTH_POINTS, TriangleKind.CAUSAL),
    Sense.ONE_SIDED_CAUSAL_TRIANGLE: (Variant.ONE_SIDED, TriangleKind.CAUSAL),
    Sense.STRICT_CAUSAL_TRIANGLE: (Variant.BOTH_POINTS, TriangleKind.STRICT_CAUSAL),
    Sense.ONE_SIDED_STRICT_CAUSAL_TRIANGLE: (Variant.ONE_SIDED, TriangleKind.STRICT_CAUSAL),
}
_FOUR = {
    Sense.FOUR_POINT_TIMELIKE: FourPointVariant.TIMELIKE,
    Sense.FOUR_POINT_CAUSAL: FourPointVariant.CAUSAL,
    Sense.FOUR_POINT_STRICT_CAUSAL: FourPointVariant.STRICT,
}


def run_sense(S: FiniteLorentzSpace, sense, bound, K: float, tols: Tolerances = Tolerances(),
              angle_version: bool = False) -> CheckReport:
    sense, bound = Sense.parse(sense), Bound.parse(bound)
    if sense in _TRIANGLES:
        variant, kind = _TRIANGLES[sense]
        return check_triangle(S, K, bound, variant, kind, tols.tol)
    if sense in (Sense.MONOTONICITY, Sense.ONE_SIDED_MONOTONICITY):
        return check_monotonicity(S, K, bound, sense is Sense.ONE_SIDED_MONOTONICITY, tols.tol_ang)
    if sense is Sense.ANGLE:
        return check_angle(S, K, bound, tols.tol_ang)
    if sense is Sense.HINGE:
        return check_hinge(S, K, bound, tols.tol)
    if sense is Sense.FOUR_POINT_ANGLE_VERSION:
        return check_four_point(S, K, bound, FourPointVariant.TIMELIKE, True,
                                tols.tol, tols.tol_ang, tols.eps_straight)
    if sense in _FOUR:
        return check_four_point(S, K, bound, _FOUR[sense], angle_version,
                                tols.tol, tols.tol_ang, tols.eps_straight)
    return check_tau_convexity(S, K, bound, tols.tol)


def min_feasible_K(S: FiniteLorentzSpace) -> float:
    """Smallest curvature whose finite diameter still exceeds every separation in S (exclusive)."""
    diam = float(S.tau.max()) if S.n else 0.0
    return -(math.pi / diam) ** 2 if diam > 0 else -math.inf


def _passes(report: CheckReport) -> bool:
    # VACUOUS carries no counterexample and is read as "not failing"
    return report.verdict is not Verdict.FAIL


def estimate_K(S: FiniteLorentzSpace, sense, bound, bracket=(-2.0, 2.0), tol_K: float = 0.05,
               tols: Tolerances = Tolerances(), grid: int = 9):
    """Bracket (K_fail, K_pass) for LOWER or (K_pass, K_fail) for UPPER, of width <= tol_K.

    Comparison separations grow with K, so a lower bound by K holds for every
    larger K and an upper bound for every smaller K: LOWER verdicts pass on an
    up-set of the K axis and UPPER verdicts on a down-set.  A coarse grid scan
    checks this shape before bisecting.  Unbounded ends are reported as +-inf.
    """
    sense, bound = Sense.parse(sense), Bound.parse(bound)
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if lo <= min_feasible_K(S):
        raise ValueError(f"bracket starts at K={lo}, where the finite diameter no longer exceeds "
                         f"the largest separation; use K > {min_feasible_K(S):.6g}")
    Ks = np.linspace(lo, hi, grid)
    reports = [run_sense(S, sense, bound, float(K), tols) for K in Ks]
    if all(r.verdict is Verdict.VACUOUS for r in reports):
        raise VacuousBracket(f"{sense.value} is vacuous on the whole bracket")
    ok = [_passes(r) for r in reports]
    if bound is Bound.LOWER:
        # walk from the top so that passing verdicts come first in both cases
        ok, Ks = ok[::-1], Ks[::-1]
    n_pass = sum(1 for _ in _prefix(ok))
    if any(ok[n_pass:]):
        seq = ok[::-1] if bound is Bound.LOWER else ok
        raise NonMonotoneVerdicts("verdicts along the K grid: " + "".join("P" if v else "F" for v in seq))
    if n_pass == len(ok):
        return (-math.inf, lo) if bound is Bound.LOWER else (hi, math.inf)
    if n_pass == 0:
        return (hi, math.inf) if bound is Bound.LOWER else (-math.inf, lo)
    k_pass, k_fail = float(Ks[n_pass - 1]), float(Ks[n_pass])
    while abs(k_fail - k_pass) > tol_K:
        mid = 0.5 * (k_pass + k_fail)
        if _passes(run_sense(S, sense, bound, mid, tols)):
            k_pass = mid
        else:
            k_fail = mid
    return (k_fail, k_pass) if bound is Bound.LOWER else (k_pass, k_fail)


def _prefix(flags):
    for f in flags:
        if not f:
            return
        yield f
