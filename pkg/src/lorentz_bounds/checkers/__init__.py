from .angles import approximate_angle, chain_hinges, check_angle, check_hinge, check_monotonicity
from .convexity import check_biconcavity, check_concavity, check_tau_convexity
from .estimate import Tolerances, estimate_K, min_feasible_K, run_sense
from .four_point import FourPointVariant, check_four_point, four_point_agreement
from .report import (LIMIT_ANGLE_APPROXIMATED, Bound, CheckReport, Sense, Verdict, ViolationRecord,
                     merge_reports)
from .triangle import TriangleKind, Variant, check_triangle

__all__ = [
    "approximate_angle", "chain_hinges", "check_angle", "check_hinge", "check_monotonicity",
    "check_biconcavity", "check_concavity", "check_tau_convexity", "Tolerances", "estimate_K", "min_feasible_K",
    "run_sense", "FourPointVariant", "check_four_point", "four_point_agreement",
    "LIMIT_ANGLE_APPROXIMATED", "Bound", "CheckReport", "Sense", "Verdict", "ViolationRecord",
    "merge_reports", "TriangleKind", "Variant", "check_triangle",
]
