"""Verdicts, reports and a small accumulator shared by all checkers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Sense(str, Enum):
    TRIANGLE = "TRIANGLE"
    ONE_SIDED_TRIANGLE = "ONE_SIDED_TRIANGLE"
    CAUSAL_TRIANGLE = "CAUSAL_TRIANGLE"
    ONE_SIDED_CAUSAL_TRIANGLE = "ONE_SIDED_CAUSAL_TRIANGLE"
    STRICT_CAUSAL_TRIANGLE = "STRICT_CAUSAL_TRIANGLE"
    ONE_SIDED_STRICT_CAUSAL_TRIANGLE = "ONE_SIDED_STRICT_CAUSAL_TRIANGLE"
    MONOTONICITY = "MONOTONICITY"
    ONE_SIDED_MONOTONICITY = "ONE_SIDED_MONOTONICITY"
    ANGLE = "ANGLE"
    HINGE = "HINGE"
    FOUR_POINT_TIMELIKE = "FOUR_POINT_TIMELIKE"
    FOUR_POINT_ANGLE_VERSION = "FOUR_POINT_ANGLE_VERSION"
    FOUR_POINT_CAUSAL = "FOUR_POINT_CAUSAL"
    FOUR_POINT_STRICT_CAUSAL = "FOUR_POINT_STRICT_CAUSAL"
    TAU_CONVEXITY = "TAU_CONVEXITY"

    @classmethod
    def parse(cls, text: str) -> "Sense":
        return cls(text.strip().upper().replace("-", "_"))

    @property
    def cli_name(self) -> str:
        return self.value.lower().replace("_", "-")


class Bound(str, Enum):
    LOWER = "LOWER"
    UPPER = "UPPER"

    @classmethod
    def parse(cls, text: str) -> "Bound":
        return cls(text.strip().upper())


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"


LIMIT_ANGLE_APPROXIMATED = "LIMIT_ANGLE_APPROXIMATED"


@dataclass(frozen=True)
class ViolationRecord:
    ids: tuple
    lhs: float
    rhs: float
    margin: float
    kind: str = "tau"

    def to_dict(self) -> dict:
        return {"ids": list(self.ids), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class CheckReport:
    sense: str
    bound: Bound
    K: float
    verdict: Verdict
    tested: int
    violations: list
    min_slack: float
    flags: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.verdict is Verdict.FAIL) != bool(self.violations):
            raise ValueError("FAIL verdicts carry violations and only they do")
        if (self.verdict is Verdict.VACUOUS) != (self.tested == 0):
            raise ValueError("VACUOUS verdicts are exactly those with nothing tested")

    def to_dict(self) -> dict:
        return {
            "sense": self.sense,
            "bound": self.bound.value,
            "K": self.K,
            "verdict": self.verdict.value,
            "tested": self.tested,
            "min_slack": None if not math.isfinite(self.min_slack) else self.min_slack,
            "violations": [v.to_dict() for v in self.violations],
            "flags": list(self.flags),
        }


def merge_reports(reports) -> CheckReport:
    """Associative merge of reports for the same (sense, bound, K)."""
    reports = list(reports)
    first = reports[0]
    tested = sum(r.tested for r in reports)
    violations = sorted((v for r in reports for v in r.violations), key=_order)
    flags = sorted({f for r in reports for f in r.flags})
    min_slack = min(r.min_slack for r in reports)
    verdict = Verdict.VACUOUS if tested == 0 else Verdict.FAIL if violations else Verdict.PASS
    return CheckReport(first.sense, first.bound, first.K, verdict, tested, violations, min_slack, flags)


def _order(v: ViolationRecord):
    return (v.kind, v.ids, v.margin)


class Collector:
    """Accumulates vectorized inequality tests: slack >= -tol passes."""

    def __init__(self, sense, bound: Bound, K: float, tol: float):
        self.sense = sense.value if isinstance(sense, Sense) else str(sense)
        self.bound = Bound(bound)
        self.K = float(K)
        self.tol = tol
        self.tested = 0
        self.min_slack = math.inf
        self.violations: list[ViolationRecord] = []
        self.flags: list[str] = []
        self.notes: dict = {}

    def add(self, ids, lhs, rhs, slack, kind: str = "tau") -> None:
        slack = np.asarray(slack, dtype=float)
        if slack.size == 0:
            return
        ids = np.asarray(ids).reshape(slack.size, -1)
        lhs = np.broadcast_to(np.asarray(lhs, dtype=float), slack.shape)
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), slack.shape)
        self.tested += int(slack.size)
        self.min_slack = min(self.min_slack, float(np.min(slack)))
        for k in np.flatnonzero(slack < -self.tol):
            self.violations.append(ViolationRecord(tuple(int(i) for i in ids[k]), float(lhs[k]),
                                                   float(rhs[k]), float(slack[k]), kind))

    def add_implication(self, ids, premise, conclusion, kind: str = "causal") -> None:
        """Premise true and conclusion false is a violation; counted as tests where premise holds."""
        premise = np.asarray(premise, dtype=bool)
        conclusion = np.asarray(conclusion, dtype=bool)
        if premise.size == 0:
            return
        ids = np.asarray(ids).reshape(premise.size, -1)
        self.tested += int(np.count_nonzero(premise))
        for k in np.flatnonzero(premise & ~conclusion):
            self.violations.append(ViolationRecord(tuple(int(i) for i in ids[k]), 1.0, 0.0, -1.0, kind))

    def report(self) -> CheckReport:
        verdict = Verdict.VACUOUS if self.tested == 0 else Verdict.FAIL if self.violations else Verdict.PASS
        viol = sorted(self.violations, key=_order)
        return CheckReport(self.sense, self.bound, self.K, verdict, self.tested, viol,
                           self.min_slack, sorted(set(self.flags)), self.notes)
