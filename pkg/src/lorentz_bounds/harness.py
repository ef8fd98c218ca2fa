"""Batch experiments: cross-sense agreement matrices and refinement studies."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .checkers import (Bound, Sense, Tolerances, Verdict, chain_hinges, min_feasible_K,
                       run_sense)
from .checkers.angles import _approximation, exact_angle, hinge_table
from .finite_space import (Diamond, FiniteLorentzSpace, geodesic_lattice, hub_preset, load_space,
                           sprinkle)

GENERATORS = ("sprinkle", "lattice", "file", "empty")


@dataclass
class SpaceSpec:
    """How to build the space: generator name, its parameters and the seed."""
    generator: str
    K: float = 0.0
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")

    def build(self) -> FiniteLorentzSpace:
        p = self.params
        if self.generator == "sprinkle":
            return sprinkle(self.K, Diamond(float(p.get("height", 2.0))), int(p.get("n", 40)),
                            int(self.seed if self.seed is not None else 0))
        if self.generator == "lattice":
            hubs = hub_preset(self.K, p.get("hubs", "diamond"), float(p.get("long_side", 2.0)))
            return geodesic_lattice(self.K, hubs, int(p.get("m", 4)))
        if self.generator == "file":
            return load_space(p["path"])
        return FiniteLorentzSpace.from_tau(np.zeros((0, 0)))


@dataclass
class ExperimentPlan:
    space: SpaceSpec
    senses: list
    K_grid: list
    bound: str = "LOWER"
    tol: float = 1e-7
    tol_ang: float = 1e-7
    eps_straight: float = 1e-9

    def __post_init__(self):
        if isinstance(self.space, dict):
            self.space = SpaceSpec(**self.space)
        self.senses = [Sense.parse(s).value for s in self.senses]
        self.bound = Bound.parse(self.bound).value
        self.K_grid = [float(k) for k in self.K_grid]

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol, self.tol_ang, self.eps_straight)

    def validate(self, S: FiniteLorentzSpace | None = None) -> FiniteLorentzSpace:
        """Check the plan against its space and return the built space."""
        if list(self.K_grid) != sorted(self.K_grid):
            raise ValueError("K grid must be sorted")
        if len(set(self.K_grid)) != len(self.K_grid):
            raise ValueError("K grid has repeated values")
        S = self.space.build() if S is None else S
        kmin = min_feasible_K(S)
        bad = [k for k in self.K_grid if k <= kmin]
        if bad:
            raise ValueError(f"K values {bad} leave no room for the space's largest separation "
                             f"(need K > {kmin:.6g})")
        return S

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentPlan":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def load(cls, path) -> "ExperimentPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class Disagreement:
    K: float
    sense_a: str
    verdict_a: str
    sense_b: str
    verdict_b: str


@dataclass
class AgreementMatrix:
    senses: list
    K_grid: list
    bound: str
    verdicts: dict                      # sense -> verdict per K
    flagged: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    vacuous_disagreements: list = field(default_factory=list)
    reports: dict = field(default_factory=dict, repr=False)

    def pattern(self, sense) -> str:
        return "".join(v[0] for v in self.verdicts[Sense.parse(sense).value])

    def consistent(self) -> bool:
        """The disagreement lists are exactly what the matrix implies."""
        a, b = _disagreements(self.senses, self.K_grid, self.verdicts, set(self.flagged))
        return (sorted(map(_key, a)) == sorted(map(_key, self.disagreements))
                and sorted(map(_key, b)) == sorted(map(_key, self.vacuous_disagreements)))

    def to_dict(self) -> dict:
        return {"senses": self.senses, "K_grid": self.K_grid, "bound": self.bound,
                "verdicts": self.verdicts, "flagged": self.flagged,
                "disagreements": [asdict(d) for d in self.disagreements],
                "vacuous_disagreements": [asdict(d) for d in self.vacuous_disagreements]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "AgreementMatrix":
        return cls(d["senses"], d["K_grid"], d["bound"], d["verdicts"], d.get("flagged", []),
                   [Disagreement(**x) for x in d.get("disagreements", [])],
                   [Disagreement(**x) for x in d.get("vacuous_disagreements", [])])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sense"] + [repr(k) for k in self.K_grid])
        for s in self.senses:
            w.writerow([s] + self.verdicts[s])
        return buf.getvalue()


def _key(d: Disagreement):
    return (d.K, d.sense_a, d.sense_b)


def _disagreements(senses, K_grid, verdicts, flagged):
    hard, vacuous = [], []
    usable = [s for s in senses if s not in flagged]
    for k, K in enumerate(K_grid):
        for a, b in combinations(usable, 2):
            va, vb = verdicts[a][k], verdicts[b][k]
            if va == vb:
                continue
            d = Disagreement(K, a, va, b, vb)
            (vacuous if Verdict.VACUOUS.value in (va, vb) else hard).append(d)
    return hard, vacuous


def run_cell(S: FiniteLorentzSpace, sense: str, bound: str, K: float, tols: Tolerances):
    return run_sense(S, sense, bound, K, tols)


def cross_validate(plan: ExperimentPlan, S: FiniteLorentzSpace | None = None) -> AgreementMatrix:
    """Run every sense at every K of the plan and compare the verdicts."""
    S = plan.validate(S)
    tols = plan.tolerances
    verdicts, reports, flagged = {}, {}, []
    for s in plan.senses:
        row = []
        for K in plan.K_grid:
            r = run_cell(S, s, plan.bound, K, tols)
            reports[(s, K)] = r
            row.append(r.verdict.value)
            if r.flags and s not in flagged:
                flagged.append(s)
        verdicts[s] = row
    hard, vacuous = _disagreements(plan.senses, plan.K_grid, verdicts, set(flagged))
    return AgreementMatrix(list(plan.senses), list(plan.K_grid), plan.bound, verdicts, flagged,
                           hard, vacuous, reports)


# ------------------------------------------------------------------ refinement

REFINABLE = (Sense.ANGLE, Sense.HINGE, Sense.MONOTONICITY)


@dataclass
class RefinementRow:
    m: int
    n_points: int
    min_slack: float
    worst_error: float
    verdict: str


def _hub_hinges(S: FiniteLorentzSpace):
    ends = {c.ids[0] for c in S.chains} | {c.ids[-1] for c in S.chains}
    return [h for h in chain_hinges(S) if h.vertex in ends]


def approximation_error(S: FiniteLorentzSpace, sense, K0: float) -> float:
    """Largest error of the limit-angle approximation at hub vertices.

    ANGLE: |approximate - exact| angle.  HINGE: |tau - comparison tau| at the
    cell joining the two ray ends.  Hubs and ray ends are the same points for
    every refinement, so the numbers are comparable across lattices.
    """
    sense = Sense.parse(sense)
    worst = 0.0
    for h in _hub_hinges(S):
        ap = _approximation(S, h)
        if ap is None:
            continue
        if sense is Sense.ANGLE:
            ex = exact_angle(S, h)
            if ex is not None:
                worst = max(worst, abs(ap[0] - ex))
            continue
        I, J, actual, model = hinge_table(S, h, K0, ap[0])
        last = (I == len(h.alpha.ids) - 1) & (J == len(h.beta.ids) - 1)
        if np.any(last):
            worst = max(worst, float(np.max(np.abs(actual[last] - model[last]))))
    return worst


def refinement_study(K0: float, hubs="diamond", m_list=(2, 4, 8, 16), sense=Sense.ANGLE,
                     long_side: float = 2.0, tols: Tolerances = Tolerances()) -> list:
    """One row per m: min slack over both bounds at K0, approximation error and verdict."""
    sense = Sense.parse(sense)
    if sense not in REFINABLE:
        raise ValueError(f"refinement is defined for {[s.value for s in REFINABLE]}")
    hub_pts = hub_preset(K0, hubs, long_side) if isinstance(hubs, str) else list(hubs)
    rows = []
    for m in m_list:
        S = geodesic_lattice(K0, hub_pts, m)
        reps = [run_sense(S, sense, b, K0, tols) for b in (Bound.LOWER, Bound.UPPER)]
        slack = min(r.min_slack for r in reps)
        if sense is Sense.MONOTONICITY:
            err = max(0.0, -slack) if math.isfinite(slack) else 0.0
        else:
            err = approximation_error(S, sense, K0)
        rows.append(RefinementRow(int(m), S.n, float(slack), float(err), _combined(reps)))
    return rows


def _combined(reports) -> str:
    vs = {r.verdict for r in reports}
    if Verdict.FAIL in vs:
        return Verdict.FAIL.value
    if vs == {Verdict.VACUOUS}:
        return Verdict.VACUOUS.value
    return Verdict.PASS.value


def decreasing(errors, slack: float = 0.1, floor: float = 1e-12) -> bool:
    """Each error is below the previous one, allowing 10% slack and ignoring values at noise level."""
    errors = list(errors)
    return all(b < a * (1.0 + slack) or max(a, b) <= floor for a, b in zip(errors, errors[1:]))


def refinement_table(rows) -> str:
    lines = ["m,n_points,min_slack,worst_error,verdict"]
    lines += [f"{r.m},{r.n_points},{r.min_slack!r},{r.worst_error!r},{r.verdict}" for r in rows]
    return "\n".join(lines) + "\n"


def feasible_grid(S: FiniteLorentzSpace, K_grid) -> list:
    kmin = min_feasible_K(S)
    return [float(k) for k in K_grid if k > kmin]


__all__ = ["SpaceSpec", "ExperimentPlan", "AgreementMatrix", "Disagreement", "cross_validate",
           "RefinementRow", "refinement_study", "approximation_error", "decreasing", "refinement_table",
           "feasible_grid"]
