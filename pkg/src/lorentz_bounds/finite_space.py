"""Finite Lorentzian pre-length spaces: data model, validation, generators, enumeration."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path

import jsonschema
import networkx as nx
import numpy as np

from . import model_space as ms
from .errors import NotCausal, SizeBound, SpaceFormatError
from .model_space import Chart, ModelPoint

RTI_TOL = 1e-9
CHAIN_TOL = 1e-9


@dataclass(frozen=True)
class ChainRealizer:
    ids: tuple
    total: float

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))


@dataclass
class FiniteLorentzSpace:
    tau: np.ndarray
    causal: np.ndarray
    chrono: np.ndarray
    points: list = field(default_factory=list)   # ModelPoint or None per id
    chains: list = field(default_factory=list)
    K: float | None = None                        # curvature of the annotating chart

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=float).reshape(len(self.tau), -1) if len(self.tau) else np.zeros((0, 0))
        n = self.tau.shape[0]
        self.causal = np.asarray(self.causal, dtype=bool).reshape(n, n)
        self.chrono = np.asarray(self.chrono, dtype=bool).reshape(n, n)
        if not self.points:
            self.points = [None] * n
        if len(self.points) != n:
            raise ValueError("one annotation slot per point is required")
        self.chains = [c if isinstance(c, ChainRealizer) else ChainRealizer(c, float(self.tau[c[0], c[-1]]))
                       for c in self.chains]

    @property
    def n(self) -> int:
        return self.tau.shape[0]

    @classmethod
    def from_tau(cls, tau, causal=None, chains=(), points=None, K=None) -> "FiniteLorentzSpace":
        tau = np.asarray(tau, dtype=float)
        chrono = tau > 0
        if causal is None:
            causal = transitive_closure(chrono | np.eye(len(tau), dtype=bool))
        return cls(tau, causal, chrono, list(points or []), list(chains), K)

    # --- chains -------------------------------------------------------------
    @cached_property
    def _chain_index(self) -> dict:
        """(i, j) -> (chain number, start index, end index) for i before j on a chain."""
        idx = {}
        for ci, ch in enumerate(self.chains):
            for a in range(len(ch.ids)):
                for b in range(a + 1, len(ch.ids)):
                    key = (ch.ids[a], ch.ids[b])
                    if key not in idx or (b - a) > idx[key][2] - idx[key][1]:
                        idx[key] = (ci, a, b)
        return idx

    @cached_property
    def chain_matrix(self) -> np.ndarray:
        H = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self._chain_index:
            H[i, j] = True
        return H

    def chain_between(self, i: int, j: int):
        """Ids of a recorded (sub-)chain from i to j, or None."""
        hit = self._chain_index.get((i, j))
        if hit is None:
            return None
        ci, a, b = hit
        return self.chains[ci].ids[a:b + 1]

    def chain_params(self, ids) -> np.ndarray:
        """Cumulative tau along a chain, starting at 0."""
        ids = list(ids)
        steps = [self.tau[a, b] for a, b in zip(ids, ids[1:])]
        return np.concatenate([[0.0], np.cumsum(steps)])

    # --- transformations ------------------------------------------------------
    def time_reversed(self) -> "FiniteLorentzSpace":
        chains = [ChainRealizer(tuple(reversed(c.ids)), c.total) for c in self.chains]
        pts = self.points
        if any(p is not None for p in pts):
            pts = [None if p is None else ModelPoint(p.chart, tuple(ms.time_reflect(p.chart, p.array)), p.scale)
                   for p in pts]
        return FiniteLorentzSpace(self.tau.T.copy(), self.causal.T.copy(), self.chrono.T.copy(),
                                  list(pts), chains, self.K)

    def scaled(self, s: float) -> "FiniteLorentzSpace":
        """All separations multiplied by s; annotations are dropped."""
        chains = [ChainRealizer(c.ids, c.total * s) for c in self.chains]
        return FiniteLorentzSpace(self.tau * s, self.causal.copy(), self.chrono.copy(), [], chains, None)

    def subset(self, keep) -> "FiniteLorentzSpace":
        keep = list(keep)
        pos = {old: new for new, old in enumerate(keep)}
        chains = [ChainRealizer([pos[i] for i in c.ids], c.total) for c in self.chains
                  if all(i in pos for i in c.ids)]
        ix = np.ix_(keep, keep)
        return FiniteLorentzSpace(self.tau[ix], self.causal[ix], self.chrono[ix],
                                  [self.points[i] for i in keep], chains, self.K)


def transitive_closure(R: np.ndarray) -> np.ndarray:
    R = np.array(R, dtype=bool)
    for k in range(len(R)):
        R |= R[:, k][:, None] & R[k, :][None, :]
    return R


# ------------------------------------------------------------------ validation

@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple


@dataclass
class SpaceValidationReport:
    violations: list = field(default_factory=list)
    not_applicable: tuple = ("comparison-neighbourhood topology",)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def _add(report, kind, rows, limit=50):
    for r in rows[:limit]:
        report.violations.append(Violation(kind, tuple(int(v) for v in r)))


def validate_space(S: FiniteLorentzSpace) -> SpaceValidationReport:
    rep = SpaceValidationReport()
    n = S.n
    if n == 0:
        return rep
    T, C, CH = S.tau, S.causal, S.chrono
    diag = np.arange(n)
    bad = np.argwhere((T > 0) != CH)
    _add(rep, "tau_chrono_mismatch", [r for r in bad if r[0] != r[1]])
    chrono_diag = np.flatnonzero(CH[diag, diag] | (T[diag, diag] > 0))
    _add(rep, "chronology", [(i, i) for i in chrono_diag])
    _add(rep, "chrono_not_causal", np.argwhere(CH & ~C))
    _add(rep, "causal_not_reflexive", [(i, i) for i in np.flatnonzero(~C[diag, diag])])
    Ci = C.astype(np.int64)
    trans = np.argwhere(((Ci @ Ci) > 0) & ~C)
    rows = []
    for i, k in trans[:50]:
        j = int(np.flatnonzero(C[i] & C[:, k])[0])
        rows.append((i, j, k))
    _add(rep, "causal_not_transitive", rows)
    rti, push = [], []
    for j in range(n):
        lhs = T[:, j][:, None] + T[j, :][None, :]
        mask = C[:, j][:, None] & C[j, :][None, :]
        mask[j, :] = False
        mask[:, j] = False
        for i, k in np.argwhere(mask & (T < lhs - RTI_TOL))[:50]:
            rti.append((i, j, k))
        pmask = (C[:, j][:, None] & CH[j, :][None, :]) | (CH[:, j][:, None] & C[j, :][None, :])
        for i, k in np.argwhere(pmask & ~CH)[:50]:
            push.append((i, j, k))
    _add(rep, "reverse_triangle", rti)
    _add(rep, "push_up", push)
    for c in S.chains:
        ids = list(c.ids)
        if any(not CH[a, b] for a, b in zip(ids, ids[1:])):
            rep.violations.append(Violation("chain_not_chronological", tuple(ids)))
        total = float(np.sum([T[a, b] for a, b in zip(ids, ids[1:])]))
        if abs(total - T[ids[0], ids[-1]]) > CHAIN_TOL or abs(c.total - T[ids[0], ids[-1]]) > CHAIN_TOL:
            rep.violations.append(Violation("chain_not_additive", tuple(ids)))
    return rep


# ------------------------------------------------------------------ generators

def induce_from_model(K: float, pts, chains=()) -> FiniteLorentzSpace:
    pts = list(pts)
    for p in pts:
        if p.chart is not ms.chart_for(K) or not math.isclose(p.scale, ms.scale_for(K), rel_tol=1e-12):
            raise ms.ChartMismatch("points do not live in the chart of K")
    T, C, CH = ms.pairwise(K, pts)
    return FiniteLorentzSpace(T, C, CH, pts, list(chains), K)


@dataclass(frozen=True)
class Diamond:
    """Causal diamond between the base point and the axis point at tau = height."""
    height: float


def _diamond_samples(K: float, H: float, n: int, rng: np.random.Generator) -> list:
    chart = ms.chart_for(K)
    s = ms.scale_for(K)
    Hn = H / s
    out = []
    if chart is Chart.MINKOWSKI:
        uv = rng.uniform(0.0, H, size=(n, 2))
        return [ms.minkowski_embed(K, 0.5 * (u + v), 0.5 * (v - u)) for u, v in uv]
    # conformal coordinates: metric (-d eta^2 + d theta^2) / cos^2(w)
    top = math.atan(math.sinh(Hn)) if chart is Chart.DESITTER else Hn
    wmax = top if chart is Chart.DESITTER else 0.5 * top
    floor = math.cos(wmax) ** 2
    while len(out) < n:
        a, b = rng.uniform(0.0, top, size=2)
        eta, theta = 0.5 * (a + b), 0.5 * (b - a)
        w = eta if chart is Chart.DESITTER else theta
        if rng.uniform() * math.cos(w) ** 2 > floor:
            continue
        if chart is Chart.DESITTER:
            out.append(ms.ds_embed(K, math.asinh(math.tan(eta)), theta))
        else:
            out.append(ms.ads_embed(K, eta, math.asinh(math.tan(theta))))
    return out


def sprinkle(K: float, region: Diamond, n: int, seed: int) -> FiniteLorentzSpace:
    if not region.height > 0:
        raise ValueError("diamond height must be positive")
    if region.height >= ms.finite_diameter(K):
        raise SizeBound("diamond height reaches the finite diameter")
    rng = np.random.default_rng(seed)
    return induce_from_model(K, _diamond_samples(K, region.height, n, rng))


def geodesic_lattice(K: float, hubs, samples_per_side: int) -> FiniteLorentzSpace:
    hubs = list(hubs)
    m = int(samples_per_side)
    if m < 0:
        raise ValueError("samples per side must be nonnegative")
    D = ms.finite_diameter(K)
    pts: list[ModelPoint] = []

    def add(p: ModelPoint) -> int:
        for i, q in enumerate(pts):
            if max(abs(a - b) for a, b in zip(p.coords, q.coords)) <= 1e-12:
                return i
        pts.append(p)
        return len(pts) - 1

    hub_ids = [add(h) for h in hubs]
    chain_ids = []
    for i, hi in enumerate(hubs):
        for j, hj in enumerate(hubs):
            if i == j or not ms.model_relation(K, hi, hj).is_chrono_forward:
                continue
            if ms.model_tau(K, hi, hj) >= D:
                raise SizeBound("hub pair separated by the finite diameter")
            ids = [hub_ids[i]]
            for k in range(1, m + 1):
                ids.append(add(ms.model_geodesic(K, hi, hj, k / (m + 1))))
            ids.append(hub_ids[j])
            chain_ids.append(ids)
    S = induce_from_model(K, pts)
    S.chains = [ChainRealizer(ids, float(S.tau[ids[0], ids[-1]])) for ids in chain_ids]
    return S


def hub_preset(K: float, name: str = "diamond", long_side: float = 2.0) -> list:
    """Named hub layouts whose triangles have long side `long_side`."""
    bottom = ms.base_point(K)
    top = ms.axis_point(K, long_side)
    from .comparison import TriangleSides, realize_triangle  # local: avoid cycle at import
    left = realize_triangle(K, TriangleSides(0.45 * long_side, 0.4 * long_side, long_side)).y
    right_tri = realize_triangle(K, TriangleSides(0.35 * long_side, 0.5 * long_side, long_side)).y
    right = ModelPoint(right_tri.chart, tuple(
        -c if k == ms.SPACE_INDEX[right_tri.chart] else c for k, c in enumerate(right_tri.coords)),
        right_tri.scale)
    if name == "diamond":
        return [bottom, left, right, top]
    if name == "pair":
        return [bottom, top]
    if name == "triangle":
        return [bottom, left, top]
    if name == "kite":
        mid = ms.axis_point(K, 0.5 * long_side)
        return [bottom, left, mid, right, top]
    raise ValueError(f"unknown hub preset {name!r}")


# ---------------------------------------------------------------- enumeration

class TriangleClass(str, Enum):
    TIMELIKE = "TIMELIKE"
    ADMISSIBLE_CAUSAL = "ADMISSIBLE_CAUSAL"


def triangle_arrays(S: FiniteLorentzSpace, require_chains: bool, causal: bool = True):
    """Index arrays (x, y, z, is_timelike) of all ordered triangles."""
    n = S.n
    if n < 3:
        z = np.zeros(0, dtype=int)
        return z, z, z, np.zeros(0, bool)
    CH, C = S.chrono, S.causal
    null = C & ~CH
    np.fill_diagonal(null, False)
    H = S.chain_matrix if require_chains else np.ones_like(CH)
    xs, ys, zs, tl = [], [], [], []
    for y in range(n):
        time_xy = CH[:, y] & H[:, y]
        time_yz = CH[y, :] & H[y, :]
        cases = [(time_xy[:, None] & time_yz[None, :], True)]
        if causal:
            cases.append((null[:, y][:, None] & time_yz[None, :], False))
            cases.append((time_xy[:, None] & null[y, :][None, :], False))
        for mask, timelike in cases:
            mask = mask & CH & H
            for x, z in np.argwhere(mask):
                if x == z:
                    continue
                xs.append(x)
                ys.append(y)
                zs.append(z)
                tl.append(timelike)
    order = np.lexsort((zs, ys, xs)) if xs else np.zeros(0, int)
    return (np.asarray(xs, int)[order], np.asarray(ys, int)[order], np.asarray(zs, int)[order],
            np.asarray(tl, bool)[order])


def enumerate_triangles(S: FiniteLorentzSpace, require_chains: bool = False, causal: bool = True):
    xs, ys, zs, tl = triangle_arrays(S, require_chains, causal)
    for x, y, z, t in zip(xs, ys, zs, tl):
        yield int(x), int(y), int(z), TriangleClass.TIMELIKE if t else TriangleClass.ADMISSIBLE_CAUSAL


class ConfigClass(str, Enum):
    TIMELIKE = "TIMELIKE"
    CAUSAL = "CAUSAL"


class Straight(str, Enum):
    NONE = "NONE"
    LEFT = "LEFT"
    RIGHT = "RIGHT"
    BOTH = "BOTH"


@dataclass(frozen=True)
class FourPointConfig:
    ids: tuple
    sense: str
    cls: ConfigClass
    endpoint_causal: bool
    straight: Straight

    @property
    def roles(self) -> dict:
        """Point ids keyed by role, independent of the tuple order."""
        if self.sense == "FUTURE":
            y, x, z1, z2 = self.ids
        else:
            z2, z1, x, y = self.ids
        return {"y": y, "x": x, "z1": z1, "z2": z2}


def four_point_candidates(S: FiniteLorentzSpace, cls: ConfigClass, sense: str):
    """Yield (y, x, Z) with Z the admissible z-ids for each chronological pair.

    For PAST the relations are read on the transposed matrices, so the same
    code serves both senses with (y, x, z) meaning the roles in the tuple.
    """
    CH = S.chrono if sense == "FUTURE" else S.chrono.T
    C = S.causal if sense == "FUTURE" else S.causal.T
    rel = CH if ConfigClass(cls) is ConfigClass.TIMELIKE else C
    for y in range(S.n):
        for x in np.flatnonzero(CH[y]):
            Z = np.flatnonzero(rel[x])
            Z = Z[(Z != x) & (Z != y)]
            if len(Z) >= 2:
                yield y, int(x), Z


def enumerate_four_point(S: FiniteLorentzSpace, cls: ConfigClass = ConfigClass.TIMELIKE,
                         sense: str = "FUTURE", endpoint_causal_only: bool = True,
                         straight_filter: str = "ANY", eps_straight: float = 1e-9):
    cls = ConfigClass(cls)
    T = S.tau if sense == "FUTURE" else S.tau.T
    C = S.causal if sense == "FUTURE" else S.causal.T
    CH = S.chrono if sense == "FUTURE" else S.chrono.T
    for y, x, Z in four_point_candidates(S, cls, sense):
        for z1 in Z:
            for z2 in Z:
                if z1 == z2:
                    continue
                ec = bool(C[z1, z2])
                if endpoint_causal_only and not ec:
                    continue
                left = abs(T[y, z1] - T[y, x] - T[x, z1]) <= eps_straight
                right = abs(T[y, z2] - T[y, x] - T[x, z2]) <= eps_straight
                st = Straight.BOTH if left and right else Straight.LEFT if left else \
                    Straight.RIGHT if right else Straight.NONE
                if straight_filter == "STRAIGHT" and st is Straight.NONE:
                    continue
                tl = bool(CH[x, z1] and CH[x, z2])
                ids = (y, x, int(z1), int(z2)) if sense == "FUTURE" else (int(z2), int(z1), x, y)
                yield FourPointConfig(ids, sense, ConfigClass.TIMELIKE if tl else ConfigClass.CAUSAL, ec, st)


# --------------------------------------------------------------------- chains

def longest_chain(S: FiniteLorentzSpace, x: int, z: int, min_interior: int = 1):
    """Longest-tau chronological chain from x to z with at least one interior point.

    Dynamic programming over the chronological DAG restricted to the diamond
    between x and z.  Returns (ids, total) or None when no interior point exists.
    """
    if not S.causal[x, z]:
        raise NotCausal(f"{x} is not causally before {z}")
    CH, T = S.chrono, S.tau
    inside = np.flatnonzero(CH[x] & CH[:, z])
    if len(inside) < min_interior:
        return None
    # topological order by tau from x (chronological edges increase it strictly)
    order = inside[np.argsort(T[x, inside], kind="stable")]
    best = {int(v): (T[x, v], [x, int(v)]) for v in order}
    for v in order:
        for w in order:
            if CH[v, w]:
                cand = best[int(v)][0] + T[v, w]
                if cand > best[int(w)][0]:
                    best[int(w)] = (cand, best[int(v)][1] + [int(w)])
    total, path = max(((b[0] + T[v, z], b[1]) for v, b in best.items()), key=lambda r: r[0])
    return path + [z], float(total)


def find_chains(S: FiniteLorentzSpace, x: int, z: int, tol: float = 1e-9, limit: int = 64) -> list:
    """Maximal tau-additive chains from x to z through at least one interior point."""
    if not S.causal[x, z]:
        raise NotCausal(f"{x} is not causally before {z}")
    T, CH = S.tau, S.chrono
    target = T[x, z]
    if target <= 0:
        return []
    between = np.flatnonzero(CH[x] & CH[:, z] & (T[x] + T[:, z] >= target - tol))
    if len(between) == 0:
        return []
    G = nx.DiGraph()
    nodes = [x, *map(int, between), z]
    G.add_nodes_from(nodes)
    for a in nodes:
        for b in nodes:
            if a != b and CH[a, b] and abs(T[x, a] + T[a, b] + T[b, z] - target) <= tol:
                G.add_edge(a, b)
    G.remove_edge(x, z) if G.has_edge(x, z) else None
    R = nx.transitive_reduction(G)
    chains = []
    for path in nx.all_simple_paths(R, x, z):
        total = float(sum(T[a, b] for a, b in zip(path, path[1:])))
        if total >= target - tol:
            chains.append(ChainRealizer(path, float(target)))
        if len(chains) >= limit:
            break
    return sorted(chains, key=lambda c: c.ids)


# ----------------------------------------------------------------- JSON format

SPACE_SCHEMA = {
    "type": "object",
    "required": ["points", "tau"],
    "properties": {
        "K": {"type": ["number", "null"]},
        "points": {"type": "array", "items": {
            "type": "object", "required": ["id"],
            "properties": {"id": {"type": "integer", "minimum": 0},
                           "chart": {"enum": [c.value for c in Chart]},
                           "coords": {"type": "array", "items": {"type": "number"}},
                           "scale": {"type": "number", "exclusiveMinimum": 0}}}},
        "tau": {"type": "array", "items": {"type": "array", "items": {"type": "number", "minimum": 0}}},
        "causal": {"type": "array", "items": {"type": "array", "items": {"type": "boolean"}}},
        "chains": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}


def space_to_dict(S: FiniteLorentzSpace) -> dict:
    points = []
    for i, p in enumerate(S.points):
        entry = {"id": i}
        if p is not None:
            entry.update(chart=p.chart.value, coords=list(p.coords), scale=p.scale)
        points.append(entry)
    out = {"points": points, "tau": S.tau.tolist(), "causal": S.causal.tolist(),
           "chains": [list(c.ids) for c in S.chains]}
    if S.K is not None:
        out["K"] = S.K
    return out


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def space_from_dict(d: dict) -> FiniteLorentzSpace:
    try:
        jsonschema.validate(d, SPACE_SCHEMA)
    except jsonschema.ValidationError as e:
        raise SpaceFormatError(f"{_path(e)}: {e.message}") from None
    n = len(d["points"])
    ids = [p["id"] for p in d["points"]]
    if sorted(ids) != list(range(n)):
        raise SpaceFormatError("points: ids must be 0..n-1")
    tau = np.asarray(d["tau"], dtype=float) if n else np.zeros((0, 0))
    if tau.shape != (n, n):
        raise SpaceFormatError(f"tau: expected a {n}x{n} matrix")
    causal = d.get("causal")
    if causal is not None:
        causal = np.asarray(causal, dtype=bool) if n else np.zeros((0, 0), bool)
        if causal.shape != (n, n):
            raise SpaceFormatError(f"causal: expected a {n}x{n} matrix")
    for k, ch in enumerate(d.get("chains", [])):
        if len(ch) < 2 or max(ch) >= n:
            raise SpaceFormatError(f"chains/{k}: needs at least two valid point ids")
    pts = [None] * n
    for k, p in enumerate(d["points"]):
        if "coords" in p:
            if "chart" not in p:
                raise SpaceFormatError(f"points/{k}: coords given without chart")
            try:
                pts[p["id"]] = ModelPoint(Chart(p["chart"]), tuple(p["coords"]), p.get("scale", 1.0))
            except ValueError as e:
                raise SpaceFormatError(f"points/{k}/coords: {e}") from None
    return FiniteLorentzSpace.from_tau(tau, causal, d.get("chains", []), pts, d.get("K"))


def save_space(S: FiniteLorentzSpace, path) -> None:
    Path(path).write_text(json.dumps(space_to_dict(S), indent=1))


def load_space(path) -> FiniteLorentzSpace:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SpaceFormatError(f"<root>: invalid JSON ({e})") from None
    return space_from_dict(d)
