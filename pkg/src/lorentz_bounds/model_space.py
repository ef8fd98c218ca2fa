"""Two-dimensional Lorentzian model spaces L^2(K).

Every point is stored in a normalized chart (curvature -1, 0 or +1) together
with the scale 1/sqrt(|K|) that maps the chart onto L^2(K).  Time separations,
lengths and the finite diameter scale linearly with that factor.

Charts
------
MINKOWSKI      (t, x) with metric -dt^2 + dx^2.
DESITTER       (t, x, y) on -t^2 + x^2 + y^2 = 1, ambient signature (-,+,+).
ANTIDESITTER   (s, t, x) on -s^2 - t^2 + x^2 = -1, ambient signature (-,-,+),
               restricted to pairs whose separation stays below pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ChartMismatch, FundamentalDomainError, NotChronological, SizeBound

NULL_TOL = 1e-10
CLAMP_TOL = 1e-12
QUADRIC_TOL = 1e-9
COINCIDE_TOL = 1e-12


class Chart(str, Enum):
    MINKOWSKI = "MINKOWSKI"
    DESITTER = "DESITTER"
    ANTIDESITTER = "ANTIDESITTER"


class Relation(str, Enum):
    CHRONOLOGICAL = "CHRONOLOGICAL"
    NULL_CAUSAL = "NULL_CAUSAL"
    UNRELATED = "UNRELATED"


class Direction(str, Enum):
    FORWARD = "FORWARD"
    BACKWARD = "BACKWARD"
    NONE = "NONE"


class Orientation(str, Enum):
    FUTURE = "FUTURE"
    PAST = "PAST"


@dataclass(frozen=True)
class CausalClass:
    value: Relation
    direction: Direction

    def __post_init__(self):
        if (self.value is Relation.UNRELATED) != (self.direction is Direction.NONE):
            raise ValueError("UNRELATED pairs carry direction NONE and only they do")

    @property
    def is_causal_forward(self) -> bool:
        return self.value is not Relation.UNRELATED and self.direction is Direction.FORWARD

    @property
    def is_chrono_forward(self) -> bool:
        return self.value is Relation.CHRONOLOGICAL and self.direction is Direction.FORWARD


_SIGNATURE = {
    Chart.MINKOWSKI: np.array([-1.0, 1.0]),
    Chart.DESITTER: np.array([-1.0, 1.0, 1.0]),
    Chart.ANTIDESITTER: np.array([-1.0, -1.0, 1.0]),
}
_QUADRIC = {Chart.DESITTER: 1.0, Chart.ANTIDESITTER: -1.0}
# base point and the (time, space) unit tangents at it
_BASE = {
    Chart.MINKOWSKI: np.array([0.0, 0.0]),
    Chart.DESITTER: np.array([0.0, 0.0, 1.0]),
    Chart.ANTIDESITTER: np.array([1.0, 0.0, 0.0]),
}
_E_TIME = {
    Chart.MINKOWSKI: np.array([1.0, 0.0]),
    Chart.DESITTER: np.array([1.0, 0.0, 0.0]),
    Chart.ANTIDESITTER: np.array([0.0, 1.0, 0.0]),
}
_E_SPACE = {
    Chart.MINKOWSKI: np.array([0.0, 1.0]),
    Chart.DESITTER: np.array([0.0, 1.0, 0.0]),
    Chart.ANTIDESITTER: np.array([0.0, 0.0, 1.0]),
}
# index of the coordinate that is negative on the left half of the chart
SPACE_INDEX = {Chart.MINKOWSKI: 1, Chart.DESITTER: 1, Chart.ANTIDESITTER: 2}


def chart_for(K: float) -> Chart:
    if K > 0:
        return Chart.DESITTER
    if K < 0:
        return Chart.ANTIDESITTER
    return Chart.MINKOWSKI


def scale_for(K: float) -> float:
    return 1.0 if K == 0 else 1.0 / math.sqrt(abs(K))


def finite_diameter(K: float) -> float:
    if not math.isfinite(K):
        raise ValueError("curvature must be finite")
    if K >= 0:
        return math.inf
    return math.pi / math.sqrt(-K)


@dataclass(frozen=True)
class ModelPoint:
    chart: Chart
    coords: tuple
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "chart", Chart(self.chart))
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        dim = 2 if self.chart is Chart.MINKOWSKI else 3
        if len(self.coords) != dim:
            raise ValueError(f"{self.chart.value} points need {dim} coordinates")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.chart is Chart.MINKOWSKI and self.scale != 1.0:
            raise ValueError("Minkowski points have scale 1")
        if self.chart in _QUADRIC:
            v = np.asarray(self.coords)
            q = float(np.sum(_SIGNATURE[self.chart] * v * v))
            if abs(q - _QUADRIC[self.chart]) > QUADRIC_TOL * max(1.0, float(np.max(v * v))):
                raise ValueError(f"coordinates {self.coords} are off the {self.chart.value} quadric")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


def _point(chart: Chart, v, scale: float) -> ModelPoint:
    return ModelPoint(chart, tuple(float(c) for c in v), scale)


def inner(chart: Chart, v, w):
    """Ambient bilinear form; broadcasts over leading axes."""
    return np.sum(_SIGNATURE[Chart(chart)] * np.asarray(v) * np.asarray(w), axis=-1)


def project_to_quadric(chart: Chart, v):
    """Rescale ambient vectors back onto the quadric (no-op for Minkowski)."""
    v = np.asarray(v, dtype=float)
    if chart is Chart.MINKOWSKI:
        return v
    q = inner(chart, v, v) * _QUADRIC[chart]
    return v / np.sqrt(q)[..., None]


# ----------------------------------------------------------------- embeddings

def _check_sign(K: float, chart: Chart) -> None:
    if chart_for(K) is not chart:
        raise ChartMismatch(f"K={K} does not live in the {chart.value} chart")


def minkowski_embed(K: float, t: float, x: float) -> ModelPoint:
    _check_sign(K, Chart.MINKOWSKI)
    return ModelPoint(Chart.MINKOWSKI, (t, x), 1.0)


def ds_embed(K: float, u: float, theta: float = 0.0) -> ModelPoint:
    """Global de Sitter point with normalized time u and angle theta."""
    _check_sign(K, Chart.DESITTER)
    return ModelPoint(Chart.DESITTER,
                      (math.sinh(u), math.cosh(u) * math.sin(theta), math.cosh(u) * math.cos(theta)),
                      scale_for(K))


def ads_embed(K: float, phi: float, rho: float = 0.0) -> ModelPoint:
    """Anti-de Sitter point with normalized time angle phi and radial parameter rho."""
    _check_sign(K, Chart.ANTIDESITTER)
    return ModelPoint(Chart.ANTIDESITTER,
                      (math.cosh(rho) * math.cos(phi), math.cosh(rho) * math.sin(phi), math.sinh(rho)),
                      scale_for(K))


def embed(K: float, a: float, b: float) -> ModelPoint:
    """Chart-independent constructor: (t, x), (u, theta) or (phi, rho) by sign of K."""
    chart = chart_for(K)
    if chart is Chart.MINKOWSKI:
        return minkowski_embed(K, a, b)
    if chart is Chart.DESITTER:
        return ds_embed(K, a, b)
    return ads_embed(K, a, b)


def base_point(K: float) -> ModelPoint:
    chart = chart_for(K)
    return _point(chart, _BASE[chart], scale_for(K))


def exp_base(K: float, length: float, rapidity: float = 0.0,
             orientation: Orientation = Orientation.FUTURE) -> ModelPoint:
    """Endpoint of the timelike geodesic of given tau-length leaving the base point.

    The initial unit tangent is (cosh r, sinh r) in the (time, space) frame at the
    base point, reversed for past orientation; negative rapidity points left.
    """
    chart = chart_for(K)
    s = scale_for(K)
    L = length / s
    sign = 1.0 if Orientation(orientation) is Orientation.FUTURE else -1.0
    u = sign * (math.cosh(rapidity) * _E_TIME[chart] + math.sinh(rapidity) * _E_SPACE[chart])
    base = _BASE[chart]
    if chart is Chart.MINKOWSKI:
        v = base + L * u
    elif chart is Chart.DESITTER:
        v = math.cosh(L) * base + math.sinh(L) * u
    else:
        if L >= math.pi:
            raise SizeBound(f"length {length} reaches the finite diameter")
        v = math.cos(L) * base + math.sin(L) * u
    return _point(chart, v, s)


def axis_point(K: float, tau: float) -> ModelPoint:
    """Point at signed tau-distance along the canonical vertical geodesic."""
    if tau >= 0:
        return exp_base(K, tau, 0.0, Orientation.FUTURE)
    return exp_base(K, -tau, 0.0, Orientation.PAST)


# ----------------------------------------------------------- causal structure

def _same_space(p: ModelPoint, q: ModelPoint) -> None:
    if p.chart is not q.chart or not math.isclose(p.scale, q.scale, rel_tol=1e-12):
        raise ChartMismatch("points live in different charts or scales")


def classify_arrays(chart: Chart, P, Q):
    """Vectorized causal classification in normalized units.

    Returns (tau, rel, direction) with tau the normalized separation in the
    forward or backward direction (0 unless chronological), rel in
    {0: unrelated, 1: null, 2: chronological} and direction in {-1, 0, +1}
    (+1 = Q in the future of P).  Coincident points are null with direction +1.
    """
    chart = Chart(chart)
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    P, Q = np.broadcast_arrays(P, Q)
    shape = P.shape[:-1]
    coincide = np.max(np.abs(P - Q), axis=-1) <= COINCIDE_TOL
    # null tolerance relative to the squared Euclidean chord: rounding in the
    # Lorentzian square scales with it, so short timelike pairs stay timelike
    d = Q - P
    thr = NULL_TOL * np.sum(d * d, axis=-1)
    if chart is Chart.MINKOWSKI:
        dt = d[..., 0]
        dx = d[..., 1]
        interval = dt * dt - dx * dx
        null = np.abs(interval) <= thr
        chrono = interval > thr
        tau = np.sqrt(np.where(chrono, interval, 0.0))
        future = dt > 0
    elif chart is Chart.DESITTER:
        # c - 1 = -<d, d>/2 with d = Q - P; the chord form keeps short separations accurate
        gap = -0.5 * inner(chart, d, d)
        null = np.abs(gap) <= thr
        chrono = gap > thr
        tau = 2.0 * np.arcsinh(np.sqrt(0.5 * np.where(chrono, gap, 0.0)))
        future = (Q[..., 0] - P[..., 0]) > 0
    else:
        # 1 - c = -<d, d>/2 where c = -<P, Q>
        gap = -0.5 * inner(chart, d, d)
        if np.any(gap > 2.0 + CLAMP_TOL):
            raise FundamentalDomainError("anti-de Sitter pair separated by pi or more")
        null = np.abs(gap) <= thr
        chrono = gap > thr
        tau = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * np.where(chrono, gap, 0.0), 0.0, 1.0)))
        # time orientation: the rotation field (-t, s, 0) in the (s,t) plane
        cross = P[..., 0] * Q[..., 1] - P[..., 1] * Q[..., 0]
        future = cross > 0
    rel = np.zeros(shape, dtype=np.int8)
    rel = np.where(null, 1, rel)
    rel = np.where(chrono, 2, rel)
    direction = np.where(rel == 0, 0, np.where(future, 1, -1)).astype(np.int8)
    rel = np.where(coincide, 1, rel).astype(np.int8)
    direction = np.where(coincide, 1, direction).astype(np.int8)
    tau = np.where(coincide, 0.0, tau)
    return tau, rel, direction


def model_relation(K: float, p: ModelPoint, q: ModelPoint) -> CausalClass:
    _same_space(p, q)
    _, rel, direction = classify_arrays(p.chart, p.array, q.array)
    rel = int(rel)
    if rel == 0:
        return CausalClass(Relation.UNRELATED, Direction.NONE)
    value = Relation.CHRONOLOGICAL if rel == 2 else Relation.NULL_CAUSAL
    return CausalClass(value, Direction.FORWARD if int(direction) > 0 else Direction.BACKWARD)


def model_causal_leq(K: float, p: ModelPoint, q: ModelPoint) -> bool:
    """p <= q, reflexive, including null relations within the null tolerance."""
    return model_relation(K, p, q).is_causal_forward


def model_tau(K: float, p: ModelPoint, q: ModelPoint) -> float:
    _same_space(p, q)
    tau, rel, direction = classify_arrays(p.chart, p.array, q.array)
    if int(rel) == 2 and int(direction) > 0:
        return float(tau) * p.scale
    return 0.0


def pairwise(K: float, points) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(tau, causal, chrono) matrices for a list of points sharing one chart."""
    n = len(points)
    if n == 0:
        return np.zeros((0, 0)), np.zeros((0, 0), bool), np.zeros((0, 0), bool)
    for p in points[1:]:
        _same_space(points[0], p)
    X = np.array([p.coords for p in points])
    tau, rel, direction = classify_arrays(points[0].chart, X[:, None, :], X[None, :, :])
    forward = direction > 0
    chrono = (rel == 2) & forward
    causal = (rel >= 1) & forward
    np.fill_diagonal(causal, True)
    np.fill_diagonal(chrono, False)
    T = np.where(chrono, tau * points[0].scale, 0.0)
    return T, causal, chrono


def batch_tau(chart: Chart, scale: float, P, Q) -> np.ndarray:
    """Forward separations tau(P_i, Q_i) in L^2(K) units for coordinate arrays."""
    tau, rel, direction = classify_arrays(chart, P, Q)
    return np.where((rel == 2) & (direction > 0), tau * scale, 0.0)


def batch_causal(chart: Chart, P, Q) -> np.ndarray:
    _, rel, direction = classify_arrays(chart, P, Q)
    return (rel >= 1) & (direction > 0)


# ------------------------------------------------------------------ geodesics

def geodesic_arrays(chart: Chart, p, q, tau_n: float, s):
    """Points at fractions s along the geodesic from p to q (normalized tau_n)."""
    s = np.asarray(s, dtype=float)[..., None]
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if chart is Chart.MINKOWSKI or tau_n == 0.0:
        return (1 - s) * p + s * q
    if chart is Chart.DESITTER:
        w0 = np.sinh((1 - s) * tau_n) / math.sinh(tau_n)
        w1 = np.sinh(s * tau_n) / math.sinh(tau_n)
    else:
        w0 = np.sin((1 - s) * tau_n) / math.sin(tau_n)
        w1 = np.sin(s * tau_n) / math.sin(tau_n)
    return project_to_quadric(chart, w0 * p + w1 * q)


def model_geodesic(K: float, p: ModelPoint, q: ModelPoint, s: float) -> ModelPoint:
    _same_space(p, q)
    if not 0.0 <= s <= 1.0:
        raise ValueError("geodesic parameter must lie in [0, 1]")
    rel = model_relation(K, p, q)
    if not rel.is_chrono_forward:
        raise NotChronological("geodesic endpoints must be chronologically related")
    tau = model_tau(K, p, q)
    if tau >= finite_diameter(K):
        raise SizeBound("geodesic length reaches the finite diameter")
    if s == 0.0:
        return p
    if s == 1.0:
        return q
    v = geodesic_arrays(p.chart, p.array, q.array, tau / p.scale, s)
    return _point(p.chart, v, p.scale)


# ----------------------------------------------------------------- isometries

@dataclass(frozen=True)
class Isometry:
    """Ambient linear map (plus a translation for Minkowski) preserving the form."""
    chart: Chart
    matrix: tuple
    shift: tuple = ()

    def apply(self, v: np.ndarray) -> np.ndarray:
        M = np.asarray(self.matrix, dtype=float)
        out = np.asarray(v, dtype=float) @ M.T
        if self.shift:
            out = out + np.asarray(self.shift)
        return out

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        if self.chart is not other.chart:
            raise ChartMismatch("cannot compose isometries of different charts")
        A = np.asarray(self.matrix)
        B = np.asarray(other.matrix)
        shift = ()
        if self.chart is Chart.MINKOWSKI:
            s_self = np.asarray(self.shift) if self.shift else np.zeros(2)
            s_other = np.asarray(other.shift) if other.shift else np.zeros(2)
            shift = tuple(A @ s_other + s_self)
        return Isometry(self.chart, tuple(map(tuple, A @ B)), shift)


def _dim(chart: Chart) -> int:
    return 2 if chart is Chart.MINKOWSKI else 3


def identity(K: float) -> Isometry:
    chart = chart_for(K)
    return Isometry(chart, tuple(map(tuple, np.eye(_dim(chart)))))


def boost(K: float, rapidity: float, plane: tuple[int, int] | None = None) -> Isometry:
    """Lorentz boost mixing a timelike and a spacelike ambient axis."""
    chart = chart_for(K)
    if plane is None:
        plane = {Chart.MINKOWSKI: (0, 1), Chart.DESITTER: (0, 1), Chart.ANTIDESITTER: (0, 2)}[chart]
    i, j = plane
    sig = _SIGNATURE[chart]
    if sig[i] * sig[j] > 0:
        raise ValueError("a boost needs one timelike and one spacelike axis")
    M = np.eye(_dim(chart))
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    M[i, i] = M[j, j] = ch
    M[i, j] = M[j, i] = sh
    return Isometry(chart, tuple(map(tuple, M)))


def rotation(K: float, angle: float) -> Isometry:
    """Rotation of the two axes of equal sign: spatial for de Sitter, time for anti-de Sitter."""
    chart = chart_for(K)
    if chart is Chart.MINKOWSKI:
        raise ChartMismatch("the Minkowski plane has no rotations preserving time orientation")
    i, j = (1, 2) if chart is Chart.DESITTER else (0, 1)
    M = np.eye(3)
    c, s = math.cos(angle), math.sin(angle)
    M[i, i] = M[j, j] = c
    M[i, j], M[j, i] = -s, s
    return Isometry(chart, tuple(map(tuple, M)))


def translation(K: float, dt: float, dx: float) -> Isometry:
    chart = chart_for(K)
    if chart is not Chart.MINKOWSKI:
        raise ChartMismatch("translations exist only in the Minkowski chart")
    return Isometry(chart, ((1.0, 0.0), (0.0, 1.0)), (float(dt), float(dx)))


def apply_isometry(K: float, g: Isometry, p: ModelPoint) -> ModelPoint:
    if g.chart is not p.chart:
        raise ChartMismatch("isometry and point live in different charts")
    v = g.apply(p.array)
    if p.chart is not Chart.MINKOWSKI:
        v = project_to_quadric(p.chart, v)
    return _point(p.chart, v, p.scale)


def time_reflect(chart: Chart, v):
    """Time-reversing involution fixing the base point and the left/right split."""
    v = np.array(v, dtype=float)
    idx = 1 if chart is Chart.ANTIDESITTER else 0
    v[..., idx] = -v[..., idx]
    return v


# --------------------------------------------------------------------- angles

def _unit_tangent(chart: Chart, v: np.ndarray, a: np.ndarray) -> np.ndarray:
    if chart is Chart.MINKOWSKI:
        u = a - v
    else:
        u = a - (inner(chart, v, a) / inner(chart, v, v)) * v
    norm2 = -inner(chart, u, u)
    return u / np.sqrt(norm2)


def unit_tangent(K: float, v: ModelPoint, a: ModelPoint) -> tuple[np.ndarray, Orientation]:
    """tau-unit tangent at v of the geodesic from v toward a, and its orientation."""
    _same_space(v, a)
    rel = model_relation(K, v, a)
    if rel.value is not Relation.CHRONOLOGICAL:
        raise NotChronological("angle legs must be chronologically related to the vertex")
    tau = model_tau(K, v, a) + model_tau(K, a, v)
    if tau >= finite_diameter(K):
        raise SizeBound("angle leg reaches the finite diameter")
    o = Orientation.FUTURE if rel.direction is Direction.FORWARD else Orientation.PAST
    return _unit_tangent(v.chart, v.array, a.array), o


def angle_at(K: float, v: ModelPoint, a: ModelPoint, b: ModelPoint) -> float:
    """Unsigned hyperbolic angle at v between the geodesics toward a and b."""
    ua, _ = unit_tangent(K, v, a)
    ub, _ = unit_tangent(K, v, b)
    # sinh of the angle is the length of ub's component orthogonal to ua; unlike
    # acosh(|<ua, ub>|) this stays accurate for nearly parallel legs
    w = ub + float(inner(v.chart, ua, ub)) * ua
    return math.asinh(math.sqrt(max(float(inner(v.chart, w, w)), 0.0)))


def sign_of(orientations: tuple[Orientation, Orientation]) -> int:
    """-1 when both legs share a time orientation, +1 otherwise."""
    o1, o2 = (Orientation(o) for o in orientations)
    return -1 if o1 is o2 else 1
