"""Comparison configurations in L^2(K): triangles, hinges and four-point tuples.

Placement is canonical: the first vertex sits at the chart base point, one side
runs up the vertical axis, and the remaining point is placed on the left
(negative spatial coordinate) unless a right-hand solution is requested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import model_space as ms
from .errors import DegenerateVertex, OutOfRange, ReverseTriangleViolation, SizeBound
from .model_space import Chart, ModelPoint, Orientation

RTI_TOL = 1e-12
ROUND_TRIP_TOL = 1e-10
_UNIT_K = {Chart.MINKOWSKI: 0.0, Chart.DESITTER: 1.0, Chart.ANTIDESITTER: -1.0}


class Vertex(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


class Side(str, Enum):
    XY = "XY"
    YZ = "YZ"
    XZ = "XZ"


class TimeSense(str, Enum):
    FUTURE = "FUTURE"
    PAST = "PAST"


@dataclass(frozen=True)
class TriangleSides:
    """a = tau(x,y), b = tau(y,z), c = tau(x,z)."""
    a: float
    b: float
    c: float

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise ValueError("side lengths are nonnegative")

    @property
    def is_timelike(self) -> bool:
        return self.a > 0 and self.b > 0


@dataclass(frozen=True)
class SignedAngle:
    magnitude: float
    sign: int

    def __post_init__(self):
        if self.magnitude < 0 or self.sign not in (-1, 1):
            raise ValueError("angle magnitude must be nonnegative and sign +-1")

    @property
    def value(self) -> float:
        return self.sign * self.magnitude


@dataclass(frozen=True)
class RealizedTriangle:
    x: ModelPoint
    y: ModelPoint
    z: ModelPoint
    K: float
    sides: TriangleSides


@dataclass(frozen=True)
class FourPointSides:
    """c0 = tau(y,x), a_i = tau(y,z_i), b_i = tau(x,z_i); past tuples use reversed order."""
    c0: float
    a1: float
    b1: float
    a2: float
    b2: float
    time_sense: TimeSense = TimeSense.FUTURE


@dataclass(frozen=True)
class FourPointRealization:
    y: ModelPoint
    x: ModelPoint
    z1: ModelPoint
    z2: ModelPoint
    time_sense: TimeSense

    def tau_z(self, K: float) -> float:
        """Comparison value tau(z1^, z2^) (future) or tau(z2^, z1^) (past)."""
        if self.time_sense is TimeSense.FUTURE:
            return ms.model_tau(K, self.z1, self.z2)
        return ms.model_tau(K, self.z2, self.z1)

    def z_causal(self, K: float) -> bool:
        if self.time_sense is TimeSense.FUTURE:
            return ms.model_causal_leq(K, self.z1, self.z2)
        return ms.model_causal_leq(K, self.z2, self.z1)


def satisfies_size_bounds(K: float, taus) -> bool:
    taus = list(taus)
    if not taus:
        return True
    return max(taus) < ms.finite_diameter(K)


# --------------------------------------------------------------- placement

def place_arrays(chart: Chart, r0, r1, L, side):
    """Point at separation r0 from the base point and r1 from the axis point at L.

    All quantities are normalized (unit curvature).  The two separation
    constraints are linear in embedding coordinates, leaving one quadratic for
    the spatial coordinate, whose sign is `side`.  Works elementwise on arrays.
    Returns (coords, squared spatial coordinate before clamping).
    """
    r0, r1, L, side = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r0, r1, L, side)))
    if chart is Chart.MINKOWSKI:
        t = (r0 * r0 - r1 * r1 + L * L) / (2 * L)
        x2 = t * t - r0 * r0
        x = side * np.sqrt(np.maximum(x2, 0.0))
        return np.stack([t, x], axis=-1), x2
    if chart is Chart.DESITTER:
        Y = np.cosh(r0)
        T = (Y * np.cosh(L) - np.cosh(r1)) / np.sinh(L)
        x2 = 1.0 + T * T - Y * Y
        X = side * np.sqrt(np.maximum(x2, 0.0))
        return np.stack([T, X, Y], axis=-1), x2
    S = np.cos(r0)
    T = (np.cos(r1) - S * np.cos(L)) / np.sin(L)
    x2 = S * S + T * T - 1.0
    X = side * np.sqrt(np.maximum(x2, 0.0))
    return np.stack([S, T, X], axis=-1), x2


def _separation(chart: Chart, P, Q) -> float:
    return float(ms.batch_tau(chart, 1.0, P, Q) + ms.batch_tau(chart, 1.0, Q, P))


def _bisect_transverse(chart: Chart, r0: float, r1: float, L: float, side: float) -> np.ndarray:
    """Fallback: walk along {tau(base, .) = r0} by rapidity until tau to the axis point is r1."""
    K = _UNIT_K[chart]
    A = ms.axis_point(K, L).array

    def point(eta):
        return ms.exp_base(K, r0, side * eta).array

    lo, hi = 0.0, 1.0
    while _separation(chart, point(hi), A) > r1 and hi < 60:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _separation(chart, point(mid), A) > r1:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return point(0.5 * (lo + hi))


def _place_point(chart: Chart, r0: float, r1: float, L: float, side: float) -> np.ndarray:
    v, x2 = place_arrays(chart, r0, r1, L, side)
    if float(x2) < -1e-9 * max(1.0, abs(float(np.max(np.abs(v))))):
        raise ReverseTriangleViolation("no point realizes the requested separations")
    v = ms.project_to_quadric(chart, v) if chart is not Chart.MINKOWSKI else v
    base = ms._BASE[chart]
    A = ms.axis_point(_UNIT_K[chart], L).array
    err = abs(_separation(chart, base, v) - r0) + abs(_separation(chart, A, v) - r1)
    if err > ROUND_TRIP_TOL and r0 > 0:
        v = _bisect_transverse(chart, r0, r1, L, side)
    return v


def realize_triangle(K: float, sides: TriangleSides) -> RealizedTriangle:
    a, b, c = sides.a, sides.b, sides.c
    if c < a + b - RTI_TOL * max(1.0, c):
        raise ReverseTriangleViolation(f"c={c} < a+b={a + b}")
    if c >= ms.finite_diameter(K):
        raise SizeBound(f"longest side {c} reaches the finite diameter")
    chart = ms.chart_for(K)
    s = ms.scale_for(K)
    x = ms.base_point(K)
    z = ms.axis_point(K, c)
    if c == 0:
        return RealizedTriangle(x, x, x, K, sides)
    if a + b >= c:
        # degenerate: collinear on the axis
        y = ms.axis_point(K, a)
    else:
        y = ModelPoint(chart, tuple(_place_point(chart, a / s, b / s, c / s, -1.0)), s)
    return RealizedTriangle(x, y, z, K, sides)


def _side_endpoints(tri: RealizedTriangle, side: Side):
    side = Side(side)
    if side is Side.XY:
        return tri.x, tri.y, tri.sides.a
    if side is Side.YZ:
        return tri.y, tri.z, tri.sides.b
    return tri.x, tri.z, tri.sides.c


def comparison_point(K: float, tri: RealizedTriangle, side: Side, d: float) -> ModelPoint:
    p, q, length = _side_endpoints(tri, side)
    if d < 0 or d > length + 1e-12 * max(1.0, length):
        raise OutOfRange(f"parameter {d} outside side of length {length}")
    if d == 0 or length == 0:
        return p
    if d >= length:
        return q
    return ms.model_geodesic(K, p, q, d / length)


def side_points(K: float, tri: RealizedTriangle, side: Side, ds) -> np.ndarray:
    """Vectorized comparison points (normalized coordinates) along one side."""
    p, q, length = _side_endpoints(tri, side)
    ds = np.asarray(ds, dtype=float)
    if length == 0:
        return np.repeat(p.array[None, :], len(ds), axis=0)
    frac = np.clip(ds / length, 0.0, 1.0)
    tau_n = ms.model_tau(K, p, q) / p.scale
    return ms.geodesic_arrays(p.chart, p.array, q.array, tau_n, frac)


# -------------------------------------------------------------------- angles

ANGLE_DATA_TOL = 1e-13


def _cosh_minus_one(chart: Chart, p, q, r, same, shift=0.0):
    """cosh(angle) - 1 from the law of cosines, factored to avoid cancellation.

    The small factor is |p - q| - r (same orientation) or r - p - q (opposite
    orientation); it vanishes for degenerate triangles and `shift` perturbs it.
    """
    big = np.where(same, np.abs(p - q) + r, p + q + r)
    small = np.where(same, np.abs(p - q) - r, r - p - q) + shift
    with np.errstate(divide="ignore", invalid="ignore"):
        if chart is Chart.MINKOWSKI:
            x = small * big / (2 * p * q)
        elif chart is Chart.DESITTER:
            x = 2 * np.sinh(0.5 * big) * np.sinh(0.5 * small) / (np.sinh(p) * np.sinh(q))
        else:
            x = 2 * np.sin(0.5 * big) * np.sin(0.5 * small) / (np.sin(p) * np.sin(q))
    return x


def _acosh1p(x):
    x = np.maximum(x, 0.0)
    return np.log1p(x + np.sqrt(x * (x + 2.0)))


def angle_from_sides(K: float, adj1, adj2, opp, same_orientation):
    """Comparison angle magnitude from the law of cosines in L^2(K) (vectorized)."""
    s = ms.scale_for(K)
    chart = ms.chart_for(K)
    p, q, r = (np.asarray(v, dtype=float) / s for v in (adj1, adj2, opp))
    same = np.asarray(same_orientation, dtype=bool)
    return _acosh1p(_cosh_minus_one(chart, p, q, r, same))


def angle_interval(K: float, adj1, adj2, opp, same_orientation, rel: float = ANGLE_DATA_TOL):
    """(angle, lower, upper): the angle and its range when the sides carry relative error `rel`.

    Near-degenerate triangles turn tiny side errors into angle errors of order
    sqrt(rel); comparisons use the range so that such noise is not reported.
    """
    s = ms.scale_for(K)
    chart = ms.chart_for(K)
    p, q, r = (np.asarray(v, dtype=float) / s for v in (adj1, adj2, opp))
    same = np.asarray(same_orientation, dtype=bool)
    d = rel * (p + q + r)
    mid = _acosh1p(_cosh_minus_one(chart, p, q, r, same))
    lo = _acosh1p(_cosh_minus_one(chart, p, q, r, same, -d))
    hi = _acosh1p(_cosh_minus_one(chart, p, q, r, same, d))
    return mid, lo, hi


def opposite_side(K: float, adj1, adj2, angle, same_orientation):
    """Separation between the leg endpoints of a hinge, inverting the law of cosines.

    Returns 0 where the endpoints are not timelike related and nan where the
    configuration would leave the chart (anti-de Sitter beyond the diameter).
    """
    s = ms.scale_for(K)
    chart = ms.chart_for(K)
    p, q = (np.asarray(v, dtype=float) / s for v in (adj1, adj2))
    ch = np.cosh(np.asarray(angle, dtype=float))
    sign = np.where(np.asarray(same_orientation, dtype=bool), -1.0, 1.0)
    if chart is Chart.MINKOWSKI:
        r2 = p * p + q * q + 2 * sign * p * q * ch
        r = np.sqrt(np.maximum(r2, 0.0))
    elif chart is Chart.DESITTER:
        c = np.cosh(p) * np.cosh(q) + sign * np.sinh(p) * np.sinh(q) * ch
        r = np.arccosh(np.maximum(c, 1.0))
    else:
        c = np.cos(p) * np.cos(q) - sign * np.sin(p) * np.sin(q) * ch
        r = np.where(c < -1.0, np.nan, np.arccos(np.clip(c, -1.0, 1.0)))
    return r * s


def comparison_angle(K: float, sides: TriangleSides, vertex: Vertex) -> SignedAngle:
    vertex = Vertex(vertex)
    adjacent = {Vertex.X: (sides.a, sides.c), Vertex.Y: (sides.a, sides.b), Vertex.Z: (sides.b, sides.c)}[vertex]
    if min(adjacent) <= 0:
        raise DegenerateVertex(f"vertex {vertex.value} touches a side of zero length")
    tri = realize_triangle(K, sides)
    v, p, q = {Vertex.X: (tri.x, tri.y, tri.z), Vertex.Y: (tri.y, tri.x, tri.z),
               Vertex.Z: (tri.z, tri.x, tri.y)}[vertex]
    mag = ms.angle_at(K, v, p, q)
    return SignedAngle(mag, 1 if vertex is Vertex.Y else -1)


# -------------------------------------------------------------------- hinges

def realize_hinge(K: float, len_a: float, len_b: float, angle: SignedAngle,
                  orientations: tuple[Orientation, Orientation]):
    """Vertex and two leg endpoints; leg a runs along the axis, leg b to the left."""
    if len_a <= 0 or len_b <= 0:
        raise ValueError("hinge legs need positive length")
    D = ms.finite_diameter(K)
    if max(len_a, len_b) >= D:
        raise SizeBound("hinge leg reaches the finite diameter")
    oa, ob = (Orientation(o) for o in orientations)
    x = ms.base_point(K)
    a_end = ms.exp_base(K, len_a, 0.0, oa)
    # leg b leaves on the left: future legs need negative rapidity, past legs positive
    rap = -angle.magnitude if ob is Orientation.FUTURE else angle.magnitude
    b_end = ms.exp_base(K, len_b, rap, ob)
    return x, a_end, b_end


def hinge_separation(K: float, len_a: float, len_b: float, angle: SignedAngle,
                     orientations) -> float:
    """Separation between the comparison hinge endpoints, in whichever order is causal."""
    _, a_end, b_end = realize_hinge(K, len_a, len_b, angle, orientations)
    return ms.model_tau(K, a_end, b_end) + ms.model_tau(K, b_end, a_end)


# ---------------------------------------------------------------- four points

def _check_four_point(K: float, sides: FourPointSides) -> None:
    if sides.c0 <= 0:
        raise ValueError("four-point configurations need tau(y,x) > 0")
    for a, b in ((sides.a1, sides.b1), (sides.a2, sides.b2)):
        if a < sides.c0 + b - RTI_TOL * max(1.0, a):
            raise ReverseTriangleViolation(f"a={a} < c0+b={sides.c0 + b}")
    if max(sides.a1, sides.a2) >= ms.finite_diameter(K):
        raise SizeBound("four-point configuration exceeds the finite diameter")


def realize_four_point(K: float, sides: FourPointSides, straight_tol: float = 0.0) -> FourPointRealization:
    """Comparison configuration; sides with a <= c0 + b + straight_tol are placed on the axis."""
    _check_four_point(K, sides)
    sense = TimeSense(sides.time_sense)
    chart = ms.chart_for(K)
    s = ms.scale_for(K)
    c0 = sides.c0 / s
    y = ms.base_point(K).array
    x = ms.axis_point(K, sides.c0).array
    zs = []
    for a, b, side in ((sides.a1, sides.b1, -1.0), (sides.a2, sides.b2, 1.0)):
        if a <= sides.c0 + b + straight_tol:
            z = ms.axis_point(K, a).array
        else:
            z = _place_point(chart, a / s, b / s, c0, side)
        zs.append(z)
    pts = [y, x, zs[0], zs[1]]
    if sense is TimeSense.PAST:
        pts = [ms.time_reflect(chart, v) for v in pts]
    y, x, z1, z2 = (ModelPoint(chart, tuple(v), s) for v in pts)
    return FourPointRealization(y, x, z1, z2, sense)


def four_point_batch(K: float, c0: float, a1, b1, a2, b2, straight_tol: float = 0.0):
    """Vectorized comparison (tau(z1^, z2^), z1^ <= z2^) for future configurations.

    Past configurations give the same numbers by time reflection.  Straight
    sides are snapped onto the axis exactly as in realize_four_point.
    """
    chart = ms.chart_for(K)
    s = ms.scale_for(K)
    c = c0 / s
    out = []
    for a, b, side in ((a1, b1, -1.0), (a2, b2, 1.0)):
        a = np.asarray(a, dtype=float) / s
        b = np.asarray(b, dtype=float) / s
        z, _ = place_arrays(chart, a, b, c, side)
        straight = a <= c + b + straight_tol / s
        if np.any(straight):
            axis = _axis_arrays(chart, a)
            z = np.where(straight[..., None], axis, z)
        if chart is not Chart.MINKOWSKI:
            z = ms.project_to_quadric(chart, z)
        out.append(z)
    z1, z2 = out
    return ms.batch_tau(chart, s, z1, z2), ms.batch_causal(chart, z1, z2)


def _axis_arrays(chart: Chart, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if chart is Chart.MINKOWSKI:
        return np.stack([t, np.zeros_like(t)], axis=-1)
    if chart is Chart.DESITTER:
        return np.stack([np.sinh(t), np.zeros_like(t), np.cosh(t)], axis=-1)
    return np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=-1)
