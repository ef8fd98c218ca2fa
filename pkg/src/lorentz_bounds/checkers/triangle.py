"""Timelike, causal and strict causal triangle comparison on chain triangles."""
from __future__ import annotations

from enum import Enum

import numpy as np

from .. import model_space as ms
from ..comparison import Side, TriangleSides, realize_triangle, side_points
from ..finite_space import FiniteLorentzSpace, triangle_arrays
from .report import Bound, CheckReport, Collector, Sense


class Variant(str, Enum):
    BOTH_POINTS = "BOTH_POINTS"
    ONE_SIDED = "ONE_SIDED"


class TriangleKind(str, Enum):
    TIMELIKE = "TIMELIKE"
    CAUSAL = "CAUSAL"
    STRICT_CAUSAL = "STRICT_CAUSAL"


_SENSES = {
    (Variant.BOTH_POINTS, TriangleKind.TIMELIKE): Sense.TRIANGLE,
    (Variant.ONE_SIDED, TriangleKind.TIMELIKE): Sense.ONE_SIDED_TRIANGLE,
    (Variant.BOTH_POINTS, TriangleKind.CAUSAL): Sense.CAUSAL_TRIANGLE,
    (Variant.ONE_SIDED, TriangleKind.CAUSAL): Sense.ONE_SIDED_CAUSAL_TRIANGLE,
    (Variant.BOTH_POINTS, TriangleKind.STRICT_CAUSAL): Sense.STRICT_CAUSAL_TRIANGLE,
    (Variant.ONE_SIDED, TriangleKind.STRICT_CAUSAL): Sense.ONE_SIDED_STRICT_CAUSAL_TRIANGLE,
}

_XY, _YZ, _XZ = 1, 2, 4


def _side_entries(S, K, tri, side: Side, start: int, end: int, bit: int):
    """Interior chain points of one side with their comparison coordinates."""
    if S.tau[start, end] <= 0 or start == end:
        return [], np.zeros((0, 0))
    ids = S.chain_between(start, end)
    if ids is None or len(ids) <= 2:
        return [], np.zeros((0, 0))
    params = S.chain_params(ids)
    # rescale so the recorded chain ends exactly at the side length
    params = params * (S.tau[start, end] / params[-1])
    return list(ids[1:-1]), side_points(K, tri, side, params[1:-1])


def triangle_entries(S: FiniteLorentzSpace, K: float, x: int, y: int, z: int):
    """(ids, side bits, comparison coordinates) of all marked points of a triangle."""
    sides = TriangleSides(float(S.tau[x, y]), float(S.tau[y, z]), float(S.tau[x, z]))
    tri = realize_triangle(K, sides)
    ids = [x, y, z]
    bits = [_XY | _XZ, _XY | _YZ, _YZ | _XZ]
    coords = [tri.x.array, tri.y.array, tri.z.array]
    for side, a, b, bit in ((Side.XY, x, y, _XY), (Side.YZ, y, z, _YZ), (Side.XZ, x, z, _XZ)):
        extra, pts = _side_entries(S, K, tri, side, a, b, bit)
        ids.extend(extra)
        bits.extend([bit] * len(extra))
        coords.extend(pts)
    return np.asarray(ids), np.asarray(bits), np.asarray(coords), tri


def check_triangle(S: FiniteLorentzSpace, K: float, bound, variant=Variant.BOTH_POINTS,
                   kind=TriangleKind.TIMELIKE, tol: float = 1e-7) -> CheckReport:
    bound, variant, kind = Bound(bound), Variant(variant), TriangleKind(kind)
    out = Collector(_SENSES[variant, kind], bound, K, tol)
    if not S.chains:
        return out.report()
    chart, scale = ms.chart_for(K), ms.scale_for(K)
    D = ms.finite_diameter(K)
    xs, ys, zs, _ = triangle_arrays(S, require_chains=True, causal=kind is not TriangleKind.TIMELIKE)
    opposite = {_XY: 2, _YZ: 0, _XZ: 1}      # side bit -> index of the opposite vertex
    for x, y, z in zip(xs, ys, zs):
        if S.tau[x, z] >= D:
            continue
        ids, bits, P, _ = triangle_entries(S, K, x, y, z)
        if variant is Variant.BOTH_POINTS:
            I, J = np.nonzero(((bits[:, None] & bits[None, :]) == 0) & (ids[:, None] != ids[None, :]))
        else:
            inner_pts = np.flatnonzero(np.arange(len(ids)) >= 3)
            v = np.array([opposite[int(b)] for b in bits[inner_pts]], dtype=int)
            keep = ids[inner_pts] != ids[v]
            inner_pts, v = inner_pts[keep], v[keep]
            I = np.concatenate([inner_pts, v])
            J = np.concatenate([v, inner_pts])
        if len(I) == 0:
            continue
        t_space = S.tau[ids[I], ids[J]]
        t_model = ms.batch_tau(chart, scale, P[I], P[J])
        slack = t_model - t_space if bound is Bound.LOWER else t_space - t_model
        wit = np.stack([np.full(len(I), x), np.full(len(I), y), np.full(len(I), z), ids[I], ids[J]], axis=1)
        out.add(wit, t_space, t_model, slack)
        if kind is TriangleKind.STRICT_CAUSAL:
            c_space = S.causal[ids[I], ids[J]]
            c_model = ms.batch_causal(chart, P[I], P[J])
            if bound is Bound.LOWER:
                out.add_implication(wit, c_space, c_model)
            else:
                out.add_implication(wit, c_model, c_space)
    return out.report()
