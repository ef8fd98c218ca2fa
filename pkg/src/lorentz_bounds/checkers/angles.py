"""Monotonicity, angle and hinge comparison over chain hinges.

A ray is a recorded chain read from one of its points, forward (future ray)
or backward (past ray).  A hinge is a pair of rays at a common vertex.  The
comparison angle grid theta(i, j) uses the i-th point of the first ray and the
j-th point of the second.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import model_space as ms
from ..comparison import angle_interval, opposite_side
from ..finite_space import FiniteLorentzSpace
from .report import LIMIT_ANGLE_APPROXIMATED, Bound, CheckReport, Collector, Sense


@dataclass(frozen=True)
class Ray:
    vertex: int
    ids: tuple            # excludes the vertex
    params: np.ndarray    # tau from the vertex along the chain
    future: bool
    chain: int


@dataclass(frozen=True)
class Hinge:
    vertex: int
    alpha: Ray
    beta: Ray

    @property
    def same_orientation(self) -> bool:
        return self.alpha.future == self.beta.future


def chain_rays(S: FiniteLorentzSpace) -> dict:
    """Rays grouped by vertex."""
    rays: dict[int, list[Ray]] = {}
    for ci, ch in enumerate(S.chains):
        ids = list(ch.ids)
        for k, v in enumerate(ids):
            for future, seq in ((True, ids[k:]), (False, ids[:k + 1][::-1])):
                if len(seq) < 2:
                    continue
                if future:
                    params = S.chain_params(seq)
                else:
                    cum = S.chain_params(seq[::-1])[::-1]   # aligned with seq, ends at 0
                    params = cum[0] - cum
                rays.setdefault(v, []).append(Ray(v, tuple(seq[1:]), np.asarray(params[1:]), future, ci))
    return rays


def chain_hinges(S: FiniteLorentzSpace) -> list:
    hinges = []
    for v, rays in sorted(chain_rays(S).items()):
        for a in range(len(rays)):
            for b in range(a + 1, len(rays)):
                ra, rb = rays[a], rays[b]
                if ra.chain == rb.chain and ra.future == rb.future:
                    continue
                if rb.future and not ra.future:
                    ra, rb = rb, ra
                hinges.append(Hinge(v, ra, rb))
    return hinges


def angle_grid(S: FiniteLorentzSpace, h: Hinge, K: float):
    """Signed comparison angles theta(i, j), their error ranges, and the definedness mask.

    Returns (theta, lo, hi, defined); lo <= theta <= hi where defined.
    """
    A = np.asarray(h.alpha.ids)
    B = np.asarray(h.beta.ids)
    x = h.vertex
    T, C = S.tau, S.causal
    if h.same_orientation:
        if h.alpha.future:
            adj1, adj2 = T[x, A][:, None], T[x, B][None, :]
        else:
            adj1, adj2 = T[A, x][:, None], T[B, x][None, :]
        opp = T[np.ix_(A, B)] + T[np.ix_(B, A)].T
        related = C[np.ix_(A, B)] | C[np.ix_(B, A)].T
    else:
        adj1, adj2 = T[x, A][:, None], T[B, x][None, :]
        opp = T[np.ix_(B, A)].T
        related = np.ones((len(A), len(B)), dtype=bool)
    adj1, adj2 = np.broadcast_arrays(adj1, adj2)
    longest = np.maximum(np.maximum(adj1, adj2), opp)
    defined = related & (adj1 > 0) & (adj2 > 0) & (longest < ms.finite_diameter(K))
    theta, lo, hi = (np.full(defined.shape, np.nan) for _ in range(3))
    if np.any(defined):
        mid, m_lo, m_hi = angle_interval(K, adj1[defined], adj2[defined], opp[defined],
                                         h.same_orientation)
        if h.same_orientation:
            theta[defined], lo[defined], hi[defined] = -mid, -m_hi, -m_lo
        else:
            theta[defined], lo[defined], hi[defined] = mid, m_lo, m_hi
    return theta, lo, hi, defined


def _hinge_in_bounds(h: Hinge, D: float) -> bool:
    return h.alpha.params[-1] < D and h.beta.params[-1] < D


# ----------------------------------------------------------- monotonicity

def check_monotonicity(S: FiniteLorentzSpace, K: float, bound, one_sided: bool = False,
                       tol_ang: float = 1e-7) -> CheckReport:
    bound = Bound(bound)
    sense = Sense.ONE_SIDED_MONOTONICITY if one_sided else Sense.MONOTONICITY
    out = Collector(sense, bound, K, tol_ang)
    D = ms.finite_diameter(K)
    for h in chain_hinges(S):
        if not _hinge_in_bounds(h, D):
            continue
        theta, t_lo, t_hi, defined = angle_grid(S, h, K)
        I, J = np.nonzero(defined)
        if len(I) < 2:
            continue
        th, th_lo, th_hi = theta[I, J], t_lo[I, J], t_hi[I, J]
        le = (I[:, None] <= I[None, :]) & (J[:, None] <= J[None, :])
        np.fill_diagonal(le, False)
        if one_sided:
            le &= (I[:, None] == I[None, :]) | (J[:, None] == J[None, :])
        P, Q = np.nonzero(le)
        if len(P) == 0:
            continue
        # theta at the earlier cell P against the later cell Q, using error ranges
        lo, hi = th[P], th[Q]
        slack = th_hi[Q] - th_lo[P] if bound is Bound.LOWER else th_hi[P] - th_lo[Q]
        A, B = np.asarray(h.alpha.ids), np.asarray(h.beta.ids)
        wit = np.stack([np.full(len(P), h.vertex), A[I[P]], B[J[P]], A[I[Q]], B[J[Q]]], axis=1)
        out.add(wit, lo, hi, slack, kind="angle")
    return out.report()


# ----------------------------------------------------------- limit angles

def _approximation(S: FiniteLorentzSpace, h: Hinge):
    theta, lo, hi, defined = angle_grid(S, h, 0.0)
    I, J = np.nonzero(defined)
    if len(I) == 0:
        return None
    size = h.alpha.params[I] + h.beta.params[J]
    k = int(np.lexsort((J, I, size))[0])
    i, j = I[k], J[k]
    return float(theta[i, j]), float(lo[i, j]), float(hi[i, j])


def approximate_angle(S: FiniteLorentzSpace, h: Hinge):
    """Signed flat comparison angle at the finest defined cell, or None."""
    res = _approximation(S, h)
    return None if res is None else res[0]


def exact_angle(S: FiniteLorentzSpace, h: Hinge):
    """Signed model angle from the point annotations, when available."""
    x = S.points[h.vertex]
    a, b = S.points[h.alpha.ids[0]], S.points[h.beta.ids[0]]
    if x is None or a is None or b is None:
        return None
    K = S.K
    mag = ms.angle_at(K, x, a, b)
    return -mag if h.same_orientation else mag


def _triangle_inequality_diagnostic(S: FiniteLorentzSpace, hinges, approx, tol_ang: float) -> dict:
    """Clause: angle(alpha, gamma) <= angle(alpha, beta) + angle(beta, gamma) for beta opposite."""
    by_vertex: dict = {}
    for h, a in zip(hinges, approx):
        if a is None:
            continue
        key_a = (h.alpha.chain, h.alpha.future)
        key_b = (h.beta.chain, h.beta.future)
        by_vertex.setdefault(h.vertex, {})[frozenset((key_a, key_b))] = abs(a)
    tested = failed = 0
    worst = math.inf
    for v, table in by_vertex.items():
        rays = sorted({r for pair in table for r in pair})
        for a_ in rays:
            for c_ in rays:
                if a_ >= c_ or a_[1] != c_[1]:
                    continue
                ac = table.get(frozenset((a_, c_)))
                if ac is None:
                    continue
                for b_ in rays:
                    if b_[1] == a_[1]:
                        continue
                    ab, bc = table.get(frozenset((a_, b_))), table.get(frozenset((b_, c_)))
                    if ab is None or bc is None:
                        continue
                    tested += 1
                    slack = ab + bc - ac
                    worst = min(worst, slack)
                    failed += slack < -tol_ang
    return {"angle_triangle_tested": tested, "angle_triangle_failed": failed,
            "angle_triangle_min_slack": worst}


def check_angle(S: FiniteLorentzSpace, K: float, bound, tol_ang: float = 1e-7) -> CheckReport:
    bound = Bound(bound)
    out = Collector(Sense.ANGLE, bound, K, tol_ang)
    out.flags.append(LIMIT_ANGLE_APPROXIMATED)
    D = ms.finite_diameter(K)
    hinges = chain_hinges(S)
    approx = [_approximation(S, h) for h in hinges]
    for h, ap in zip(hinges, approx):
        if ap is None or not _hinge_in_bounds(h, D):
            continue
        omega, w_lo, w_hi = ap
        theta, t_lo, t_hi, defined = angle_grid(S, h, K)
        I, J = np.nonzero(defined)
        th = theta[I, J]
        slack = t_hi[I, J] - w_lo if bound is Bound.LOWER else w_hi - t_lo[I, J]
        A, B = np.asarray(h.alpha.ids), np.asarray(h.beta.ids)
        wit = np.stack([np.full(len(I), h.vertex), A[I], B[J]], axis=1)
        out.add(wit, omega, th, slack, kind="angle")
    if bound is Bound.LOWER:
        mids = [None if a is None else a[0] for a in approx]
        out.notes.update(_triangle_inequality_diagnostic(S, hinges, mids, tol_ang))
    return out.report()


def hinge_table(S: FiniteLorentzSpace, h: Hinge, K: float, omega: float):
    """(I, J, tau in S, comparison tau) over all grid cells within the size bounds."""
    A, B = np.asarray(h.alpha.ids), np.asarray(h.beta.ids)
    s = h.alpha.params[:, None]
    t = h.beta.params[None, :]
    s, t = np.broadcast_arrays(s, t)
    model = opposite_side(K, s, t, abs(omega), h.same_orientation)
    actual = S.tau[np.ix_(A, B)] + S.tau[np.ix_(B, A)].T
    D = ms.finite_diameter(K)
    ok = np.isfinite(model) & (model < D) & (actual < D)
    I, J = np.nonzero(ok)
    return I, J, actual[I, J], model[I, J]


def check_hinge(S: FiniteLorentzSpace, K: float, bound, tol: float = 1e-7) -> CheckReport:
    bound = Bound(bound)
    out = Collector(Sense.HINGE, bound, K, tol)
    out.flags.append(LIMIT_ANGLE_APPROXIMATED)
    D = ms.finite_diameter(K)
    hinges = chain_hinges(S)
    approx = [approximate_angle(S, h) for h in hinges]
    for h, omega in zip(hinges, approx):
        if omega is None or not _hinge_in_bounds(h, D):
            continue
        I, J, actual, model = hinge_table(S, h, K, omega)
        slack = actual - model if bound is Bound.LOWER else model - actual
        A, B = np.asarray(h.alpha.ids), np.asarray(h.beta.ids)
        wit = np.stack([np.full(len(I), h.vertex), A[I], B[J]], axis=1)
        out.add(wit, actual, model, slack)
    if bound is Bound.LOWER:
        out.notes.update(_triangle_inequality_diagnostic(S, hinges, approx, 1e-7))
    return out.report()
