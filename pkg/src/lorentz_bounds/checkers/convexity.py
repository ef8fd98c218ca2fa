"""tau-convexity, bi-concavity and concavity of the time separation along chains."""
from __future__ import annotations

import numpy as np

from .. import model_space as ms
from ..comparison_ode import SampledFunction, jensen_triples, md
from ..finite_space import FiniteLorentzSpace
from .report import Bound, CheckReport, Collector, Sense

BICONCAVITY = "BICONCAVITY"
CONCAVITY = "CONCAVITY"


def related_profile(S: FiniteLorentzSpace, p: int, ids, params):
    """Samples of md-ready tau values from p to a chain where a causal relation exists.

    Returns (index array, tau values, gap position or None).  Points in the past
    of p come first along the chain and points in its future last.
    """
    ids = np.asarray(ids)
    past = S.causal[ids, p]
    future = S.causal[p, ids]
    both = past & future          # only p itself in a causal space
    rel = past | future
    idx = np.flatnonzero(rel)
    tau = np.where(future[idx], S.tau[p, ids[idx]], S.tau[ids[idx], p])
    tau = np.where(both[idx], 0.0, tau)
    gap = None
    if len(idx) > 1:
        jumps = np.flatnonzero(np.diff(idx) > 1)
        if len(jumps):
            gap = int(jumps[0])
    return idx, tau, gap


def check_tau_convexity(S: FiniteLorentzSpace, K: float, bound, tol: float = 1e-7) -> CheckReport:
    """Jensen test of t -> md^K(tau(p, gamma(t))) with lambda = 1 for every point and chain.

    No zero values are inserted at unsampled domain boundaries: the sampled
    function is tested on the chain points that are causally related to p.
    """
    bound = Bound(bound)
    out = Collector(Sense.TAU_CONVEXITY, bound, K, tol)
    D = ms.finite_diameter(K)
    gaps = 0
    for ch in S.chains:
        ids = np.asarray(ch.ids)
        if ch.total >= D:
            continue
        params = S.chain_params(ids)
        first, last = ids[0], ids[-1]
        for p in range(S.n):
            if S.tau[p, last] >= D or S.tau[first, p] >= D:
                continue
            idx, tau, gap = related_profile(S, p, ids, params)
            if len(idx) < 3:
                continue
            gaps += gap is not None
            F = SampledFunction(params[idx], md(K, tau))
            triples, margin = jensen_triples(F, K, 1.0)
            if len(margin) == 0:
                continue
            slack = margin if bound is Bound.LOWER else -margin
            f = np.asarray(F.f)
            wit = np.column_stack([np.full(len(triples), p), ids[idx[triples]]])
            out.add(wit, f[triples[:, 1]], f[triples[:, 1]] + margin, slack)
    out.notes["split_domains"] = gaps
    return out.report()


def _chord_windows(t: np.ndarray):
    """All (i, j, k) with i < j < k and the chord weight of t_j."""
    n = len(t)
    I, J, L = [], [], []
    for i in range(n - 2):
        for k in range(i + 2, n):
            js = np.arange(i + 1, k)
            I.append(np.full(len(js), i))
            J.append(js)
            L.append(np.full(len(js), k))
    if not I:
        z = np.zeros(0, int)
        return z, z, z, np.zeros(0)
    I, J, L = np.concatenate(I), np.concatenate(J), np.concatenate(L)
    return I, J, L, (t[J] - t[I]) / (t[L] - t[I])


def check_biconcavity(S: FiniteLorentzSpace, tol: float = 1e-7, grid_tol: float = 1e-9) -> CheckReport:
    """tau(alpha(t), beta(t)) >= t tau(alpha(1), beta(1)) + (1 - t) tau(alpha(0), beta(0)).

    Applied to every ordered pair of recorded chains with matching normalized
    parameter grids and to every sub-window whose end points are causally ordered.
    """
    out = Collector(BICONCAVITY, Bound.UPPER, 0.0, tol)
    grids = []
    for ch in S.chains:
        t = S.chain_params(ch.ids)
        grids.append(t / t[-1] if t[-1] > 0 else t)
    for a, ca in enumerate(S.chains):
        for b, cb in enumerate(S.chains):
            if len(ca.ids) != len(cb.ids) or np.max(np.abs(grids[a] - grids[b])) > grid_tol:
                continue
            A, B = np.asarray(ca.ids), np.asarray(cb.ids)
            I, J, L, lam = _chord_windows(grids[a])
            ok = S.causal[A[I], B[I]] & S.causal[A[L], B[L]]
            I, J, L, lam = I[ok], J[ok], L[ok], lam[ok]
            lhs = S.tau[A[J], B[J]]
            rhs = lam * S.tau[A[L], B[L]] + (1 - lam) * S.tau[A[I], B[I]]
            wit = np.stack([A[I], A[J], A[L], B[I], B[J], B[L]], axis=1)
            out.add(wit, lhs, rhs, lhs - rhs)
    return out.report()


def check_concavity(S: FiniteLorentzSpace, K: float, tol: float = 1e-7) -> CheckReport:
    """tau(p, gamma(t)) concave along contiguous chain runs in I^+(p) or I^-(p) within D_K / 2."""
    out = Collector(CONCAVITY, Bound.UPPER, K, tol)
    half = 0.5 * ms.finite_diameter(K)
    for ch in S.chains:
        ids = np.asarray(ch.ids)
        params = S.chain_params(ids)
        for p in range(S.n):
            for future in (True, False):
                vals = S.tau[p, ids] if future else S.tau[ids, p]
                inside = (vals > 0) & (vals < half)
                # contiguous runs of the chain inside the cone
                edges = np.flatnonzero(np.diff(np.r_[0, inside.astype(int), 0]))
                for start, stop in zip(edges[::2], edges[1::2]):
                    run = np.arange(start, stop)
                    if len(run) < 3:
                        continue
                    I, J, L, lam = _chord_windows(params[run])
                    f = vals[run]
                    lhs = f[J]
                    rhs = lam * f[L] + (1 - lam) * f[I]
                    wit = np.stack([np.full(len(I), p), ids[run][I], ids[run][J], ids[run][L]], axis=1)
                    out.add(wit, lhs, rhs, lhs - rhs)
    return out.report()
