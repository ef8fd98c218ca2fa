"""One-dimensional comparison machinery for f'' - K f = lambda.

md, sn and cn are the solutions of the equation with the standard initial
data; every solution is lambda*md + A*cn + B*sn.  Sampled functions are tested
against chord solutions through pairs of samples (the Jensen sense).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BoundaryMismatch, PreconditionFailed, SizeBound
from .model_space import finite_diameter


class JensenVerdict(str, Enum):
    SUB = "SUB"
    SUPER = "SUPER"
    BOTH = "BOTH"
    NEITHER = "NEITHER"

    @property
    def is_sub(self) -> bool:
        return self in (JensenVerdict.SUB, JensenVerdict.BOTH)

    @property
    def is_super(self) -> bool:
        return self in (JensenVerdict.SUPER, JensenVerdict.BOTH)


def _verdict(sub: bool, sup: bool) -> JensenVerdict:
    if sub and sup:
        return JensenVerdict.BOTH
    if sub:
        return JensenVerdict.SUB
    if sup:
        return JensenVerdict.SUPER
    return JensenVerdict.NEITHER


def modified(K: float, t):
    """(md, sn, cn) of curvature K at t; accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    if K == 0:
        md, sn, cn = 0.5 * t * t, t.copy(), np.ones_like(t)
    else:
        r = math.sqrt(abs(K))
        u = r * t
        # half-angle form near 0 avoids cancellation; the direct form is exact at table values
        small = np.abs(u) < 1.0
        if K > 0:
            md = np.where(small, 2.0 * np.sinh(0.5 * u) ** 2, np.cosh(u) - 1.0) / K
            sn = np.sinh(u) / r
            cn = np.cosh(u)
        else:
            md = np.where(small, 2.0 * np.sin(0.5 * u) ** 2, 1.0 - np.cos(u)) / (-K)
            sn = np.sin(u) / r
            cn = np.cos(u)
    if md.ndim == 0:
        return float(md), float(sn), float(cn)
    return md, sn, cn


def md(K: float, t):
    return modified(K, t)[0]


def sn(K: float, t):
    return modified(K, t)[1]


def cn(K: float, t):
    return modified(K, t)[2]


@dataclass(frozen=True)
class ODESolution:
    """g(t) = lambda*md(t - origin) + A*cn(t - origin) + B*sn(t - origin)."""
    K: float
    lam: float
    A: float
    B: float
    origin: float = 0.0

    def __call__(self, t):
        m, s, c = modified(self.K, np.asarray(t, dtype=float) - self.origin)
        return self.lam * m + self.A * c + self.B * s

    def derivative(self, t):
        m, s, c = modified(self.K, np.asarray(t, dtype=float) - self.origin)
        # md' = sn, cn' = K sn, sn' = cn
        return self.lam * s + self.A * self.K * s + self.B * c


def solve_bvp(K: float, lam: float, t1: float, f1: float, t3: float, f3: float) -> ODESolution:
    if not t1 < t3:
        raise ValueError("boundary points must satisfy t1 < t3")
    h = t3 - t1
    if h >= finite_diameter(K):
        raise SizeBound("boundary points are a finite diameter apart")
    m, s, c = modified(K, h)
    B = (f3 - lam * m - f1 * c) / s
    return ODESolution(K, lam, f1, B, t1)


def to_absolute(sol: ODESolution) -> ODESolution:
    """Same solution written in the basis centred at 0.

    At 0 the basis has md = sn = 0, cn = 1 and md' = cn' = 0, sn' = 1, so the
    coefficients are the value and slope there.
    """
    if sol.origin == 0.0:
        return sol
    return ODESolution(sol.K, sol.lam, float(sol(0.0)), float(sol.derivative(0.0)), 0.0)


@dataclass(frozen=True)
class SampledFunction:
    """Samples (t_i, f_i) with strictly increasing t, possibly with a gap."""
    t: tuple
    f: tuple
    gap_after: int | None = None

    def __post_init__(self):
        t = tuple(float(v) for v in self.t)
        f = tuple(float(v) for v in self.f)
        if len(t) != len(f):
            raise ValueError("t and f must have the same length")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("sample parameters must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "f", f)

    @classmethod
    def from_callable(cls, fn, t) -> "SampledFunction":
        t = np.asarray(t, dtype=float)
        return cls(tuple(t), tuple(np.asarray(fn(t), dtype=float)))

    @classmethod
    def split(cls, t_left, f_left, t_right, f_right) -> "SampledFunction":
        return cls(tuple(t_left) + tuple(t_right), tuple(f_left) + tuple(f_right),
                   gap_after=len(t_left) - 1)

    @property
    def arrays(self):
        return np.asarray(self.t), np.asarray(self.f)


@dataclass
class JensenResult:
    verdict: JensenVerdict
    tested: int
    sub_margin: float            # min over triples of g(t2) - f(t2)
    super_margin: float          # min over triples of f(t2) - g(t2)
    sub_witness: tuple | None = None
    super_witness: tuple | None = None
    witnesses: list = field(default_factory=list)


def _triple_margins(t, f, K, lam):
    """All admissible Jensen triples as index arrays plus the chord value at t2."""
    n = len(t)
    D = finite_diameter(K)
    I, J, L, G = [], [], [], []
    for i in range(n - 2):
        ks = np.arange(i + 2, n)
        ks = ks[t[ks] - t[i] < D]
        if len(ks) == 0:
            continue
        h = t[ks] - t[i]
        m, s, c = modified(K, h)
        B = (f[ks] - lam * m - f[i] * c) / s
        js = np.arange(i + 1, n - 1)
        jj, kk = np.meshgrid(js, np.arange(len(ks)), indexing="ij")
        mask = jj < ks[kk]
        jj, kk = jj[mask], kk[mask]
        dt = t[jj] - t[i]
        mj, sj, cj = modified(K, dt)
        g = lam * mj + f[i] * cj + B[kk] * sj
        I.append(np.full(len(jj), i))
        J.append(jj)
        L.append(ks[kk])
        G.append(g)
    if not I:
        empty = np.zeros(0, dtype=int)
        return empty, empty, empty, np.zeros(0)
    return np.concatenate(I), np.concatenate(J), np.concatenate(L), np.concatenate(G)


def jensen_triples(F: SampledFunction, K: float, lam: float):
    """Index triples (i, j, k) and margins g(t_j) - f(t_j) of every admissible triple."""
    t, f = F.arrays
    I, J, L, G = _triple_margins(t, f, K, lam)
    return np.stack([I, J, L], axis=1) if len(I) else np.zeros((0, 3), int), G - f[J]


def jensen_check(F: SampledFunction, K: float, lam: float, tol: float = 1e-7) -> JensenResult:
    triples, margin = jensen_triples(F, K, lam)
    if len(margin) == 0:
        return JensenResult(JensenVerdict.BOTH, 0, math.inf, math.inf)
    t = np.asarray(F.t)
    i_sub = int(np.argmin(margin))
    i_sup = int(np.argmax(margin))
    sub_margin = float(margin[i_sub])
    super_margin = float(-margin[i_sup])
    sub = sub_margin >= -tol
    sup = super_margin >= -tol
    res = JensenResult(_verdict(sub, sup), len(margin), sub_margin, super_margin)
    if not sub:
        res.sub_witness = tuple(float(v) for v in t[triples[i_sub]])
    if not sup:
        res.super_witness = tuple(float(v) for v in t[triples[i_sup]])
    return res


def outer_jensen_check(F: SampledFunction, K: float, lam: float, tol: float = 1e-7) -> JensenResult:
    """Chord through (t1, t2) against samples outside [t1, t2] but within a diameter."""
    t, f = F.arrays
    n = len(t)
    D = finite_diameter(K)
    margins = []
    witnesses = []
    for i in range(n - 1):
        for k in range(i + 1, n):
            if t[k] - t[i] >= D:
                break
            g = solve_bvp(K, lam, t[i], f[i], t[k], f[k])
            out = np.r_[np.arange(0, i), np.arange(k + 1, n)]
            out = out[(t[out] > t[k] - D) & (t[out] < t[i] + D)]
            if len(out) == 0:
                continue
            m = f[out] - g(t[out])   # >= 0 for subsolutions
            margins.append(m)
            witnesses.extend((float(t[i]), float(t[k]), float(t[o])) for o in out)
    if not margins:
        return JensenResult(JensenVerdict.BOTH, 0, math.inf, math.inf)
    m = np.concatenate(margins)
    i_sub, i_sup = int(np.argmin(m)), int(np.argmax(m))
    sub_margin, super_margin = float(m[i_sub]), float(-m[i_sup])
    res = JensenResult(_verdict(sub_margin >= -tol, super_margin >= -tol), len(m),
                       sub_margin, super_margin)
    if sub_margin < -tol:
        res.sub_witness = witnesses[i_sub]
    if super_margin < -tol:
        res.super_witness = witnesses[i_sup]
    return res


@dataclass
class SplitDomainResult:
    extensible_sub: bool
    extensible_super: bool
    jensen: JensenResult
    diagnostics: dict

    @property
    def verdict(self) -> str:
        if self.extensible_sub and self.extensible_super:
            return "EXTENSIBLE_BOTH"
        if self.extensible_sub:
            return "EXTENSIBLE_SUB"
        if self.extensible_super:
            return "EXTENSIBLE_SUPER"
        return "NEITHER"


def split_domain_check(F: SampledFunction, K: float, lam: float, tol: float = 1e-7) -> SplitDomainResult:
    """Jensen test across the gap of a function vanishing at the inner endpoints b, c."""
    if F.gap_after is None:
        raise ValueError("split_domain_check needs a sampled function with a gap")
    t, f = F.arrays
    ib, ic = F.gap_after, F.gap_after + 1
    if abs(f[ib]) > tol or abs(f[ic]) > tol:
        raise BoundaryMismatch(f"f(b)={f[ib]}, f(c)={f[ic]} are not zero")
    res = jensen_check(F, K, lam, tol)
    diag = {"estimates": "one-sided difference quotients at sample resolution"}
    b, c = t[ib], t[ic]
    if c - b < finite_diameter(K):
        bridge = solve_bvp(K, lam, b, 0.0, c, 0.0)
        if ib > 0:
            diag["df_b_minus"] = float((f[ib] - f[ib - 1]) / (t[ib] - t[ib - 1]))
            diag["dg_b"] = float(bridge.derivative(b))
        if ic < len(t) - 1:
            diag["df_c_plus"] = float((f[ic + 1] - f[ic]) / (t[ic + 1] - t[ic]))
            diag["dg_c"] = float(bridge.derivative(c))
    return SplitDomainResult(res.verdict.is_sub, res.verdict.is_super, res, diag)


def kirchberger_sign(K: float, psi: SampledFunction, L: float, tol: float = 1e-7,
                     strict: bool = False) -> bool:
    """Nonpositivity of a lambda=0 subsolution with nonpositive boundary values on [0, L]."""
    if not L < finite_diameter(K):
        raise SizeBound("interval length must stay below the finite diameter")
    t, f = psi.arrays
    if not jensen_check(psi, K, 0.0, tol).verdict.is_sub:
        raise PreconditionFailed("psi is not a Jensen subsolution")
    if f[0] > tol or f[-1] > tol:
        raise PreconditionFailed("boundary values must be nonpositive")
    ok = bool(np.all(f <= tol))
    if strict:
        if not (f[0] < -tol or f[-1] < -tol):
            raise PreconditionFailed("the strict version needs one negative endpoint")
        return ok and bool(np.all(f[1:-1] < 0))
    return ok
