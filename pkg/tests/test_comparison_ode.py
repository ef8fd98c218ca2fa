import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentz_bounds import comparison_ode as ode
from lorentz_bounds.comparison_ode import JensenVerdict, ODESolution, SampledFunction
from lorentz_bounds.errors import BoundaryMismatch, PreconditionFailed, SizeBound
from lorentz_bounds.model_space import finite_diameter

KS = [-2.0, -1.0, -0.1, 0.0, 0.1, 1.0, 2.0]


def fd2(fn, t, h):
    return (fn(t + h) - 2 * fn(t) + fn(t - h)) / (h * h)


def fd2_fourth_order(fn, t, h):
    # 5-point stencil: the 3-point one has truncation error h^2/12 * f'''' ~ 6e-6 for K = 2 near t = 3
    return (-fn(t - 2 * h) + 16 * fn(t - h) - 30 * fn(t) + 16 * fn(t + h) - fn(t + 2 * h)) / (12 * h * h)


def test_table_values():
    assert ode.modified(0, 2) == pytest.approx((2, 2, 1))
    assert ode.modified(-1, math.pi / 2) == pytest.approx((1, 1, 0), abs=1e-15)
    assert ode.modified(1, 0) == (0, 0, 1)
    t = np.linspace(0, 2, 7)
    assert ode.md(1, t) == pytest.approx(np.cosh(t) - 1)
    assert ode.md(-1, t) == pytest.approx(1 - np.cos(t))
    # general K by scaling
    assert ode.md(4, 0.3) == pytest.approx((math.cosh(0.6) - 1) / 4)


@pytest.mark.parametrize("K", KS)
def test_modified_ode_residual(K):
    top = min(3.0, 0.9 * finite_diameter(K))
    t = np.linspace(1e-3, top - 1e-3, 200)
    res = fd2_fourth_order(lambda s: ode.md(K, s), t, 1e-3) - K * ode.md(K, t) - 1
    assert np.max(np.abs(res)) <= 1e-6
    h = 1e-4
    assert np.max(np.abs((ode.md(K, t + h) - ode.md(K, t - h)) / (2 * h) - ode.sn(K, t))) <= 1e-6
    assert np.max(np.abs((ode.sn(K, t + h) - ode.sn(K, t - h)) / (2 * h) - ode.cn(K, t))) <= 1e-6


@pytest.mark.parametrize("K", [-1.0, -0.5, 0.0, 1.0])
def test_sn_sign(K):
    D = min(finite_diameter(K), 5.0)
    t = np.linspace(0, D, 1002)[1:-1]
    assert np.all(ode.sn(K, t) > 0) and np.all(ode.sn(K, -t) < 0)


def test_solve_bvp_examples():
    g = ode.solve_bvp(0, 1, 0, 0, 2, 2)
    assert (g.A, g.B) == pytest.approx((0, 0))
    g = ode.solve_bvp(0, 1, 0, 0, 2, 4)
    assert g.B == pytest.approx(1)
    assert g(1.0) == pytest.approx(1.5)
    g = ode.solve_bvp(-1, 0, 0, 0, math.pi / 2, 1)
    t = np.linspace(0, 1.5, 9)
    assert g(t) == pytest.approx(np.sin(t))
    with pytest.raises(SizeBound):
        ode.solve_bvp(-1, 0, 0, 0, math.pi, 1)


@given(st.sampled_from(KS), st.floats(-2, 2), st.floats(-1, 1), st.floats(0.1, 1.2), st.floats(-1, 1),
       st.floats(-1, 1))
def test_solve_bvp_residuals(K, lam, t1, h, f1, f3):
    g = ode.solve_bvp(K, lam, t1, f1, t1 + h, f3)
    assert float(g(t1)) == pytest.approx(f1, abs=1e-10)
    assert float(g(t1 + h)) == pytest.approx(f3, abs=1e-10)
    t = np.linspace(t1, t1 + h, 11)
    assert np.max(np.abs(fd2(g, t, 1e-3) - K * g(t) - lam)) <= 1e-5 * max(1, abs(g.B), abs(g.A))


def test_jensen_examples():
    t = np.linspace(0, 2, 21)
    assert ode.jensen_check(SampledFunction.from_callable(lambda s: s * s / 2, t), 0, 1).verdict is JensenVerdict.BOTH
    r = ode.jensen_check(SampledFunction.from_callable(lambda s: s * s, t), 0, 1)
    assert r.verdict is JensenVerdict.SUB
    assert r.super_witness is not None
    assert ode.jensen_check(SampledFunction.from_callable(lambda s: -s * s, t), 0, 1).verdict is JensenVerdict.SUPER


def test_jensen_hand_chord():
    # chord of t^2 through (0,0),(2,4) with f'' = 1 is t^2/2 + t, equal to 1.5 at t = 1
    F = SampledFunction((0.0, 1.0, 2.0), (0.0, 1.0, 4.0))
    r = ode.jensen_check(F, 0, 1)
    assert r.tested == 1
    assert r.sub_margin == pytest.approx(0.5)


def random_solution(K, rng, lam=None):
    lam = rng.uniform(-1, 1) if lam is None else lam
    return ODESolution(K, lam, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))


@pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
def test_exact_solutions_are_both(K, rng):
    for _ in range(20):
        g = random_solution(K, rng)
        t = np.sort(rng.uniform(0, min(2.5, 0.8 * finite_diameter(K)), 15))
        r = ode.jensen_check(SampledFunction.from_callable(g, t), K, g.lam)
        assert r.verdict is JensenVerdict.BOTH
        assert min(r.sub_margin, r.super_margin) >= -1e-9
        assert ode.outer_jensen_check(SampledFunction.from_callable(g, t), K, g.lam).verdict is JensenVerdict.BOTH


@pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
def test_max_is_sub_min_is_super(K, rng):
    for _ in range(40):
        lam = rng.uniform(-1, 1)
        g1, g2 = random_solution(K, rng, lam), random_solution(K, rng, lam)
        t = np.linspace(0, min(2.0, 0.6 * finite_diameter(K)), 25)
        hi = SampledFunction(tuple(t), tuple(np.maximum(g1(t), g2(t))))
        lo = SampledFunction(tuple(t), tuple(np.minimum(g1(t), g2(t))))
        assert ode.jensen_check(hi, K, lam).verdict.is_sub
        assert ode.jensen_check(lo, K, lam).verdict.is_super
        assert ode.outer_jensen_check(hi, K, lam).verdict.is_sub


def test_outer_jensen_examples():
    t = np.linspace(0, 2, 15)
    assert ode.outer_jensen_check(SampledFunction.from_callable(lambda s: s * s / 2, t), 0, 1).verdict is JensenVerdict.BOTH
    assert ode.outer_jensen_check(SampledFunction.from_callable(lambda s: s * s, t), 0, 1).verdict.is_sub


@pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
def test_solution_behaviour(K, rng):
    # two solutions agreeing at t1 with f1 < f2 at t2 stay ordered within a diameter
    D = min(finite_diameter(K), 3.0)
    for _ in range(50):
        lam = rng.uniform(-1, 1)
        t1 = 0.0
        f0 = rng.uniform(-1, 1)
        g1 = ode.solve_bvp(K, lam, t1, f0, 0.5, f0 + rng.uniform(-1, 0))
        g2 = ode.solve_bvp(K, lam, t1, f0, 0.5, float(g1(0.5)) + rng.uniform(0.1, 1))
        right = np.linspace(t1, t1 + D, 60)[1:-1]
        left = np.linspace(t1 - D, t1, 60)[1:-1]
        assert np.all(g1(right) < g2(right))
        assert np.all(g1(left) > g2(left))


def test_splitting_jensen(rng):
    # triples (t1,t2,t3) and (t2,t3,t4) passing imply (t1,t2,t4) and (t1,t3,t4) passing
    for _ in range(500):
        K = float(rng.choice([-1.0, 0.0, 1.0]))
        lam = rng.uniform(-1, 1)
        g1, g2 = random_solution(K, rng, lam), random_solution(K, rng, lam)
        t = np.sort(rng.uniform(0, min(2.0, 0.6 * finite_diameter(K)), 4))
        if np.min(np.diff(t)) < 1e-3:
            continue
        f = np.maximum(g1(t), g2(t)) + rng.normal(0, 0.05, 4) * rng.integers(2)
        sub = lambda i, j, k: ode.jensen_check(SampledFunction(t[[i, j, k]], f[[i, j, k]]), K, lam).verdict.is_sub
        if sub(0, 1, 2) and sub(1, 2, 3):
            assert sub(0, 1, 3) and sub(0, 2, 3)


def two_sided(K=0.0):
    # f = md(tau(p, gamma(t))) for p = (2, 0.5) off the flat geodesic gamma(t) = (t, 0)
    left = np.linspace(0, 1.5, 8)
    right = np.linspace(2.5, 4, 8)
    tau = lambda s: np.sqrt(np.maximum((s - 2) ** 2 - 0.25, 0))
    return left, right, ode.md(K, tau(left)), ode.md(K, tau(right))


def test_split_domain_exact():
    l, r, fl, fr = two_sided()
    res = ode.split_domain_check(SampledFunction.split(l, fl, r, fr), 0, 1)
    assert res.verdict == "EXTENSIBLE_BOTH"
    assert res.diagnostics["df_b_minus"] <= res.diagnostics["dg_b"] + 0.2


def test_split_domain_zero():
    z = np.zeros(5)
    res = ode.split_domain_check(SampledFunction.split(np.arange(5.0), z, np.arange(6.0, 11.0), z), 0, 0)
    assert res.verdict == "EXTENSIBLE_BOTH"


def test_split_domain_kink():
    l, r, fl, fr = two_sided()
    # reflecting the left branch breaks the derivative criterion at b (no sub extension);
    # steepening the right branch (f'' = 3 > 1) rules out a super extension as well
    res = ode.split_domain_check(SampledFunction.split(l, -fl, r, 3 * fr), 0, 1)
    assert res.verdict == "NEITHER"
    t1, _, t3 = res.jensen.sub_witness
    assert t1 <= 1.5 and t3 >= 2.5
    assert ode.split_domain_check(SampledFunction.split(l, -fl, r, fr), 0, 1).verdict == "EXTENSIBLE_SUPER"
    assert res.diagnostics["df_b_minus"] > res.diagnostics["dg_b"]
    with pytest.raises(BoundaryMismatch):
        ode.split_domain_check(SampledFunction.split(l, fl + 1, r, fr), 0, 1)


@pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
def test_kirchberger_examples(K):
    D = finite_diameter(K)
    L = min(D / 2, 1.5)
    t = np.linspace(0, L, 30)
    assert ode.kirchberger_sign(K, SampledFunction.from_callable(lambda s: -ode.sn(K, s), t), L)
    with pytest.raises(PreconditionFailed):
        ode.kirchberger_sign(K, SampledFunction.from_callable(lambda s: ode.sn(K, s), t), L)
    psi = lambda s: np.maximum(-ode.sn(K, s), ode.sn(K, s - L))
    assert ode.kirchberger_sign(K, SampledFunction.from_callable(psi, t), L)
    if K >= 0:
        # sn - sn(L) solves the equation only up to a constant forcing K sn(L) >= 0
        psi = lambda s: np.maximum(-ode.sn(K, s), ode.sn(K, s) - ode.sn(K, L))
        assert ode.kirchberger_sign(K, SampledFunction.from_callable(psi, t), L)


def test_kirchberger_generated(rng):
    count = 0
    while count < 200:
        K = float(rng.choice([-1.0, 0.0, 1.0]))
        L = min(1.5, 0.45 * finite_diameter(K))
        t = np.linspace(0, L, 20)
        g1 = ode.solve_bvp(K, 0, 0, -rng.uniform(0, 1), L, -rng.uniform(0, 1))
        g2 = ode.solve_bvp(K, 0, 0, -rng.uniform(0, 1), L, -rng.uniform(0, 1))
        psi = SampledFunction(tuple(t), tuple(np.maximum(g1(t), g2(t))))
        assert ode.kirchberger_sign(K, psi, L)
        count += 1
