import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentz_bounds import model_space as ms
from lorentz_bounds.errors import ChartMismatch, NotCausal, SizeBound, SpaceFormatError
from lorentz_bounds.finite_space import (ConfigClass, Diamond, FiniteLorentzSpace, Straight, TriangleClass,
                                         enumerate_four_point, enumerate_triangles, find_chains,
                                         geodesic_lattice, hub_preset, induce_from_model, load_space,
                                         longest_chain, save_space, space_from_dict, space_to_dict, sprinkle,
                                         validate_space)

m = lambda t, x: ms.minkowski_embed(0, t, x)


def test_validate_examples():
    assert validate_space(FiniteLorentzSpace.from_tau([[0, 1], [0, 0]])).ok
    S = FiniteLorentzSpace.from_tau([[0, 1], [0, 0]])
    S.tau[0, 0] = 0.5
    rep = validate_space(S)
    assert ("chronology" in rep.kinds()) and any(v.witness == (0, 0) for v in rep.violations)
    S = FiniteLorentzSpace.from_tau([[0, 1, 1.5], [0, 0, 1], [0, 0, 0]])
    rep = validate_space(S)
    assert [v.witness for v in rep.violations if v.kind == "reverse_triangle"] == [(0, 1, 2)]


def test_validate_catches_broken_relations():
    tau = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0.0]])
    causal = np.eye(3, dtype=bool)
    causal[0, 1] = causal[1, 2] = True
    rep = validate_space(FiniteLorentzSpace.from_tau(tau, causal))
    assert "causal_not_transitive" in rep.kinds()
    causal[0, 2] = True
    rep = validate_space(FiniteLorentzSpace.from_tau(tau, causal))
    # 0 << 1 <= 2 but tau(0, 2) = 0: push-up and the reverse triangle inequality both fail
    assert rep.kinds() == {"push_up", "reverse_triangle"}
    S = FiniteLorentzSpace.from_tau([[0, 1, 2], [0, 0, 1], [0, 0, 0]], chains=[[0, 2, 1]])
    assert "chain_not_chronological" in validate_space(S).kinds()


def test_induce_examples():
    S = induce_from_model(0, [m(0, 0), m(1, 0), m(2, 0)], chains=[[0, 1, 2]])
    assert S.tau[0, 2] == pytest.approx(2)
    assert validate_space(S).ok
    S = induce_from_model(0, [m(0, 0), m(0, 1)])
    assert not S.tau.any() and not S.chrono.any()
    with pytest.raises(ChartMismatch):
        induce_from_model(1, [m(0, 0)])


@pytest.mark.parametrize("K", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("seed", range(10))
def test_sprinkled_spaces_are_valid(K, seed):
    S = sprinkle(K, Diamond(1.5), 30, seed)
    assert S.n == 30
    assert validate_space(S).ok


def test_sprinkle_examples():
    assert sprinkle(0, Diamond(2.0), 0, 7).n == 0
    S = sprinkle(0, Diamond(2.0), 40, 7)
    assert validate_space(S).ok
    for p in S.points:
        t, x = p.coords
        assert abs(x) <= t <= 2 - abs(x)
    T = sprinkle(0, Diamond(2.0), 40, 7)
    assert np.array_equal(S.tau, T.tau)
    with pytest.raises(SizeBound):
        sprinkle(-1, Diamond(3.5), 10, 0)


@pytest.mark.parametrize("K", [-1.0, 1.0])
def test_sprinkle_stays_in_diamond(K):
    H = 1.5
    S = sprinkle(K, Diamond(H), 50, 3)
    b, top = ms.base_point(K), ms.axis_point(K, H)
    for p in S.points:
        assert ms.model_relation(K, b, p).direction is not ms.Direction.BACKWARD
        assert ms.model_tau(K, b, p) <= H + 1e-9 and ms.model_tau(K, p, top) <= H + 1e-9


def test_lattice_examples():
    S = geodesic_lattice(0, [m(0, 0), m(2, 0)], 3)
    assert S.n == 5 and len(S.chains) == 1
    assert S.chains[0].total == pytest.approx(2)
    tri = hub_preset(0, "triangle", 2.0)
    S = geodesic_lattice(0, tri, 4)
    assert len(S.chains) == 3
    for c in S.chains:
        steps = [S.tau[a, b] for a, b in zip(c.ids, c.ids[1:])]
        assert sum(steps) == pytest.approx(S.tau[c.ids[0], c.ids[-1]], abs=1e-9)
    S = geodesic_lattice(-1, hub_preset(-1, "diamond", 2.0), 4)
    assert validate_space(S).ok and S.chains
    with pytest.raises(SizeBound):
        geodesic_lattice(-1, [ms.base_point(-1), ms.exp_base(-1, 3.2)], 2)


def test_lattice_chain_additivity(lattices):
    for S in lattices.values():
        assert validate_space(S).ok
        for c in S.chains:
            assert abs(S.chain_params(c.ids)[-1] - c.total) <= 1e-9


def brute_triangles(S):
    C, CH = S.causal, S.chrono
    out = []
    for x, y, z in itertools.permutations(range(S.n), 3):
        if not CH[x, z]:
            continue
        null_xy, null_yz = C[x, y] and not CH[x, y], C[y, z] and not CH[y, z]
        if CH[x, y] and CH[y, z]:
            out.append((x, y, z, TriangleClass.TIMELIKE))
        elif (null_xy and CH[y, z]) or (CH[x, y] and null_yz):
            out.append((x, y, z, TriangleClass.ADMISSIBLE_CAUSAL))
    return sorted(out)


def test_triangle_examples():
    S = induce_from_model(0, [m(0, 0), m(1, 0), m(2, 0)], chains=[[0, 1, 2]])
    assert list(enumerate_triangles(S, require_chains=True)) == [(0, 1, 2, TriangleClass.TIMELIKE)]
    S = induce_from_model(0, [m(0, 0), m(1, 1), m(3, 1), m(0, 5)])
    assert (0, 1, 2, TriangleClass.ADMISSIBLE_CAUSAL) in list(enumerate_triangles(S))


def test_triangles_match_brute_force():
    S = sprinkle(0, Diamond(2.0), 20, 11)
    assert sorted(enumerate_triangles(S)) == brute_triangles(S)
    S = geodesic_lattice(1, hub_preset(1, "triangle"), 2)
    assert sorted(enumerate_triangles(S)) == brute_triangles(S)


def test_required_chains_filter(lattices):
    S = lattices[0.0]
    H = S.chain_matrix
    for x, y, z, cls in enumerate_triangles(S, require_chains=True):
        assert H[x, y] and H[y, z] and H[x, z]


def brute_four_point(S, cls, endpoint_only):
    rel = S.chrono if cls is ConfigClass.TIMELIKE else S.causal
    out = set()
    for y, x, z1, z2 in itertools.permutations(range(S.n), 4):
        if S.chrono[y, x] and rel[x, z1] and rel[x, z2] and (S.causal[z1, z2] or not endpoint_only):
            out.add((y, x, z1, z2))
    return out


@pytest.mark.parametrize("cls", [ConfigClass.TIMELIKE, ConfigClass.CAUSAL])
@pytest.mark.parametrize("endpoint_only", [True, False])
def test_four_point_matches_brute_force(cls, endpoint_only):
    S = sprinkle(0, Diamond(2.0), 15, 5)
    got = [c.ids for c in enumerate_four_point(S, cls, "FUTURE", endpoint_only)]
    assert len(got) == len(set(got))
    assert set(got) == brute_four_point(S, cls, endpoint_only)


def test_four_point_examples():
    S = induce_from_model(0, [m(0, 0), m(1, 0), m(2, 0), m(3, 0)])
    cfg = {c.ids: c for c in enumerate_four_point(S)}[(0, 1, 2, 3)]
    assert cfg.straight is Straight.BOTH and cfg.endpoint_causal
    S = induce_from_model(0, [m(0, 0), m(1, 0), m(2, 0), m(2.5, 0.5)])
    cfg = {c.ids: c for c in enumerate_four_point(S, ConfigClass.CAUSAL)}[(0, 1, 2, 3)]
    # tau(y,z2) = sqrt(6) < tau(y,x) + tau(x,z2) = 1 + sqrt(2): only the left side is straight
    assert cfg.straight is Straight.LEFT and cfg.endpoint_causal
    assert S.causal[2, 3] and not S.chrono[2, 3]


def test_four_point_timelike_within_causal(flat_sprinkle):
    causal = {c.ids for c in enumerate_four_point(flat_sprinkle, ConfigClass.CAUSAL)}
    for c in enumerate_four_point(flat_sprinkle, ConfigClass.TIMELIKE):
        assert c.ids in causal


def test_past_configs_are_time_reversed_future(lattices):
    S = lattices[1.0]
    fut = {c.ids for c in enumerate_four_point(S.time_reversed(), sense="FUTURE")}
    past = {tuple(reversed(c.ids)) for c in enumerate_four_point(S, sense="PAST")}
    assert fut == past


def test_straight_filter(lattices):
    S = lattices[0.0]
    straight = list(enumerate_four_point(S, straight_filter="STRAIGHT"))
    assert straight and all(c.straight is not Straight.NONE for c in straight)


def test_find_chains_examples():
    S = induce_from_model(0, [m(0, 0), m(0.5, 0), m(1, 0), m(2, 0)])
    (c,) = find_chains(S, 0, 3)
    assert c.ids == (0, 1, 2, 3) and c.total == pytest.approx(2)
    # two unrelated midpoints, each realizing tau(x, z) (a non-model space)
    tau = np.zeros((4, 4))
    tau[0, 1] = tau[0, 2] = tau[1, 3] = tau[2, 3] = 1.0
    tau[0, 3] = 2.0
    S = FiniteLorentzSpace.from_tau(tau)
    assert validate_space(S).ok
    assert [c.ids for c in find_chains(S, 0, 3)] == [(0, 1, 3), (0, 2, 3)]
    with pytest.raises(NotCausal):
        find_chains(S, 3, 0)


def test_find_chains_generic_sprinkle(flat_sprinkle):
    S = flat_sprinkle
    i, j = np.unravel_index(np.argmax(S.tau), S.tau.shape)
    ids, total = longest_chain(S, i, j)
    assert total < S.tau[i, j]
    assert find_chains(S, i, j, tol=1e-9) == []


def test_longest_chain_oracle(flat_sprinkle):
    # exhaustive over chains of up to two interior points
    S = flat_sprinkle
    i, j = np.unravel_index(np.argmax(S.tau), S.tau.shape)
    inside = np.flatnonzero(S.chrono[i] & S.chrono[:, j])
    best = max(S.tau[i, a] + S.tau[a, j] for a in inside)
    for a, b in itertools.permutations(inside, 2):
        if S.chrono[a, b]:
            best = max(best, S.tau[i, a] + S.tau[a, b] + S.tau[b, j])
    ids, total = longest_chain(S, i, j)
    assert total >= best - 1e-12
    assert total == pytest.approx(sum(S.tau[a, b] for a, b in zip(ids, ids[1:])))


def test_json_round_trip(tmp_path, lattices):
    S = lattices[-1.0]
    save_space(S, tmp_path / "s.json")
    T = load_space(tmp_path / "s.json")
    assert np.array_equal(S.tau, T.tau) and np.array_equal(S.causal, T.causal)
    assert [c.ids for c in S.chains] == [c.ids for c in T.chains]
    assert T.points == S.points and T.K == S.K


def test_json_causal_default_and_errors():
    S = space_from_dict({"points": [{"id": 0}, {"id": 1}, {"id": 2}],
                         "tau": [[0, 1, 2], [0, 0, 1], [0, 0, 0]]})
    assert S.causal.all() == False and S.causal[0, 2] and S.causal[1, 1]  # noqa: E712
    with pytest.raises(SpaceFormatError, match="points/0/id"):
        space_from_dict({"points": [{"id": "a"}], "tau": [[0]]})
    with pytest.raises(SpaceFormatError, match="tau"):
        space_from_dict({"points": [{"id": 0}], "tau": [[0, 1]]})
    with pytest.raises(SpaceFormatError, match="chains/0"):
        space_from_dict({"points": [{"id": 0}], "tau": [[0]], "chains": [[0, 4]]})
    d = space_to_dict(FiniteLorentzSpace.from_tau(np.zeros((0, 0))))
    assert space_from_dict(json.loads(json.dumps(d))).n == 0


def test_determinism():
    a = list(enumerate_four_point(sprinkle(1, Diamond(1.5), 12, 9)))
    b = list(enumerate_four_point(sprinkle(1, Diamond(1.5), 12, 9)))
    assert a == b


@given(st.integers(0, 2**31), st.integers(3, 12))
def test_subsets_stay_valid(seed, n):
    S = sprinkle(0, Diamond(2.0), n, seed)
    keep = np.random.default_rng(seed).permutation(n)[: n // 2]
    assert validate_space(S.subset(sorted(keep))).ok
    assert validate_space(S.time_reversed()).ok
