from math import comb

import pytest
from hypothesis import given, strategies as st

from permatch.graphs import AssocGraph, CubeGraph, NoLevelStructure, PermGraph
from permatch.layered import (
    HallViolation,
    build_layer_pair,
    chain_span,
    choose_residue,
    chosen_levels,
    cube_layered_via_chains,
    hall_check,
    hopcroft_karp,
    layered_bound,
    layered_matching,
    max_bipartite_matching,
    scd_chain,
    scd_chains,
    scd_down,
    scd_up,
)
from permatch.matching import verify_matching, verify_maximal


def bits(n):
    return st.integers(0, 14).flatmap(lambda k: st.text("01", min_size=k, max_size=k))


# --- symmetric chains ------------------------------------------------------


def test_scd_examples():
    assert scd_chain("1000110") == ["0000110", "1000110", "1100110", "1100111"]
    assert scd_chain("01") == ["01"]
    assert scd_chain("00") == ["00", "10", "11"]


@pytest.mark.parametrize("n", range(0, 13))
def test_chains_partition_cube(n):
    seen = set()
    count = 0
    for chain in scd_chains(n):
        count += 1
        levels = [c.count("1") for c in chain]
        t = levels[0]
        assert levels == list(range(t, n - t + 1))
        for a, b in zip(chain, chain[1:]):
            assert sum(x != y for x, y in zip(a, b)) == 1
        for c in chain:
            assert c not in seen
            seen.add(c)
    assert len(seen) == 1 << n
    assert count == comb(n, n // 2)


@given(bits(14))
def test_chain_of_any_member(word):
    chain = scd_chain(word)
    assert word in chain
    for c in chain:
        assert scd_chain(c) == chain
        assert chain_span(c) == (chain[0].count("1"), chain[-1].count("1"))
    for a, b in zip(chain, chain[1:]):
        assert scd_up(a) == b and scd_down(b) == a
    assert scd_up(chain[-1]) is None and scd_down(chain[0]) is None


# --- bipartite matching ----------------------------------------------------


def test_max_bipartite_examples():
    star = max_bipartite_matching(["c"], ["a", "b", "d"], lambda u: ["a", "b", "d"])
    assert len(star) == 1
    k33 = max_bipartite_matching([0, 1, 2], ["x", "y", "z"], lambda u: ["x", "y", "z"])
    assert len(k33) == 3 and len(set(k33.values())) == 3
    g = PermGraph(4)
    right = g.level_vertices(3)
    m = max_bipartite_matching(g.level_vertices(2), right, lambda u: [w for w, _ in g.neighbors(u)])
    assert len(m) == 5


@given(st.integers(1, 8), st.integers(1, 8), st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7))))
def test_hopcroft_karp_against_brute_force(nl, nr, pairs):
    pairs = {(a, b) for a, b in pairs if a < nl and b < nr}
    adj = {u: sorted(b for a, b in pairs if a == u) for u in range(nl)}
    m = hopcroft_karp(list(range(nl)), lambda u: adj[u])
    assert all((u, v) in pairs for u, v in m.items())
    assert len(set(m.values())) == len(m)
    assert len(m) == _brute_matching(sorted(pairs))


def _brute_matching(pairs, used_l=frozenset(), used_r=frozenset(), start=0):
    best = 0
    for k in range(start, len(pairs)):
        a, b = pairs[k]
        if a not in used_l and b not in used_r:
            best = max(best, 1 + _brute_matching(pairs, used_l | {a}, used_r | {b}, k + 1))
    return best


# --- Hall checks and layer pairs ------------------------------------------


def test_hall_examples():
    assert hall_check(PermGraph(3), 0, "up")
    assert hall_check(CubeGraph(4), 1, "up")
    top = len(PermGraph(5).level_sizes()) - 1
    assert all(hall_check(PermGraph(5), k, "up") for k in range(top // 2))


@pytest.mark.parametrize("g", [PermGraph(n) for n in range(2, 7)] + [CubeGraph(n) for n in range(1, 11)],
                         ids=lambda g: g.describe())
def test_hall_holds_below_and_above_middle(g):
    top = len(g.level_sizes()) - 1
    for k in range(top // 2):
        assert hall_check(g, k, "up")
    for k in range(-(-top // 2) + 1, top + 1):
        assert hall_check(g, k, "down")


def test_hall_fails_past_middle():
    g = PermGraph(4)  # levels 1 3 5 6 5 3 1
    assert not hall_check(g, 4, "up")
    with pytest.raises(HallViolation):
        build_layer_pair(g, 5, "up")


def test_layer_pair_examples():
    for g, k, size in [(PermGraph(3), 1, 2), (CubeGraph(3), 1, 3), (PermGraph(4), 2, 5)]:
        m = build_layer_pair(g, k, "up")
        assert m.size == size == g.level_sizes()[k]
        assert verify_matching(g, m)
        covered = m.covered()
        assert set(g.level_vertices(k - 1)) | set(g.level_vertices(k)) <= covered


@pytest.mark.parametrize("n", range(3, 7))
def test_layer_pair_sizes(n):
    g = PermGraph(n)
    sizes = g.level_sizes()
    top = len(sizes) - 1
    for k in range(1, top // 2):
        assert build_layer_pair(g, k, "up").size == sizes[k]
    for k in range(-(-top // 2) + 1, top):
        assert build_layer_pair(g, k, "down").size == sizes[k]


def test_no_level_structure():
    with pytest.raises(NoLevelStructure):
        hall_check(AssocGraph(4), 0)
    with pytest.raises(NoLevelStructure):
        layered_matching(AssocGraph(4))


# --- residue choice and assembly ------------------------------------------


def test_choose_residue():
    assert choose_residue([1, 3, 5, 6, 5, 3, 1]) in (1, 2, 3)
    sizes = [1, 3, 5, 6, 5, 3, 1]
    sums = {p: sum(s for k, s in enumerate(sizes) if k % 3 == p % 3 and 0 < k) for p in (1, 2, 3)}
    assert sums[choose_residue(sizes)] == min(sums.values())
    # ties go to the smallest residue
    assert choose_residue([1, 1, 1, 1]) == 1


@given(st.lists(st.integers(1, 50), min_size=2, max_size=30))
def test_residue_sum_at_most_third(sizes):
    p = choose_residue(sizes)
    chosen = sum(s for k, s in enumerate(sizes) if k % 3 == p % 3 and k > 0)
    assert 3 * chosen <= sum(sizes[1:])


def test_chosen_levels_skip_middle():
    low, high = chosen_levels(6, 3)
    assert all(0 < k < 3 for k in low) and all(3 < k < 6 for k in high)
    low, high = chosen_levels(7, 1)
    assert 3 not in low + high and 4 not in low + high


def test_layered_bound():
    num, den = layered_bound([1, 3, 5, 6, 5, 3, 1])
    assert (num, den) == (24 + 18 * 6, 3)


@pytest.mark.parametrize("g", [PermGraph(n) for n in range(2, 7)] + [CubeGraph(n) for n in range(1, 11)],
                         ids=lambda g: g.describe())
def test_layered_matching_contract(g):
    res = layered_matching(g)
    assert res.maximal and verify_maximal(g, res.matching)
    sizes = g.level_sizes()
    top = len(sizes) - 1
    mid = max(sizes[top // 2], sizes[-(-top // 2)])
    assert 3 * res.size <= g.vertex_count + 18 * mid
    assert res.core_size == sum(sizes[k] for k in sum(chosen_levels(top, res.p), []))


# frozen after the first verified run
LAYERED_SIZES = {
    "perm(n=4)": 12, "perm(n=5)": 52, "perm(n=6)": 295,
    "cube(n=6)": 31, "cube(n=8)": 120, "cube(n=10)": 467,
}


def test_layered_goldens():
    for g in (PermGraph(4), PermGraph(5), PermGraph(6), CubeGraph(6), CubeGraph(8), CubeGraph(10)):
        assert layered_matching(g).size == LAYERED_SIZES[g.describe()]
    # bracketed by the lower bound 8 and the generic bound 44 on the 4-permutahedron
    assert 8 <= LAYERED_SIZES["perm(n=4)"] <= 24 / 3 + 6 * 6
    assert layered_matching(CubeGraph(10)).size <= 1024 / 3 + 6 * 252
    rep = layered_matching(PermGraph(5)).report()
    assert rep["bound"] == "516/3" and rep["bound_floor"] == 172


@pytest.mark.parametrize("n", range(1, 11))
def test_cube_chain_route(n):
    g = CubeGraph(n)
    res = cube_layered_via_chains(g)
    assert res.maximal
    assert 3 * res.size <= g.vertex_count + 18 * comb(n, n // 2)
