import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from permatch.bounds import (
    BoundValue,
    bounds_report,
    edge_heaviness,
    family_bound,
    formula_alpha,
    graph_heaviness,
    induced_4cycles_through,
    lower_bound_assoc,
    lower_bound_cube,
    lower_bound_general,
    lower_bound_perm,
    lower_bound_product,
)
from permatch.graphs import AssocGraph, CubeGraph, ExplicitGraph, GraphError, PermGraph, ProductGraph


def tau_edge(g, word, i):
    v = g.parse(word)
    w = next(x for x, lab in g.neighbors(v) if lab == i)
    return v, w


# --- cycles ----------------------------------------------------------------


def test_cycle_examples():
    q = CubeGraph(3)
    for u, w, _ in q.edges():
        assert len(induced_4cycles_through(q, u, w)) == 2
    g4 = PermGraph(4)
    assert induced_4cycles_through(g4, *tau_edge(g4, "1234", 2)) == []
    g5 = PermGraph(5)
    assert len(induced_4cycles_through(g5, *tau_edge(g5, "12345", 1))) >= 2


def test_cycle_errors():
    g = PermGraph(4)
    with pytest.raises(GraphError):
        induced_4cycles_through(g, g.parse("1234"), g.parse("4321"))


@pytest.mark.parametrize("g", [PermGraph(5), CubeGraph(4), AssocGraph(5), ProductGraph((3, 3))],
                         ids=lambda g: g.describe())
def test_cycles_canonical_and_induced(g):
    for u, w, _ in g.edges():
        cycles = induced_4cycles_through(g, u, w)
        assert len({frozenset(c) for c in cycles}) == len(cycles)
        for a, b, x, y in cycles:
            assert (a, b) == (min(u, w), max(u, w))
            assert g.has_edge(b, x) and g.has_edge(x, y) and g.has_edge(y, a)
            assert not g.has_edge(a, x) and not g.has_edge(b, y)
        assert 0 <= edge_heaviness(g, u, w) <= len(cycles)


# --- heaviness -------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_cube_heaviness_exact(n):
    g = CubeGraph(n)
    assert all(edge_heaviness(g, u, w) == n - 1 for u, w, _ in g.edges())


@pytest.mark.parametrize("n", range(4, 7))
def test_perm_heaviness_at_least(n):
    rep = graph_heaviness(PermGraph(n))
    assert rep.certified_exhaustive
    assert min(rep.per_edge.values()) >= n - 4
    assert rep.alpha == n - 4


def test_heaviness_examples():
    g4 = PermGraph(4)
    assert edge_heaviness(g4, *tau_edge(g4, "1234", 2)) == 0
    g5 = PermGraph(5)
    assert edge_heaviness(g5, *tau_edge(g5, "12345", 2)) == 1
    assert graph_heaviness(g5).alpha == 1
    assert graph_heaviness(CubeGraph(4)).alpha == 3


def test_assoc_heaviness_is_computed_not_assumed():
    # an edge whose tree edge touches every other tree edge lies on pentagons only
    assert [graph_heaviness(AssocGraph(n)).alpha for n in range(2, 7)] == [0, 0, 0, 0, 0]
    assert formula_alpha(AssocGraph(6)) == 1
    rep = bounds_report(AssocGraph(6), exact=False)
    assert rep["alpha"]["alpha"] == 0 and rep["alpha"]["formula"] == 1
    assert rep["family_bound"]["trusted"] is False


def test_sampled_heaviness_is_not_certified():
    rep = graph_heaviness(PermGraph(7), sample=50, seed=1)
    assert not rep.certified_exhaustive
    assert rep.alpha >= 3
    again = graph_heaviness(PermGraph(7), sample=50, seed=1)
    assert again.per_edge == rep.per_edge


def test_heaviness_threads_identical():
    g = PermGraph(6)
    assert graph_heaviness(g, threads=2).per_edge == graph_heaviness(g).per_edge


# --- formulas --------------------------------------------------------------


def test_general_bound_examples():
    assert lower_bound_general(3, 3, 2, 8).value == 3
    c4 = lower_bound_general(2, 2, 1, 4)
    assert c4.value == Fraction(8, 5) and c4.ceiling == 2
    s5 = lower_bound_general(4, 4, 1, 120)
    assert s5.as_json() == {"exact": "480/13", "ceiling": 37}
    with pytest.raises(ValueError):
        lower_bound_general(1, 1, 2, 4)


def test_family_formula_examples():
    p4 = lower_bound_perm(4)
    assert p4.value == Fraction(72, 10) and p4.ceiling == 8
    assert lower_bound_product((4, 3)).value == 45
    assert lower_bound_product((3, 4)).value == 45
    assert lower_bound_perm(5).ceiling == 37
    assert lower_bound_cube(3).value == 3
    with pytest.raises(ValueError):
        lower_bound_product((2, 2, 2))
    with pytest.raises(ValueError):
        lower_bound_perm(1)
    assert family_bound(ProductGraph((2, 2, 2)))[0] == "cube"


@pytest.mark.parametrize("n", range(3, 10))
def test_family_formulas_match_general(n):
    assert lower_bound_perm(n) == lower_bound_general(n - 1, n - 1, n - 4, PermGraph(n).vertex_count)
    assert lower_bound_cube(n) == lower_bound_general(n, n, n - 1, 1 << n)
    if n >= 5:
        a = AssocGraph(n) if n <= 7 else None
        if a is not None:
            assert lower_bound_assoc(n) == lower_bound_general(n - 1, n - 1, n - 5, a.vertex_count)


@given(st.integers(1, 50), st.integers(1, 20), st.integers(0, 20), st.integers(1, 10**6))
def test_ceiling_property(d, delta, alpha, nv):
    if 4 * delta - alpha - 2 <= 0:
        with pytest.raises(ValueError):
            lower_bound_general(d, delta, alpha, nv)
        return
    b = lower_bound_general(d, delta, alpha, nv)
    assert b.ceiling >= b.value > b.ceiling - 1
    assert isinstance(b, BoundValue)


# --- reports ---------------------------------------------------------------


def test_report_sigma4_tight():
    rep = bounds_report(PermGraph(4))
    assert rep["lower"] == 8
    assert rep["upper"]["construct"] == 8
    assert rep["exact_value"] == 8
    assert rep["tight"]
    assert "alpha = 0" in " ".join(rep["notes"])


def test_report_q3_and_sigma5():
    q3 = bounds_report(CubeGraph(3))
    assert q3["lower"] == 3 and q3["exact_value"] == 3
    s5 = bounds_report(PermGraph(5))
    assert s5["lower"] == 37 and s5["upper"]["construct"] == 40
    assert s5["general_bound"]["exact"] == "480/13"
    json.dumps(s5)


def test_report_products_and_explicit():
    rep = bounds_report(ProductGraph((4, 3)))
    assert rep["family_bound"]["exact"] == "45/1"
    assert rep["lower"] <= rep["upper"]["construct"] == 48
    square = ExplicitGraph.from_text("a b\nb c\nc d\nd a\n")
    rep = bounds_report(square)
    assert rep["lower"] == 2 and rep["exact_value"] == 2


def test_report_large_uses_formula():
    rep = bounds_report(PermGraph(9), exact=False)
    assert rep["alpha"]["source"] == "formula"
    assert rep["upper"] == {"construct_formula": 120960}
    assert rep["lower"] == lower_bound_perm(9).ceiling
