import logging

import pytest
from hypothesis import given, settings, strategies as st

from balanced.balance import is_balanced
from balanced.coloring import (
    EdgeColoring,
    edge_coloring,
    equitable_bisect,
    is_proper_bicoloring,
    verify_edge_coloring,
    vertex_2color,
)
from balanced.core import build, max_degree, partial
from balanced.errors import NotBalanced
from balanced.gen import gen_bipartite, gen_interval

logging.basicConfig(level=logging.INFO)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _split_is_equitable(H, first, second):
    for v in H.vertices:
        a = sum(1 for i in first if v in H.edges[i])
        b = sum(1 for i in second if v in H.edges[i])
        if abs(a - b) > 1:
            return False
    return True


# Vertex colorings
def test_vertex_2color(C4, P3, T1):
    assert vertex_2color(C4).colors == (0, 1, 0, 1), "C4 alternates colors."
    assert vertex_2color(P3).colors == (0, 1, 0), "P3 alternates colors."
    coloring = vertex_2color(T1)
    assert coloring.colors == (0, 0, 1, 0), "First proper coloring of T1 in search order."
    assert coloring.to_dict() == {"colors": {"1": 0, "2": 0, "3": 1, "4": 0}}, "Colors keyed by vertex."


def test_vertex_2color_requires_balance(H5):
    with pytest.raises(NotBalanced):
        vertex_2color(H5)


def test_singleton_edges_need_no_second_color(singleton):
    assert is_proper_bicoloring(singleton, vertex_2color(singleton).colors), "Singletons are exempt."


# Bisection
def test_equitable_bisect(C4, P3, T1):
    assert equitable_bisect(C4) == ([0, 2], [1, 3]), "Each C4 vertex splits 1/1."
    assert equitable_bisect(P3) == ([0], [1]), "The P3 center splits 1/1."
    assert equitable_bisect(T1) == ([0], [1]), "Vertex 3 of T1 splits 1/1."


# Edge colorings
def test_edge_coloring(C4, P3, edge12, star3):
    coloring = edge_coloring(C4)
    assert coloring.k == 2 and coloring.classes == [[0, 2], [1, 3]], "C4 needs two colors."
    assert edge_coloring(P3).classes == [[0], [1]], "P3 edges intersect."
    assert edge_coloring(edge12).k == 1, "A single edge needs one color."
    coloring = edge_coloring(star3)
    assert coloring.k == 3 and coloring.classes == [[0], [1], [2]], "Odd maximum degree goes through peeling."


def test_verify_edge_coloring(C4, P3):
    assert verify_edge_coloring(C4, EdgeColoring((1, 2, 1, 2), 2)), "{a,c}/{b,d} is proper."
    assert not verify_edge_coloring(C4, EdgeColoring((1, 1, 1, 1), 1)), "a and b share vertex 2."
    assert not verify_edge_coloring(P3, EdgeColoring((1, 3), 3)), "More colors than the maximum degree."
    assert not verify_edge_coloring(P3, EdgeColoring((1,), 2)), "Every edge needs a color."


def test_odd_degree_with_uneven_vertices():
    # two degree-3 vertices pulling a bisection in opposite directions
    H = build(range(1, 6), [{1, 2}, {1, 3}, {1, 4}, {4, 5}, {2, 5}, {3, 5}])
    coloring = edge_coloring(H)
    assert coloring.k <= max_degree(H) and verify_edge_coloring(H, coloring), "Coloring must stay within Delta."


# Properties over generated instances
@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_colorings_on_generated_instances(seed):
    for H in (gen_interval(7, 7, 4, seed), gen_bipartite(3, 4, 0.5, seed)):
        coloring = edge_coloring(H)
        assert verify_edge_coloring(H, coloring), f"Improper edge coloring of {H}."
        assert sorted(i for cls in coloring.classes for i in cls) == list(range(H.m)), "Classes partition E."
        assert is_proper_bicoloring(H, vertex_2color(H).colors), f"Improper 2-coloring of {H}."
        first, second = equitable_bisect(H)
        assert _split_is_equitable(H, first, second), f"Bisection of {H} is not equitable."
        for half in (first, second):
            if half:
                assert is_balanced(partial(H, half)).balanced, "Halves stay balanced."
