import logging

import pytest
from hypothesis import given, settings, strategies as st

from balanced.core import (
    DeleteMode,
    SearchBudget,
    build,
    classify_walk,
    degree,
    delete,
    dual,
    induced_sub,
    is_bipartite_graph,
    is_graph,
    max_degree,
    partial,
    relabel,
    set_limits,
    weak_delete,
    check_size,
)
from balanced.errors import (
    EmptyEdge,
    EmptyEdgeSet,
    EmptyVertexSet,
    InstanceTooLarge,
    ResultEmpty,
    UncoveredVertex,
    UnknownTarget,
    UnknownVertexInEdge,
)
from balanced.gen import gen_interval

logging.basicConfig(level=logging.INFO)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def edge_sets(H):
    return [set(e) for e in H.edges]


# Construction
def test_build_p3(P3):
    assert P3.n == 3 and P3.m == 2, "P3 should have 3 vertices and 2 edges."
    assert P3.edge_masks == (0b011, 0b110), "Edge masks follow vertex order."


def test_build_rejects_bad_input():
    with pytest.raises(EmptyEdge):
        build([1, 2], [{1, 2}, set()])
    with pytest.raises(UnknownVertexInEdge):
        build([1, 2], [{1, 3}])
    with pytest.raises(UncoveredVertex) as info:
        build([1, 2, 3], [{1, 2}])
    assert info.value.vertex == 3, "The first uncovered vertex should be reported."


def test_build_keeps_multiset_unless_deduped():
    assert build([1, 2], [{1, 2}, {1, 2}]).m == 2, "Repeated edges are kept by default."
    assert build([1, 2], [{1, 2}, {1, 2}], dedupe=True).m == 1, "dedupe keeps one copy."


def test_relabel():
    H = relabel(build([5, 9], [{5, 9}, {9}]))
    assert H.vertices == (1, 2), "Vertices should be renamed to 1..n in order."
    assert edge_sets(H) == [{1, 2}, {2}], "Edges should follow the renaming."


# Sub-hypergraphs
def test_induced_sub(T1, C4, P3):
    sub = induced_sub(T1, {3, 4})
    assert sub.vertices == (3, 4) and edge_sets(sub) == [{3}, {3, 4}], "Induced T1 on {3,4} is wrong."
    assert edge_sets(induced_sub(C4, {1, 2})) == [{1, 2}, {2}, {1}], "Empty traces are dropped."
    assert edge_sets(induced_sub(P3, {1, 3})) == [{1}, {3}], "Induced P3 on {1,3} is wrong."
    with pytest.raises(EmptyVertexSet):
        induced_sub(P3, set())
    with pytest.raises(UnknownTarget):
        induced_sub(P3, {7})


def test_partial(C4, T1, P3):
    sub = partial(C4, [0, 2])
    assert sub.vertices == (1, 2, 3, 4) and edge_sets(sub) == [{1, 2}, {3, 4}], "Partial C4 {a,c} is wrong."
    assert partial(T1, [1]).vertices == (3, 4), "Vertices outside F are dropped."
    assert partial(P3, [0, 1]) == P3, "Taking every edge gives H back."
    with pytest.raises(EmptyEdgeSet):
        partial(P3, [])
    with pytest.raises(UnknownTarget):
        partial(P3, [5])


def test_dual(P3, C4, T1):
    D = dual(P3)
    assert D.vertices == (0, 1) and edge_sets(D) == [{0}, {0, 1}, {1}], "dual(P3) is wrong."
    D = dual(C4)
    assert edge_sets(D) == [{0, 3}, {0, 1}, {1, 2}, {2, 3}], "dual(C4) should be a 4-cycle on the edge ids."
    assert set(D.degrees) == {2}, "dual(C4) should be 2-regular."
    assert edge_sets(dual(T1)) == [{0}, {0}, {0, 1}, {1}], "dual(T1) is wrong."


def test_dual_is_an_involution_up_to_relabel(C4, T1):
    assert relabel(dual(dual(C4))) == C4, "Double dual of C4 should be C4."
    assert relabel(dual(dual(T1))) == T1, "Double dual of T1 should be T1."


def test_delete(P3, T1):
    with pytest.raises(ResultEmpty):
        delete(P3, DeleteMode.STRONG_VERTEX, 2)
    weak = delete(P3, "weak-vertex", 2)
    assert weak == weak_delete(P3, 2), "weak_delete is the weak-vertex mode."
    assert weak.vertices == (1, 3) and edge_sets(weak) == [{1}, {3}], "P3 weak-minus 2 is wrong."
    strong = delete(T1, DeleteMode.STRONG_VERTEX, 4)
    assert edge_sets(strong) == [{1, 2, 3}], "Strong deletion drops every edge through the vertex."
    without_f1 = delete(T1, DeleteMode.EDGE, 0)
    assert without_f1.vertices == (3, 4) and edge_sets(without_f1) == [{3, 4}], "T1 minus f1 is wrong."
    with pytest.raises(UnknownTarget):
        delete(T1, DeleteMode.EDGE, 2)
    with pytest.raises(UnknownTarget):
        delete(T1, DeleteMode.WEAK_VERTEX, 9)


def test_degrees(T1, C4, P3):
    assert degree(T1, 3) == 2 and max_degree(T1) == 2, "Vertex 3 of T1 has degree 2."
    assert max_degree(C4) == 2, "C4 is 2-regular."
    assert degree(P3, 1) == 1, "An end of P3 has degree 1."


def test_graph_recognition(C4, C3, T1, P3):
    assert is_graph(C4) and not is_graph(T1), "T1 has an edge of size 3."
    assert is_bipartite_graph(C4) and is_bipartite_graph(P3), "Even cycles and paths are bipartite."
    assert not is_bipartite_graph(C3), "The triangle is not bipartite."
    assert not is_bipartite_graph(T1), "A hypergraph with a 3-edge is not a graph."


# Walks
def test_classify_walk(H5, T1, C4):
    assert tuple(classify_walk(H5, [1, 0, 2, 1, 3, 2, 1])) == ("cycle", True, 3), "H5 triangle should be a strong odd cycle."
    assert classify_walk(T1, [1, 0, 2, 0, 3]).kind == "invalid", "Repeated edges make a walk invalid."
    assert tuple(classify_walk(C4, [1, 0, 2, 1, 3])) == ("path", True, 2), "a then b is a strong path."
    assert classify_walk(C4, [1, 0, 2, 0]).kind == "invalid", "An even-length sequence is malformed."


def test_classify_walk_weak_cycle():
    H = build([1, 2, 3], [{1, 2, 3}, {2, 3}, {1, 3}])
    walk = classify_walk(H, [1, 0, 2, 1, 3, 2, 1])
    assert walk.kind == "cycle" and not walk.strong, "The 3-edge holds all three walk vertices."


# Limits
def test_limits_are_enforced(C4):
    set_limits(max_vertices=3)
    with pytest.raises(InstanceTooLarge):
        check_size(C4, "test")
    budget = SearchBudget("test", max_states=2)
    budget.tick(2)
    with pytest.raises(InstanceTooLarge):
        budget.tick()


# Properties over generated instances
@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_double_dual_restores_vertices_and_edges(seed):
    H = gen_interval(6, 5, 3, seed)
    back = relabel(dual(dual(H)))
    assert back.vertices == H.vertices, "Double dual should keep the vertex count."
    assert back.edges == H.edges, "Double dual should give the same edges in the same order."
