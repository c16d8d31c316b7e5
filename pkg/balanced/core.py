"""Hypergraph data model and the structural operators everything else builds on.

Vertices are small integer ids kept in a stable order; edges are an ordered
multiset of nonempty vertex sets.  Every solver works on bitsets: vertex ``v``
sits at bit ``H.index[v]`` and ``H.edge_masks[i]`` is the mask of edge ``i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

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


@dataclass(frozen=True)
class Limits:
    max_vertices: int = 64
    max_edges: int = 64
    max_states: int = 10_000_000
    oracle_max: int = 12
    charac_max_edges: int = 8
    charac_max_vertices: int = 10
    charac_samples: int = 1000


# Module-wide limits, replaced (never mutated) by set_limits.
_limits = Limits()


def get_limits() -> Limits:
    return _limits


def set_limits(**overrides) -> Limits:
    global _limits
    _limits = replace(_limits, **overrides)
    logging.info(f"Limits updated: {_limits}")
    return _limits


class SearchBudget:
    """Counts search states and fails loudly once the configured budget is spent."""

    __slots__ = ("what", "max_states", "states")

    def __init__(self, what: str, max_states: int | None = None):
        self.what = what
        self.max_states = max_states if max_states is not None else _limits.max_states
        self.states = 0

    def tick(self, count: int = 1) -> None:
        self.states += count
        if self.states > self.max_states:
            raise InstanceTooLarge(f"{self.what} exceeded the search budget of {self.max_states} states")


def check_size(H: "Hypergraph", what: str) -> None:
    if H.n > _limits.max_vertices or H.m > _limits.max_edges:
        raise InstanceTooLarge(
            f"{what}: instance has {H.n} vertices and {H.m} edges, "
            f"cap is {_limits.max_vertices}/{_limits.max_edges}"
        )


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[int, ...]
    edges: tuple[frozenset, ...]
    strict_cover: bool = True

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(self.mask_of(e) for e in self.edges)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        counts = [0] * self.n
        for e in self.edges:
            for v in e:
                counts[self.index[v]] += 1
        return tuple(counts)

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        # two vertices are neighbors iff some edge holds both
        adj = [0] * self.n
        for mask in self.edge_masks:
            for pos in bits(mask):
                adj[pos] |= mask
        return tuple(a & ~(1 << pos) for pos, a in enumerate(adj))

    def mask_of(self, vertices: Iterable) -> int:
        mask = 0
        for v in vertices:
            mask |= 1 << self.index[v]
        return mask

    def vertices_of(self, mask: int) -> tuple:
        return tuple(self.vertices[pos] for pos in bits(mask))

    def edge_size(self, i: int) -> int:
        return len(self.edges[i])

    def __repr__(self) -> str:
        edges = ", ".join("{" + ",".join(str(v) for v in self.sorted_edge(i)) + "}" for i in range(self.m))
        return f"Hypergraph(n={self.n}, m={self.m}, edges=[{edges}])"

    def sorted_edge(self, i: int) -> list:
        return sorted(self.edges[i], key=self.index.__getitem__)


def bits(mask: int):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class DeleteMode(str, Enum):
    STRONG_VERTEX = "strong-vertex"
    WEAK_VERTEX = "weak-vertex"
    EDGE = "edge"


def build(vertices: Iterable, edges: Iterable[Iterable], strict_cover: bool = True, dedupe: bool = False) -> Hypergraph:
    ordered = tuple(dict.fromkeys(vertices))
    known = set(ordered)
    frozen = []
    for i, edge in enumerate(edges):
        e = frozenset(edge)
        if not e:
            raise EmptyEdge(f"edge {i} is empty")
        unknown = e - known
        if unknown:
            raise UnknownVertexInEdge(f"edge {i} mentions unknown vertices {sorted(unknown)}")
        frozen.append(e)
    H = Hypergraph(ordered, tuple(frozen), strict_cover)
    if strict_cover:
        covered = H.mask_of(set().union(*frozen)) if frozen else 0
        if covered != H.full_mask:
            first = H.vertices_of(H.full_mask & ~covered)[0]
            raise UncoveredVertex(first)
    return normalize(H) if dedupe else H


def normalize(H: Hypergraph) -> Hypergraph:
    """Set semantics: keep the first copy of every repeated edge."""
    return replace(H, edges=tuple(dict.fromkeys(H.edges)))


def covered_vertices(H: Hypergraph) -> tuple:
    covered = 0
    for mask in H.edge_masks:
        covered |= mask
    return H.vertices_of(covered)


def relabel(H: Hypergraph, start: int = 1) -> Hypergraph:
    mapping = {v: start + i for i, v in enumerate(H.vertices)}
    return Hypergraph(
        tuple(mapping[v] for v in H.vertices),
        tuple(frozenset(mapping[v] for v in e) for e in H.edges),
        H.strict_cover,
    )


def _is_covered(H: Hypergraph) -> bool:
    covered = 0
    for mask in H.edge_masks:
        covered |= mask
    return covered == H.full_mask


def induced_sub(H: Hypergraph, W: Iterable) -> Hypergraph:
    wanted = set(W)
    if not wanted:
        raise EmptyVertexSet("induced subhypergraph needs a nonempty vertex set")
    unknown = wanted - set(H.vertices)
    if unknown:
        raise UnknownTarget(f"vertices {sorted(unknown)} are not in the hypergraph")
    vertices = tuple(v for v in H.vertices if v in wanted)
    edges = tuple(e & wanted for e in H.edges if e & wanted)
    sub = Hypergraph(vertices, edges, False)
    return replace(sub, strict_cover=_is_covered(sub))


def partial(H: Hypergraph, F: Iterable[int]) -> Hypergraph:
    chosen = sorted(set(F))
    if not chosen:
        raise EmptyEdgeSet("partial hypergraph needs a nonempty edge set")
    for i in chosen:
        if not 0 <= i < H.m:
            raise UnknownTarget(f"edge index {i} out of range 0..{H.m - 1}")
    union = set().union(*(H.edges[i] for i in chosen))
    vertices = tuple(v for v in H.vertices if v in union)
    return Hypergraph(vertices, tuple(H.edges[i] for i in chosen), True)


def dual(H: Hypergraph) -> Hypergraph:
    """Vertices of the dual are the edge indices of H; edges are the vertex stars."""
    degrees = H.degrees
    for pos, v in enumerate(H.vertices):
        if degrees[pos] == 0:
            raise UncoveredVertex(v)
    stars = tuple(frozenset(i for i, e in enumerate(H.edges) if v in e) for v in H.vertices)
    return Hypergraph(tuple(range(H.m)), stars, True)


def delete(H: Hypergraph, mode: DeleteMode | str, target) -> Hypergraph:
    mode = DeleteMode(mode)
    if mode is DeleteMode.EDGE:
        if not isinstance(target, int) or not 0 <= target < H.m:
            raise UnknownTarget(f"edge index {target} out of range")
        rest = [i for i in range(H.m) if i != target]
        if not rest:
            raise ResultEmpty(f"deleting edge {target} leaves no edges")
        return partial(H, rest)

    if target not in H.index:
        raise UnknownTarget(f"vertex {target} is not in the hypergraph")
    vertices = tuple(v for v in H.vertices if v != target)
    if mode is DeleteMode.STRONG_VERTEX:
        edges = tuple(e for e in H.edges if target not in e)
        strict = False
    else:
        edges = tuple(e - {target} for e in H.edges if e - {target})
        strict = H.strict_cover
    if not edges:
        raise ResultEmpty(f"{mode.value} deletion of {target} removes every edge")
    return Hypergraph(vertices, edges, strict)


def weak_delete(H: Hypergraph, v) -> Hypergraph:
    """H \\ v, the deletion the decomposition theorems talk about."""
    return delete(H, DeleteMode.WEAK_VERTEX, v)


def degree(H: Hypergraph, v) -> int:
    if v not in H.index:
        raise UnknownTarget(f"vertex {v} is not in the hypergraph")
    return H.degrees[H.index[v]]


def max_degree(H: Hypergraph) -> int:
    return max(H.degrees, default=0)


def is_graph(H: Hypergraph) -> bool:
    return all(len(e) <= 2 for e in H.edges)


def is_bipartite_graph(H: Hypergraph) -> bool:
    """Every edge has exactly two vertices and the resulting graph is bipartite."""
    if not H.edges or any(len(e) != 2 for e in H.edges):
        return False
    G = nx.Graph()
    G.add_nodes_from(H.vertices)
    G.add_edges_from(tuple(e) for e in H.edges)
    return nx.is_bipartite(G)


@dataclass(frozen=True)
class Walk:
    vertices: tuple
    edges: tuple[int, ...]
    kind: str

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def vertex_set(self) -> frozenset:
        if self.kind == "cycle":
            return frozenset(self.vertices[:-1])
        return frozenset(self.vertices)

    def sequence(self) -> list:
        seq = [self.vertices[0]]
        for e, v in zip(self.edges, self.vertices[1:]):
            seq.extend((e, v))
        return seq


class WalkClass(NamedTuple):
    kind: str
    strong: bool
    length: int


def _split_sequence(seq: Sequence) -> tuple[list, list] | None:
    if len(seq) % 2 == 0:
        return None
    return list(seq[0::2]), list(seq[1::2])


def classify_walk(H: Hypergraph, seq: Sequence) -> WalkClass:
    """Check the path/cycle axioms on an alternating vertex/edge sequence."""
    split = _split_sequence(seq)
    if split is None:
        return WalkClass("invalid", False, len(seq) // 2)
    vs, es = split
    length = len(es)
    invalid = WalkClass("invalid", False, length)

    if any(v not in H.index for v in vs):
        return invalid
    if any(not isinstance(e, int) or not 0 <= e < H.m for e in es):
        return invalid
    if len(set(es)) != length:
        return invalid
    for i, e in enumerate(es):
        if vs[i] not in H.edges[e] or vs[i + 1] not in H.edges[e]:
            return invalid

    if length >= 2 and vs[0] == vs[-1]:
        kind = "cycle"
        walk_vertices = vs[:-1]
    else:
        kind = "path"
        walk_vertices = vs
    if len(set(walk_vertices)) != len(walk_vertices):
        return invalid

    vertex_set = set(walk_vertices)
    strong = all(len(H.edges[e] & vertex_set) <= 2 for e in es)
    return WalkClass(kind, strong, length)
