from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from balanced.balance import require_balanced
from balanced.core import Hypergraph, SearchBudget, bits, check_size, max_degree
from balanced.errors import SearchExhausted


@dataclass(frozen=True)
class VertexBicoloring:
    vertices: tuple
    colors: tuple[int, ...]

    def __getitem__(self, v) -> int:
        return self.colors[self.vertices.index(v)]

    def to_dict(self) -> dict:
        return {"colors": {str(v): c for v, c in zip(self.vertices, self.colors)}}


@dataclass(frozen=True)
class EdgeColoring:
    colors: tuple[int, ...]
    k: int

    @property
    def classes(self) -> list[list[int]]:
        return [[i for i, c in enumerate(self.colors) if c == color] for color in range(1, self.k + 1)]

    def to_dict(self) -> dict:
        return {"k": self.k, "classes": self.classes}


def is_proper_bicoloring(H: Hypergraph, colors: Sequence[int]) -> bool:
    for e in H.edges:
        if len(e) >= 2 and len({colors[H.index[v]] for v in e}) < 2:
            return False
    return True


def vertex_2color(H: Hypergraph) -> VertexBicoloring:
    """Two colors such that every edge with at least two vertices sees both."""
    require_balanced(H, "vertex_2color")
    check_size(H, "vertex 2-coloring")
    budget = SearchBudget("vertex 2-coloring")
    closing: list[list[int]] = [[] for _ in range(H.n)]
    for mask in H.edge_masks:
        if mask & (mask - 1):
            closing[mask.bit_length() - 1].append(mask)
    ones = 0

    def dfs(pos: int) -> bool:
        nonlocal ones
        budget.tick()
        if pos == H.n:
            return True
        for color in (0, 1):
            if color:
                ones |= 1 << pos
            # an edge is settled once its last vertex is colored
            if all(mask & ones and mask & ~ones for mask in closing[pos]) and dfs(pos + 1):
                return True
            ones &= ~(1 << pos)
        return False

    if not dfs(0):
        raise SearchExhausted("no proper 2-coloring found for a balanced hypergraph")
    colors = tuple(ones >> pos & 1 for pos in range(H.n))
    logging.debug(f"2-coloring found after {budget.states} states")
    return VertexBicoloring(H.vertices, colors)


def _bisect(masks: Sequence[int], ids: Sequence[int], budget: SearchBudget) -> tuple[list[int], list[int]]:
    remaining: dict[int, int] = {}
    for i in ids:
        for pos in bits(masks[i]):
            remaining[pos] = remaining.get(pos, 0) + 1
    balance = {pos: 0 for pos in remaining}
    labels: list[int] = []

    def dfs(k: int) -> bool:
        budget.tick()
        if k == len(ids):
            return True
        members = list(bits(masks[ids[k]]))
        for pos in members:
            remaining[pos] -= 1
        for side in (1, -1):
            for pos in members:
                balance[pos] += side
            if all(abs(balance[pos]) <= remaining[pos] + 1 for pos in members):
                labels.append(side)
                if dfs(k + 1):
                    return True
                labels.pop()
            for pos in members:
                balance[pos] -= side
        for pos in members:
            remaining[pos] += 1
        return False

    if not dfs(0):
        raise SearchExhausted("no equitable bisection found for a balanced hypergraph")
    first = [i for i, side in zip(ids, labels) if side == 1]
    second = [i for i, side in zip(ids, labels) if side == -1]
    return first, second


def equitable_bisect(H: Hypergraph) -> tuple[list[int], list[int]]:
    """
    Split the edge multiset in two so that every vertex's degrees in the halves
    differ by at most one.  Edges are labeled in index order, first half first.
    """
    require_balanced(H, "equitable_bisect")
    check_size(H, "equitable bisection")
    return _bisect(H.edge_masks, list(range(H.m)), SearchBudget("equitable bisection"))


def _degrees(masks: Sequence[int], ids: Sequence[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for i in ids:
        for pos in bits(masks[i]):
            counts[pos] = counts.get(pos, 0) + 1
    return counts


# A matching among ids whose union contains every bit of must.
def _peel(masks: Sequence[int], ids: Sequence[int], must: int, budget: SearchBudget) -> list[int]:
    chosen: list[int] = []

    def dfs(used: int) -> bool:
        budget.tick()
        open_bits = must & ~used
        if not open_bits:
            return True
        low = open_bits & -open_bits
        for i in ids:
            if masks[i] & low and not masks[i] & used:
                chosen.append(i)
                if dfs(used | masks[i]):
                    return True
                chosen.pop()
        return False

    if not dfs(0):
        raise SearchExhausted("no matching covers every maximum-degree vertex")
    return chosen


def _color(masks: Sequence[int], ids: list[int], budget: SearchBudget) -> list[list[int]]:
    if not ids:
        return []
    degrees = _degrees(masks, ids)
    k = max(degrees.values())
    if k <= 1:
        return [sorted(ids)]
    if k % 2 == 0:
        first, second = _bisect(masks, ids, budget)
        return _color(masks, first, budget) + _color(masks, second, budget)
    must = 0
    for pos, deg in degrees.items():
        if deg == k:
            must |= 1 << pos
    peeled = _peel(masks, ids, must, budget)
    taken = set(peeled)
    rest = [i for i in ids if i not in taken]
    return [sorted(peeled)] + _color(masks, rest, budget)


# Color the edges with at most Delta(H) colors so that intersecting edges differ.
def edge_coloring(H: Hypergraph) -> EdgeColoring:
    require_balanced(H, "edge_coloring")
    check_size(H, "edge coloring")
    budget = SearchBudget("edge coloring")
    classes = sorted(_color(H.edge_masks, list(range(H.m)), budget), key=min)
    colors = [0] * H.m
    for color, cls in enumerate(classes, start=1):
        for i in cls:
            colors[i] = color
    coloring = EdgeColoring(tuple(colors), len(classes))
    if not verify_edge_coloring(H, coloring):
        raise SearchExhausted(f"edge coloring with {coloring.k} colors failed verification")
    logging.info(f"Edge coloring with k={coloring.k} (Delta={max_degree(H)}) after {budget.states} states")
    return coloring


def verify_edge_coloring(H: Hypergraph, coloring: EdgeColoring) -> bool:
    if len(coloring.colors) != H.m or coloring.k > max_degree(H):
        return False
    if any(not 1 <= c <= coloring.k for c in coloring.colors):
        return False
    masks = H.edge_masks
    for i in range(H.m):
        for j in range(i + 1, H.m):
            if masks[i] & masks[j] and coloring.colors[i] == coloring.colors[j]:
                return False
    return True
