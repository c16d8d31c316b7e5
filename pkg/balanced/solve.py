"""Exact weighted matching and vertex cover solvers, plus the duality verifiers.

Both solvers are branch-and-bound over bitsets.  Optima are canonical: the
lexicographically smallest edge-index tuple among maximum matchings, the
lexicographically smallest vector among minimum covers.  Zero-weight edges
never enter a matching and put no constraint on a cover.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from balanced.balance import is_balanced, require_balanced
from balanced.coloring import edge_coloring
from balanced.core import (
    Hypergraph,
    SearchBudget,
    check_size,
    max_degree,
    weak_delete,
)
from balanced.errors import ResultEmpty, UnknownTarget, UsageError


class WeightKind(str, Enum):
    E = "E"
    V = "V"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WeightFn:
    kind: WeightKind
    values: tuple[int, ...] | None = None

    @classmethod
    def e_weights(cls) -> "WeightFn":
        return cls(WeightKind.E)

    @classmethod
    def v_weights(cls) -> "WeightFn":
        return cls(WeightKind.V)

    @classmethod
    def custom(cls, values: Sequence[int]) -> "WeightFn":
        values = tuple(int(x) for x in values)
        if any(x < 0 for x in values):
            raise UsageError("edge weights must be nonnegative")
        return cls(WeightKind.CUSTOM, values)

    @classmethod
    def from_name(cls, name: str, values: Sequence[int] | None = None) -> "WeightFn":
        kind = WeightKind(name)
        if kind is WeightKind.CUSTOM:
            if values is None:
                raise UsageError("custom weights need a w= field on every edge")
            return cls.custom(values)
        return cls(kind)

    def weights(self, H: Hypergraph) -> tuple[int, ...]:
        # presets are recomputed from H every time
        if self.kind is WeightKind.E:
            return (1,) * H.m
        if self.kind is WeightKind.V:
            return tuple(len(e) for e in H.edges)
        if len(self.values) != H.m:
            raise UsageError(f"weight function has {len(self.values)} values for {H.m} edges")
        return self.values

    @property
    def label(self) -> str:
        return self.kind.value


E_WEIGHTS = WeightFn.e_weights()
V_WEIGHTS = WeightFn.v_weights()


@dataclass(frozen=True)
class Matching:
    edges: tuple[int, ...]
    weight: int
    weight_kind: str

    def covered(self, H: Hypergraph) -> frozenset:
        return frozenset().union(*(H.edges[i] for i in self.edges)) if self.edges else frozenset()

    def to_dict(self) -> dict:
        return {"edges": list(self.edges), "weight": self.weight, "weight_kind": self.weight_kind}


@dataclass(frozen=True)
class CoverVector:
    vertices: tuple
    values: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.values)

    def __getitem__(self, v) -> int:
        return self.values[self.vertices.index(v)]

    def to_dict(self) -> dict:
        return {"values": list(self.values), "weight": self.weight}


def is_matching(H: Hypergraph, edges: Iterable[int]) -> bool:
    used = 0
    for i in edges:
        if not 0 <= i < H.m:
            return False
        mask = H.edge_masks[i]
        if mask & used:
            return False
        used |= mask
    return True


def is_cover(H: Hypergraph, d: WeightFn, values: Sequence[int]) -> bool:
    w = d.weights(H)
    return all(
        sum(values[H.index[v]] for v in e) >= w[i]
        for i, e in enumerate(H.edges)
    )


def _avoid_mask(H: Hypergraph, avoid: Iterable | None) -> int:
    if not avoid:
        return 0
    mask = 0
    for v in avoid:
        if v not in H.index:
            raise UnknownTarget(f"vertex {v} is not in the hypergraph")
        mask |= 1 << H.index[v]
    return mask


def _search_matchings(H: Hypergraph, w: Sequence[int], avoid_mask: int, collect: bool):
    check_size(H, "matching search")
    budget = SearchBudget("matching search")
    masks = H.edge_masks
    order = [i for i in range(H.m) if w[i] > 0 and not masks[i] & avoid_mask]
    best = -1
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def bound(k: int, used: int) -> int:
        return sum(w[order[j]] for j in range(k, len(order)) if not masks[order[j]] & used)

    def dfs(k: int, used: int, weight: int) -> None:
        nonlocal best, found
        budget.tick()
        optimistic = weight + bound(k, used)
        if optimistic < best or (not collect and found and optimistic <= best):
            return
        if k == len(order):
            if weight > best:
                best, found = weight, [tuple(chosen)]
            elif weight == best and collect:
                found.append(tuple(chosen))
            return
        i = order[k]
        if not masks[i] & used:
            chosen.append(i)
            dfs(k + 1, used | masks[i], weight + w[i])
            chosen.pop()
        dfs(k + 1, used, weight)

    dfs(0, 0, 0)
    logging.debug(f"Matching search: best={best}, optima={len(found)}, states={budget.states}")
    return best, sorted(found)


def max_matching(H: Hypergraph, d: WeightFn = V_WEIGHTS, avoid: Iterable | None = None) -> Matching:
    """A d-maximum matching; with ``avoid``, the best one missing those vertices."""
    w = d.weights(H)
    best, found = _search_matchings(H, w, _avoid_mask(H, avoid), collect=False)
    return Matching(found[0], best, d.label)


def matching_number(H: Hypergraph, d: WeightFn = V_WEIGHTS, avoid: Iterable | None = None) -> int:
    return max_matching(H, d, avoid).weight


def _search_covers(H: Hypergraph, w: Sequence[int], collect: bool):
    check_size(H, "cover search")
    budget = SearchBudget("cover search")
    n = H.n
    masks = H.edge_masks
    live = [i for i in range(H.m) if w[i] > 0]
    # no optimum puts more on v than the heaviest edge through v needs
    caps = [max((w[i] for i in live if masks[i] >> pos & 1), default=0) for pos in range(n)]
    last = {i: masks[i].bit_length() - 1 for i in live}
    closing = [[i for i in live if last[i] == pos] for pos in range(n)]
    member = [[i for i in live if masks[i] >> pos & 1] for pos in range(n)]
    sums = {i: 0 for i in live}
    x = [0] * n
    best = None
    found: list[tuple[int, ...]] = []

    def lower_bound(pos: int) -> int | None:
        # pack pairwise disjoint deficits over the unassigned vertices
        rest = ~((1 << pos) - 1)
        deficits = []
        for i in live:
            need = w[i] - sums[i]
            if need > 0:
                tail = masks[i] & rest
                if not tail:
                    return None
                deficits.append((need, tail))
        deficits.sort(key=lambda item: -item[0])
        taken, total = 0, 0
        for need, tail in deficits:
            if not tail & taken:
                taken |= tail
                total += need
        return total

    def dfs(pos: int, total: int) -> None:
        nonlocal best, found
        budget.tick()
        lb = lower_bound(pos)
        if lb is None:
            return
        if best is not None and (total + lb > best or (not collect and total + lb >= best)):
            return
        if pos == n:
            if best is None or total < best:
                best, found = total, [tuple(x)]
            elif total == best and collect:
                found.append(tuple(x))
            return
        for value in range(caps[pos] + 1):
            x[pos] = value
            for i in member[pos]:
                sums[i] += value
            if all(sums[i] >= w[i] for i in closing[pos]):
                dfs(pos + 1, total + value)
            for i in member[pos]:
                sums[i] -= value
        x[pos] = 0

    dfs(0, 0)
    logging.debug(f"Cover search: best={best}, optima={len(found)}, states={budget.states}")
    return best, sorted(found)


def min_vertex_cover(H: Hypergraph, d: WeightFn = V_WEIGHTS) -> CoverVector:
    best, found = _search_covers(H, d.weights(H), collect=False)
    return CoverVector(H.vertices, found[0])


def cover_number(H: Hypergraph, d: WeightFn = V_WEIGHTS) -> int:
    return min_vertex_cover(H, d).weight


def enumerate_optima(H: Hypergraph, d: WeightFn, which: str, avoid: Iterable | None = None) -> list:
    """Every d-maximum matching or every minimum integer d-vertex cover, canonically ordered."""
    w = d.weights(H)
    if which == "matchings":
        best, found = _search_matchings(H, w, _avoid_mask(H, avoid), collect=True)
        return [Matching(edges, best, d.label) for edges in found]
    if which == "covers":
        _, found = _search_covers(H, w, collect=True)
        return [CoverVector(H.vertices, values) for values in found]
    raise UsageError(f"unknown optimum kind {which!r}, expected 'matchings' or 'covers'")


@dataclass(frozen=True)
class KonigReport:
    gamma: int
    tau: int
    balanced: bool
    matching: Matching
    cover: CoverVector

    @property
    def equal(self) -> bool:
        return self.gamma == self.tau

    @property
    def violates_theorem(self) -> bool:
        return self.balanced and not self.equal

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "tau": self.tau,
            "equal": self.equal,
            "balanced": self.balanced,
            "matching": list(self.matching.edges),
            "cover": list(self.cover.values),
        }


def verify_konig(H: Hypergraph, d: WeightFn = V_WEIGHTS) -> KonigReport:
    matching = max_matching(H, d)
    cover = min_vertex_cover(H, d)
    report = KonigReport(matching.weight, cover.weight, is_balanced(H).balanced, matching, cover)
    logging.info(f"Konig check ({d.label}-weights): gamma={report.gamma}, tau={report.tau}, balanced={report.balanced}")
    return report


@dataclass(frozen=True)
class DegreeBoundReport:
    q: int
    slack: int
    max_degree: int
    hypothesis_holds: bool
    bound: int
    gamma_V: int
    balanced: bool
    best_class: tuple[int, ...] = ()
    best_class_covers: int = 0

    @property
    def conclusion_holds(self) -> bool:
        return self.gamma_V >= self.bound

    @property
    def violates_theorem(self) -> bool:
        return self.balanced and self.hypothesis_holds and not self.conclusion_holds

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "slack": self.slack,
            "max_degree": self.max_degree,
            "hypothesis_holds": self.hypothesis_holds,
            "bound": self.bound,
            "gamma_V": self.gamma_V,
            "conclusion_holds": self.conclusion_holds,
            "balanced": self.balanced,
            "best_class": list(self.best_class),
            "best_class_covers": self.best_class_covers,
        }


def degree_bound(H: Hypergraph, q: int) -> DegreeBoundReport:
    if q < 1:
        raise UsageError("q must be at least 1")
    delta = max_degree(H)
    slack = sum(delta - deg for deg in H.degrees)
    holds = slack <= q * delta - 1
    balanced = is_balanced(H).balanced
    best_class, covers = (), 0
    if balanced and H.m:
        for cls in edge_coloring(H).classes:
            size = sum(len(H.edges[i]) for i in cls)
            if size > covers:
                best_class, covers = tuple(cls), size
    return DegreeBoundReport(q, slack, delta, holds, H.n - q + 1, matching_number(H, V_WEIGHTS), balanced, best_class, covers)


def check_matcheq(H: Hypergraph) -> bool:
    """Every minimum V-cover puts exactly |m| on each edge m of a maximum matching."""
    require_balanced(H, "check_matcheq")
    M = max_matching(H, V_WEIGHTS)
    covers = enumerate_optima(H, V_WEIGHTS, "covers")
    return all(
        sum(x[v] for v in H.edges[i]) == len(H.edges[i])
        for x in covers
        for i in M.edges
    )


@dataclass(frozen=True)
class Vc1Report:
    vertex: object
    gamma: int
    gamma_deleted: int
    drop_by_one: bool
    exists_cover_with_xv_1: bool

    @property
    def iff_holds(self) -> bool:
        return self.drop_by_one == self.exists_cover_with_xv_1

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "gamma": self.gamma,
            "gamma_deleted": self.gamma_deleted,
            "drop_by_one": self.drop_by_one,
            "exists_cover_with_xv_1": self.exists_cover_with_xv_1,
            "iff_holds": self.iff_holds,
        }


def check_vc1(H: Hypergraph, v) -> Vc1Report:
    require_balanced(H, "check_vc1")
    if v not in H.index:
        raise UnknownTarget(f"vertex {v} is not in the hypergraph")
    deleted = weak_delete(H, v)
    gamma = matching_number(H, V_WEIGHTS)
    gamma_deleted = matching_number(deleted, V_WEIGHTS)
    covers = enumerate_optima(H, V_WEIGHTS, "covers")
    return Vc1Report(v, gamma, gamma_deleted, gamma_deleted == gamma - 1, any(x[v] == 1 for x in covers))


def gamma_after_weak_delete(H: Hypergraph, v, d: WeightFn = V_WEIGHTS) -> int:
    """Matching number of H \\ v, 0 when nothing survives the deletion."""
    try:
        return matching_number(weak_delete(H, v), d)
    except ResultEmpty:
        return 0
