from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from balanced.core import (
    Hypergraph,
    SearchBudget,
    bits,
    check_size,
    get_limits,
    induced_sub,
    partial,
)
from balanced.errors import InstanceTooLarge, UsageError
from balanced.solve import V_WEIGHTS, WeightFn, enumerate_optima


@dataclass(frozen=True)
class StableSet:
    vertices: tuple
    weight: int

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "weight": self.weight}


def _vertex_weights(H: Hypergraph, d: Sequence[int] | None, minimum: int) -> tuple[int, ...]:
    if d is None:
        return (1,) * H.n
    d = tuple(int(x) for x in d)
    if len(d) != H.n:
        raise UsageError(f"{len(d)} vertex weights given for {H.n} vertices")
    if any(x < minimum for x in d):
        raise UsageError(f"vertex weights must be at least {minimum}")
    return d


def _stable_optima(H: Hypergraph, d: Sequence[int], collect: bool) -> tuple[int, list[int]]:
    check_size(H, "stable set search")
    budget = SearchBudget("stable set search")
    adj = H.adjacency_masks
    order = [pos for pos in range(H.n) if d[pos] > 0]
    best = -1
    found: list[int] = []

    def dfs(k: int, chosen: int, blocked: int, weight: int) -> None:
        nonlocal best, found
        budget.tick()
        optimistic = weight + sum(d[order[j]] for j in range(k, len(order)) if not blocked >> order[j] & 1)
        if optimistic < best or (not collect and found and optimistic <= best):
            return
        if k == len(order):
            if weight > best:
                best, found = weight, [chosen]
            elif weight == best and collect:
                found.append(chosen)
            return
        pos = order[k]
        if not blocked >> pos & 1:
            dfs(k + 1, chosen | 1 << pos, blocked | adj[pos], weight + d[pos])
        dfs(k + 1, chosen, blocked, weight)

    dfs(0, 0, 0, 0)
    return best, found


# A maximum-weight set of vertices no two of which share an edge.
def max_weight_stable(H: Hypergraph, d: Sequence[int] | None = None) -> StableSet:
    weights = _vertex_weights(H, d, 0)
    best, found = _stable_optima(H, weights, collect=False)
    return StableSet(H.vertices_of(found[0]), best)


def enumerate_stable_optima(H: Hypergraph, d: Sequence[int] | None = None) -> list[StableSet]:
    weights = _vertex_weights(H, d, 0)
    best, found = _stable_optima(H, weights, collect=True)
    return [StableSet(H.vertices_of(mask), best) for mask in sorted(found, key=lambda m: list(bits(m)))]


def weighted_D_set(H: Hypergraph, d: WeightFn = V_WEIGHTS) -> frozenset:
    """Vertices missed by at least one d-maximum matching."""
    always_covered = H.full_mask
    for M in enumerate_optima(H, d, "matchings"):
        mask = 0
        for i in M.edges:
            mask |= H.edge_masks[i]
        always_covered &= mask
    return frozenset(H.vertices_of(H.full_mask & ~always_covered))


def check_weighted_D(H: Hypergraph, d: WeightFn = V_WEIGHTS) -> bool:
    if any(x < 1 for x in d.weights(H)):
        raise UsageError("edge weights must be at least 1")
    D = weighted_D_set(H, d)
    return not any(e <= D for e in H.edges)


@dataclass(frozen=True)
class CharacReport:
    holds: bool
    mode: str
    checked: int
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"holds": self.holds, "mode": self.mode, "checked": self.checked, "witness": self.witness}


def _deficient_witness(sub: Hypergraph) -> dict | None:
    D = weighted_D_set(sub, V_WEIGHTS)
    for i, e in enumerate(sub.edges):
        if e <= D:
            return {
                "edge": sorted(e, key=sub.index.__getitem__),
                "D": [v for v in sub.vertices if v in D],
            }
    return None


def _canonical(sub: Hypergraph) -> tuple:
    return sub.vertices, tuple(sorted(tuple(sorted(e, key=sub.index.__getitem__)) for e in sub.edges))


def _partial_subs(H: Hypergraph):
    for size in range(1, H.m + 1):
        for F in combinations(range(H.m), size):
            base = partial(H, F)
            for k in range(1, base.n + 1):
                for W in combinations(base.vertices, k):
                    yield F, W, induced_sub(base, W)


def _sampled_subs(H: Hypergraph, samples: int, seed: int):
    if not H.m:
        return
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(samples):
        F = ()
        while not F:
            F = tuple(int(i) for i in np.flatnonzero(rng.random(H.m) < 0.5))
        base = partial(H, F)
        W = ()
        while not W:
            W = tuple(v for v, keep in zip(base.vertices, rng.random(base.n) < 0.5) if keep)
        yield F, W, induced_sub(base, W)


def check_charac_D(H: Hypergraph, sample: bool = False, seed: int = 0, samples: int | None = None) -> CharacReport:
    """
    Look for a partial subhypergraph with an edge inside its deficient set.

    Exhaustive mode walks every (F, W) with W inside V(F), skipping repeats of
    the same labeled subhypergraph, and stops at the first witness.  Sampled
    mode can only refute; a sampled ``holds`` means no witness was drawn.
    """
    limits = get_limits()
    too_big = H.m > limits.charac_max_edges or H.n > limits.charac_max_vertices
    if too_big and not sample:
        raise InstanceTooLarge(
            f"partial subhypergraph enumeration is capped at m<={limits.charac_max_edges}, "
            f"n<={limits.charac_max_vertices}; got m={H.m}, n={H.n}"
        )
    mode = "sampled" if sample else "exhaustive"
    source = _sampled_subs(H, samples or limits.charac_samples, seed) if sample else _partial_subs(H)

    seen = set()
    checked = 0
    for F, W, sub in source:
        key = _canonical(sub)
        if key in seen:
            continue
        seen.add(key)
        checked += 1
        found = _deficient_witness(sub)
        if found:
            witness = {"F": list(F), "W": list(W), **found}
            logging.info(f"Deficient-set witness after {checked} partial subhypergraphs: {witness}")
            return CharacReport(False, mode, checked, witness)
    logging.info(f"No deficient-set witness among {checked} partial subhypergraphs ({mode})")
    return CharacReport(True, mode, checked)


@dataclass(frozen=True)
class StableCharacReport:
    holds: bool
    failing_vertex: object = None
    optima: int = 0

    def to_dict(self) -> dict:
        return {"holds": self.holds, "failing_vertex": self.failing_vertex, "optima": self.optima}


# Every vertex lies in an edge that every maximum-weight stable set meets.
def check_charac_stable(H: Hypergraph, d: Sequence[int] | None = None) -> StableCharacReport:
    weights = _vertex_weights(H, d, 1)
    best, found = _stable_optima(H, weights, collect=True)
    hit_by_all = [all(mask & S for S in found) for mask in H.edge_masks]
    for pos, v in enumerate(H.vertices):
        if not any(hit_by_all[i] for i, mask in enumerate(H.edge_masks) if mask >> pos & 1):
            return StableCharacReport(False, v, len(found))
    return StableCharacReport(True, None, len(found))
