"""Seeded instance generators.

Every generator draws from numpy's PCG64 bit generator, so one seed gives the
same instance on every platform.  Outputs are relabeled to 1..n and checked
with the strong odd cycle search before they are returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from utils.helper import retry

from balanced.balance import find_strong_odd_cycle, is_balanced, require_balanced
from balanced.core import (
    DeleteMode,
    Hypergraph,
    build,
    covered_vertices,
    delete,
    dual,
    induced_sub,
    partial,
    relabel,
)
from balanced.errors import (
    EmptyEdgeSet,
    EmptyVertexSet,
    GenerationFailed,
    ResultEmpty,
    UncoveredVertex,
    UsageError,
    VerificationFailure,
)

CLOSURE_OPS = ("induced", "partial", "strong-vertex", "weak-vertex", "edge", "dual")
FAMILIES = ("interval", "bipartite", "closure", "planted")


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _compact(H: Hypergraph) -> Hypergraph:
    """Drop uncovered vertices and relabel to 1..n."""
    covered = covered_vertices(H)
    if len(covered) != H.n:
        H = induced_sub(H, covered)
    return relabel(H)


def _require_generated_balanced(H: Hypergraph, family: str) -> Hypergraph:
    if not is_balanced(H).balanced:
        raise GenerationFailed(f"{family} generator produced an unbalanced instance: {H}")
    return H


def gen_interval(n: int, m: int, max_len: int, seed: int) -> Hypergraph:
    if n < 1 or m < 1 or max_len < 1:
        raise UsageError("interval generator needs n, m and max_len >= 1")
    rng = make_rng(seed)
    longest = min(max_len, n)
    edges = []
    for _ in range(m):
        length = int(rng.integers(1, longest + 1))
        start = int(rng.integers(1, n - length + 2))
        edges.append(range(start, start + length))
    H = _compact(build(range(1, n + 1), edges, strict_cover=False))
    logging.debug(f"Interval instance (seed={seed}): {H}")
    return _require_generated_balanced(H, "interval")


def gen_bipartite(n1: int, n2: int, p: float, seed: int) -> Hypergraph:
    if n1 < 1 or n2 < 1 or not 0.0 <= p <= 1.0:
        raise UsageError("bipartite generator needs n1, n2 >= 1 and p in [0, 1]")
    rng = make_rng(seed)
    left = range(1, n1 + 1)
    right = range(n1 + 1, n1 + n2 + 1)
    edges = [(u, w) for u in left for w in right if rng.random() < p]
    if not edges:
        edges.append((int(rng.integers(1, n1 + 1)), int(rng.integers(n1 + 1, n1 + n2 + 1))))
    H = _compact(build(range(1, n1 + n2 + 1), edges, strict_cover=False))
    logging.debug(f"Bipartite instance (seed={seed}): {H}")
    return _require_generated_balanced(H, "bipartite")


def _random_subset(rng: np.random.Generator, items: tuple, keep: float = 0.7) -> tuple:
    return tuple(x for x, draw in zip(items, rng.random(len(items))) if draw < keep)


def _apply_op(H: Hypergraph, op: str, rng: np.random.Generator) -> Hypergraph:
    if op == "induced":
        return induced_sub(H, _random_subset(rng, H.vertices))
    if op == "partial":
        return partial(H, _random_subset(rng, tuple(range(H.m))))
    if op == "dual":
        return dual(H)
    if op == "edge":
        return delete(H, DeleteMode.EDGE, int(rng.integers(0, H.m)))
    return delete(H, DeleteMode(op), H.vertices[int(rng.integers(0, H.n))])


def gen_closure(base: Hypergraph, ops_count: int, seed: int, allowed: tuple[str, ...] = CLOSURE_OPS) -> Hypergraph:
    """
    Apply ``ops_count`` random heredity-preserving operations to a balanced base.
    Draws that empty the instance are redrawn a bounded number of times.
    """
    require_balanced(base, "gen_closure")
    unknown = set(allowed) - set(CLOSURE_OPS)
    if unknown or not allowed:
        raise UsageError(f"closure operations must come from {CLOSURE_OPS}")
    rng = make_rng(seed)

    @retry(max_retries=25, exceptions=(ResultEmpty, UncoveredVertex, EmptyVertexSet, EmptyEdgeSet), give_up=GenerationFailed)
    def step(H: Hypergraph) -> tuple[str, Hypergraph]:
        op = allowed[int(rng.integers(0, len(allowed)))]
        result = _apply_op(H, op, rng)
        if not result.m:
            raise ResultEmpty(f"{op} left no edges")
        return op, result

    H = base
    for _ in range(ops_count):
        op, H = step(H)
        H = _compact(H)
        if not is_balanced(H).balanced:
            raise VerificationFailure(f"closure operation {op} produced an unbalanced instance", {"instance": repr(H)})
    H = relabel(H)
    logging.debug(f"Closure instance (seed={seed}, ops={ops_count}): {H}")
    return H


def gen_planted(n: int, seed: int) -> Hypergraph:
    """An interval instance on 1..n with one odd cycle of 2-edges spliced in."""
    if n < 3:
        raise UsageError("planted generator needs n >= 3")
    rng = make_rng(seed)
    length = 3 + 2 * int(rng.integers(0, (n - 3) // 2 + 1))
    cycle = [int(v) + 1 for v in rng.permutation(n)[:length]]
    edges = [(cycle[i], cycle[(i + 1) % length]) for i in range(length)]
    for _ in range(int(rng.integers(0, n + 1))):
        span = int(rng.integers(1, min(3, n) + 1))
        start = int(rng.integers(1, n - span + 2))
        edges.append(range(start, start + span))
    H = _compact(build(range(1, n + 1), edges, strict_cover=False))
    witness = find_strong_odd_cycle(H)
    if witness is None:
        raise GenerationFailed(f"planted instance came out balanced: {H}")
    logging.debug(f"Planted instance (seed={seed}) with witness of length {witness.length}: {H}")
    return H


@dataclass(frozen=True)
class GenSpec:
    family: str
    seed: int = 0
    n: int = 6
    m: int = 6
    max_len: int = 3
    n1: int = 3
    n2: int = 3
    p: float = 0.5
    ops: int = 3


def generate(spec: GenSpec) -> Hypergraph:
    if spec.family == "interval":
        return gen_interval(spec.n, spec.m, spec.max_len, spec.seed)
    if spec.family == "bipartite":
        return gen_bipartite(spec.n1, spec.n2, spec.p, spec.seed)
    if spec.family == "closure":
        base_seed, ops_seed = np.random.SeedSequence(spec.seed).generate_state(2)
        base = gen_interval(spec.n, spec.m, spec.max_len, int(base_seed))
        return gen_closure(base, spec.ops, int(ops_seed))
    if spec.family == "planted":
        return gen_planted(spec.n, spec.seed)
    raise UsageError(f"unknown family {spec.family!r}, expected one of {FAMILIES}")
