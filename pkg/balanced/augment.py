from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from balanced.balance import is_balanced, require_balanced
from balanced.coloring import edge_coloring
from balanced.core import Hypergraph, max_degree
from balanced.errors import (
    MatchingCoversForbiddenVertex,
    NotAMatching,
    NotBalanced,
    UnknownTarget,
    UsageError,
    VerificationFailure,
)
from balanced.solve import V_WEIGHTS, Matching, WeightFn, is_matching, max_matching


@dataclass(frozen=True)
class UnionInstance:
    """
    The multiset union of one matching per vertex of ``base_edge`` plus the
    edge itself.  ``origin[j]`` is the edge of H that edge ``j`` of the union
    copies.
    """

    base_edge: int
    family: dict
    hypergraph: Hypergraph
    origin: tuple[int, ...]
    balanced: bool


def _as_matching(H: Hypergraph, edges: Iterable[int]) -> tuple[int, ...]:
    edges = tuple(sorted(edges))
    if len(set(edges)) != len(edges) or not is_matching(H, edges):
        raise NotAMatching(f"edges {list(edges)} are not pairwise disjoint edges of the hypergraph")
    return edges


def build_union(H: Hypergraph, e: int, family: Mapping) -> UnionInstance:
    if not isinstance(e, int) or not 0 <= e < H.m:
        raise UnknownTarget(f"edge index {e} out of range")
    base = H.edges[e]
    stray = set(family) - base
    if stray:
        raise UnknownTarget(f"family has matchings for vertices {sorted(stray)} outside edge {e}")

    members = sorted(base, key=H.index.__getitem__)
    normalized = {}
    origin: list[int] = []
    for v in members:
        M_v = _as_matching(H, family.get(v, ()))
        for i in M_v:
            if v in H.edges[i]:
                raise MatchingCoversForbiddenVertex(f"matching for vertex {v} covers it through edge {i}")
        normalized[v] = M_v
        origin.extend(M_v)
    origin.append(e)

    union = set().union(*(H.edges[i] for i in origin))
    vertices = tuple(v for v in H.vertices if v in union)
    H_union = Hypergraph(vertices, tuple(H.edges[i] for i in origin), True)
    if max_degree(H_union) > len(base):
        raise VerificationFailure(
            "union of the family exceeds the degree bound",
            {"max_degree": max_degree(H_union), "edge_size": len(base)},
        )
    return UnionInstance(e, normalized, H_union, tuple(origin), is_balanced(H_union).balanced)


@dataclass(frozen=True)
class AugmentResult:
    matching: Matching
    classes: list
    class_weights: list
    family_weights: dict
    min_family_weight: int
    bound: int

    def to_dict(self) -> dict:
        return {
            "matching": list(self.matching.edges),
            "weight": self.matching.weight,
            "classes": self.classes,
            "class_weights": self.class_weights,
            "family_weights": {str(v): w for v, w in self.family_weights.items()},
            "min_family_weight": self.min_family_weight,
            "bound": self.bound,
        }


def augment_step(H: Hypergraph, d: WeightFn, e: int, family: Mapping) -> AugmentResult:
    w = d.weights(H)
    if not 0 <= e < H.m:
        raise UnknownTarget(f"edge index {e} out of range")
    if w[e] < 1:
        raise UsageError(f"augmenting edge {e} needs positive weight, got {w[e]}")
    instance = build_union(H, e, family)
    if not instance.balanced:
        raise NotBalanced("union of the family is not balanced", witness=is_balanced(instance.hypergraph).witness)

    coloring = edge_coloring(instance.hypergraph)
    classes = [[instance.origin[j] for j in cls] for cls in coloring.classes]
    class_weights = [sum(w[i] for i in cls) for cls in classes]
    family_weights = {v: sum(w[i] for i in M_v) for v, M_v in instance.family.items()}
    total = w[e] + sum(family_weights.values())
    if sum(class_weights) != total:
        raise VerificationFailure("color classes do not add up to the union's weight", {"classes": class_weights, "total": total})

    best = max(range(len(classes)), key=lambda c: (class_weights[c], -c))
    chosen = classes[best]
    if len(set(chosen)) != len(chosen):
        raise VerificationFailure("color class repeats an edge", {"class": chosen})
    matching = Matching(tuple(sorted(chosen)), class_weights[best], d.label)

    min_family = min(family_weights.values())
    bound = min_family + 1
    if matching.weight < bound:
        raise VerificationFailure(
            "augmentation fell short of its bound",
            {"weight": matching.weight, "bound": bound, "class_weights": class_weights},
        )
    logging.info(f"Augmented through edge {e}: family min {min_family}, new weight {matching.weight}")
    return AugmentResult(matching, classes, class_weights, family_weights, min_family, bound)


@dataclass(frozen=True)
class AugmentStepRecord:
    edge: int
    weight_before: int
    weight_after: int
    family_weights: dict
    matching: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "edge": self.edge,
            "weight_before": self.weight_before,
            "weight_after": self.weight_after,
            "family_weights": {str(v): w for v, w in self.family_weights.items()},
            "matching": list(self.matching),
        }


@dataclass
class AugmentRun:
    matching: Matching
    solver_weight: int
    steps: list = field(default_factory=list)

    @property
    def verified_optimal(self) -> bool:
        return self.matching.weight == self.solver_weight

    @property
    def stalled(self) -> bool:
        return not self.verified_optimal

    def to_dict(self) -> dict:
        return {
            "matching": list(self.matching.edges),
            "weight": self.matching.weight,
            "solver_weight": self.solver_weight,
            "steps": len(self.steps),
            "stalled": self.stalled,
            "verified_optimal": self.verified_optimal,
        }


def _family_for(H: Hypergraph, d: WeightFn, e: int, current: Matching) -> dict | None:
    covered = current.covered(H)
    family = {}
    for v in sorted(H.edges[e], key=H.index.__getitem__):
        M_v = current if v not in covered else max_matching(H, d, avoid=[v])
        if M_v.weight < current.weight:
            return None
        family[v] = M_v.edges
    return family


def matching_via_augmentation(H: Hypergraph, d: WeightFn = V_WEIGHTS, start: Iterable[int] | None = None) -> AugmentRun:
    """
    Grow a matching by repeated augmentation.  An edge qualifies when every one
    of its vertices is missed by some matching at least as heavy as the current
    one; the loop stops when no edge qualifies.  The result is compared with the
    exact solver, never trusted on its own.
    """
    require_balanced(H, "matching_via_augmentation")
    w = d.weights(H)
    edges = _as_matching(H, start or ())
    current = Matching(edges, sum(w[i] for i in edges), d.label)
    steps: list[AugmentStepRecord] = []

    while True:
        for e in range(H.m):
            if w[e] < 1:
                continue
            family = _family_for(H, d, e, current)
            if family is None:
                continue
            result = augment_step(H, d, e, family)
            steps.append(AugmentStepRecord(e, current.weight, result.matching.weight, result.family_weights, result.matching.edges))
            current = result.matching
            break
        else:
            break

    run = AugmentRun(current, max_matching(H, d).weight, steps)
    logging.info(
        f"Augmentation finished after {len(steps)} steps: weight {current.weight}, "
        f"solver {run.solver_weight}, verified_optimal={run.verified_optimal}"
    )
    return run
