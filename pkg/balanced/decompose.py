"""Vertex decompositions driven by maximum matchings and minimum covers.

``dpm`` splits V by V-weights (D, P, M), ``fqn`` by E-weights (F, Q, N) and
``classic_dac`` is the graph-style D/A/C split lifted to hypergraphs.  The
verifiers check every numbered property of the two weighted decompositions,
including how they move when a single vertex is removed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from balanced.balance import require_balanced
from balanced.core import Hypergraph, bits, check_size, is_bipartite_graph, weak_delete
from balanced.errors import ResultEmpty, VerificationFailure
from balanced.solve import E_WEIGHTS, V_WEIGHTS, WeightFn, enumerate_optima


class DecompositionKind(str, Enum):
    DPM = "DPM"
    FQN = "FQN"
    CLASSIC_DAC = "classicDAC"


PART_NAMES = {
    DecompositionKind.DPM: ("D", "P", "M"),
    DecompositionKind.FQN: ("F", "Q", "N"),
    DecompositionKind.CLASSIC_DAC: ("D", "A", "C"),
}


@dataclass(frozen=True)
class Decomposition:
    kind: DecompositionKind
    vertices: tuple
    parts: tuple[frozenset, frozenset, frozenset]
    details: dict = field(default_factory=dict, compare=False)

    @property
    def names(self) -> tuple[str, str, str]:
        return PART_NAMES[self.kind]

    def __getitem__(self, name: str) -> frozenset:
        return self.parts[self.names.index(name)]

    def ordered(self, name: str) -> list:
        return self.ordered_subset(self[name])

    def ordered_subset(self, part) -> list:
        return [v for v in self.vertices if v in part]

    def to_dict(self) -> dict:
        out = {name: self.ordered(name) for name in self.names}
        out["tag"] = self.kind.value
        return out


def _bare_weak_delete(H: Hypergraph, v) -> Hypergraph:
    """H \\ v, or the edgeless hypergraph on V - {v} when nothing survives."""
    try:
        return weak_delete(H, v)
    except ResultEmpty:
        return Hypergraph(tuple(u for u in H.vertices if u != v), (), False)


def _split(H: Hypergraph, d: WeightFn) -> dict:
    matchings = enumerate_optima(H, d, "matchings")
    covers = enumerate_optima(H, d, "covers")

    always_covered = H.full_mask
    for M in matchings:
        mask = 0
        for i in M.edges:
            mask |= H.edge_masks[i]
        always_covered &= mask
    missed = H.full_mask & ~always_covered

    zero = always_two = always_one = H.full_mask
    for x in covers:
        for pos, value in enumerate(x.values):
            bit = 1 << pos
            if value != 0:
                zero &= ~bit
            if value < 2:
                always_two &= ~bit
            if value != 1:
                always_one &= ~bit

    if missed != zero:
        raise VerificationFailure(
            "matching-based and cover-based definitions of the deficient set disagree",
            {"by_matchings": list(H.vertices_of(missed)), "by_covers": list(H.vertices_of(zero))},
        )
    return {
        "missed": missed,
        "always_two": always_two,
        "always_one": always_one,
        "gamma": matchings[0].weight,
        "tau": covers[0].weight,
        "matchings": matchings,
        "covers": covers,
    }


def _decomposition(H: Hypergraph, kind: DecompositionKind, first: int, second: int, details: dict) -> Decomposition:
    rest = H.full_mask & ~first & ~second
    parts = tuple(frozenset(H.vertices_of(mask)) for mask in (first, second, rest))
    return Decomposition(kind, H.vertices, parts, details)


def _details(split: dict) -> dict:
    return {
        "gamma": split["gamma"],
        "tau": split["tau"],
        "optimal_matchings": len(split["matchings"]),
        "optimal_covers": len(split["covers"]),
    }


def dpm(H: Hypergraph) -> Decomposition:
    require_balanced(H, "dpm")
    check_size(H, "dpm")
    split = _split(H, V_WEIGHTS)
    dec = _decomposition(H, DecompositionKind.DPM, split["missed"], split["always_two"] & ~split["missed"], _details(split))
    logging.info(f"DPM decomposition: {dec.to_dict()}")
    return dec


def fqn(H: Hypergraph) -> Decomposition:
    require_balanced(H, "fqn")
    check_size(H, "fqn")
    split = _split(H, E_WEIGHTS)
    dec = _decomposition(H, DecompositionKind.FQN, split["missed"], split["always_one"] & ~split["missed"], _details(split))
    logging.info(f"FQN decomposition: {dec.to_dict()}")
    return dec


def classic_dac(H: Hypergraph) -> Decomposition:
    """D from V-maximum matchings; A are the neighbors of D outside D."""
    check_size(H, "classic_dac")
    matchings = enumerate_optima(H, V_WEIGHTS, "matchings")
    always_covered = H.full_mask
    for M in matchings:
        mask = 0
        for i in M.edges:
            mask |= H.edge_masks[i]
        always_covered &= mask
    D = H.full_mask & ~always_covered
    neighbors = 0
    for pos in bits(D):
        neighbors |= H.adjacency_masks[pos]
    A = neighbors & ~D
    return _decomposition(H, DecompositionKind.CLASSIC_DAC, D, A, {"gamma": matchings[0].weight})


def is_factor_critical(H: Hypergraph) -> bool:
    check_size(H, "is_factor_critical")
    for v in H.vertices:
        reduced = _bare_weak_delete(H, v)
        if enumerate_optima(reduced, V_WEIGHTS, "matchings")[0].weight != reduced.n:
            return False
    return True


@dataclass(frozen=True)
class ItemResult:
    name: str
    passed: bool
    vacuous: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "vacuous": self.vacuous, "details": self.details}


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    decomposition: Decomposition
    items: tuple[ItemResult, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def failed_items(self) -> list[str]:
        return [item.name for item in self.items if not item.passed]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "sets": self.decomposition.to_dict(),
            "items": {item.name: item.to_dict() for item in self.items},
            "passed": self.passed,
        }


def _gamma_item(name: str, vertices: list, gamma: int, deleted: dict, relation, label: str) -> ItemResult:
    bad = {str(v): deleted[v] for v in vertices if not relation(deleted[v], gamma)}
    return ItemResult(name, not bad, not vertices, {"relation": label, "gamma": gamma, "violations": bad} if bad else {"relation": label})


def _no_edge_inside(H: Hypergraph, part: frozenset, name: str) -> ItemResult:
    inside = [i for i, e in enumerate(H.edges) if e <= part]
    return ItemResult(name, not inside, not part, {"edges_inside": inside} if inside else {})


def _inclusions(name: str, checks: Callable[[object], dict], vertices: list) -> ItemResult:
    violations = {}
    for v in vertices:
        for label, (left, right) in checks(v).items():
            if not left <= right:
                violations.setdefault(str(v), []).append(label)
    return ItemResult(name, not violations, not vertices, {"violations": violations} if violations else {})


def verify_galed2(H: Hypergraph) -> TheoremReport:
    """Check the seven properties of the DPM decomposition."""
    require_balanced(H, "verify_galed2")
    dec = dpm(H)
    D, P, M = dec["D"], dec["P"], dec["M"]
    gamma = dec.details["gamma"]
    reduced = {v: _bare_weak_delete(H, v) for v in H.vertices}
    gamma_deleted = {v: enumerate_optima(reduced[v], V_WEIGHTS, "matchings")[0].weight for v in H.vertices}
    ordered = dec.ordered_subset

    items = [
        _gamma_item("1", ordered(D), gamma, gamma_deleted, lambda g, base: g == base, "gamma(H-v) == gamma(H)"),
        _gamma_item("2", ordered(P), gamma, gamma_deleted, lambda g, base: g >= base, "gamma(H-v) >= gamma(H)"),
        _gamma_item("3", ordered(M), gamma, gamma_deleted, lambda g, base: g == base - 1, "gamma(H-v) == gamma(H) - 1"),
        _no_edge_inside(H, D, "4"),
    ]

    bad_edges = []
    for matching in enumerate_optima(H, V_WEIGHTS, "matchings"):
        for i in matching.edges:
            e = H.edges[i]
            need = 2 * len(e & P) + (1 if e & M else 0)
            if len(e) < need:
                bad_edges.append(i)
    items.append(ItemResult("5", not bad_edges, False, {"edges": sorted(set(bad_edges))} if bad_edges else {}))

    sub = {v: dpm(reduced[v]) for v in ordered(D | M)}

    def after_deficient(v):
        s = sub[v]
        Dv = D - {v}
        return {
            "M <= M'": (M, s["M"]),
            "M' <= D-v | P | M": (s["M"], Dv | P | M),
            "P <= M' | P'": (P, s["M"] | s["P"]),
            "P' <= D-v | P": (s["P"], Dv | P),
            "D-v <= M' | P' | D'": (Dv, s["M"] | s["P"] | s["D"]),
            "D' <= D-v": (s["D"], Dv),
        }

    def after_matched(v):
        s = sub[v]
        Mv = M - {v}
        return {
            "M-v <= M' | P' | D'": (Mv, s["M"] | s["P"] | s["D"]),
            "M' <= M-v": (s["M"], Mv),
            "P <= P'": (P, s["P"]),
            "P' <= M-v | P": (s["P"], Mv | P),
            "D <= D'": (D, s["D"]),
            "D' <= M-v | D": (s["D"], Mv | D),
        }

    items.append(_inclusions("6", after_deficient, ordered(D)))
    items.append(_inclusions("7", after_matched, ordered(M)))
    report = TheoremReport("galed2", dec, tuple(items))
    logging.info(f"DPM properties on n={H.n}, m={H.m}: passed={report.passed}, failed={report.failed_items}")
    return report


def verify_galed1(H: Hypergraph) -> TheoremReport:
    """Check the seven properties of the FQN decomposition."""
    require_balanced(H, "verify_galed1")
    dec = fqn(H)
    F, Q, N = dec["F"], dec["Q"], dec["N"]
    gamma = dec.details["gamma"]
    reduced = {v: _bare_weak_delete(H, v) for v in H.vertices}
    gamma_deleted = {v: enumerate_optima(reduced[v], E_WEIGHTS, "matchings")[0].weight for v in H.vertices}
    ordered = dec.ordered_subset
    in_singleton = {next(iter(e)) for e in H.edges if len(e) == 1}

    strict = [v for v in ordered(Q) if v not in in_singleton]
    item2 = _gamma_item("2", strict, gamma, gamma_deleted, lambda g, base: g > base, "gamma(H-v) > gamma(H)")
    exempt = [v for v in ordered(Q) if v in in_singleton]
    if exempt:
        item2 = ItemResult(item2.name, item2.passed, item2.vacuous, {**item2.details, "exempt": exempt})

    items = [
        _gamma_item("1", ordered(F), gamma, gamma_deleted, lambda g, base: g == base, "gamma(H-v) == gamma(H)"),
        item2,
        _gamma_item("3", ordered(N), gamma, gamma_deleted, lambda g, base: g == base, "gamma(H-v) == gamma(H)"),
        _no_edge_inside(H, F, "4"),
    ]

    bad_edges, singleton_hits = [], []
    for matching in enumerate_optima(H, E_WEIGHTS, "matchings"):
        for i in matching.edges:
            e = H.edges[i]
            if e <= (N | Q) and e & Q:
                (singleton_hits if len(e) == 1 else bad_edges).append(i)
    details = {}
    if bad_edges:
        details["edges"] = sorted(set(bad_edges))
    if singleton_hits:
        details["singleton_exceptions"] = sorted(set(singleton_hits))
    items.append(ItemResult("5", not bad_edges, False, details))

    sub = {v: fqn(reduced[v]) for v in ordered(F | N)}

    def after_free(v):
        s = sub[v]
        return {
            "N == N'": (N, s["N"]),
            "N' == N": (s["N"], N),
            "Q == Q'": (Q, s["Q"]),
            "Q' == Q": (s["Q"], Q),
            "F-v == F'": (F - {v}, s["F"]),
            "F' == F-v": (s["F"], F - {v}),
        }

    def after_neutral(v):
        s = sub[v]
        Nv = N - {v}
        return {
            "N-v <= N' | Q' | F'": (Nv, s["N"] | s["Q"] | s["F"]),
            "N' <= N-v": (s["N"], Nv),
            "Q <= Q'": (Q, s["Q"]),
            "Q' <= N-v | Q": (s["Q"], Nv | Q),
            "F <= F'": (F, s["F"]),
            "F' <= N-v | F": (s["F"], Nv | F),
        }

    items.append(_inclusions("6", after_free, ordered(F)))
    items.append(_inclusions("7", after_neutral, ordered(N)))
    report = TheoremReport("galed1", dec, tuple(items))
    logging.info(f"FQN properties on n={H.n}, m={H.m}: passed={report.passed}, failed={report.failed_items}")
    return report


@dataclass(frozen=True)
class EqualityReport:
    equalities: dict
    bipartite: bool
    factor_critical: bool
    M_empty: bool
    sets: dict

    @property
    def implications_hold(self) -> bool:
        if self.bipartite and not all(self.equalities.values()):
            return False
        if self.M_empty and not (self.equalities["A=P"] and self.equalities["C=M"]):
            return False
        return True

    def to_dict(self) -> dict:
        return {
            **self.equalities,
            "bipartite": self.bipartite,
            "factor_critical": self.factor_critical,
            "M_empty": self.M_empty,
            "implications_hold": self.implications_hold,
            "sets": self.sets,
        }


def compare_equalities(H: Hypergraph) -> EqualityReport:
    require_balanced(H, "compare_equalities")
    d, f, c = dpm(H), fqn(H), classic_dac(H)
    equalities = {
        "A=P": c["A"] == d["P"],
        "C=M": c["C"] == d["M"],
        "D=F": d["D"] == f["F"],
        "A=Q": c["A"] == f["Q"],
        "C=N": c["C"] == f["N"],
    }
    sets = {"dpm": d.to_dict(), "fqn": f.to_dict(), "classic": c.to_dict()}
    report = EqualityReport(equalities, is_bipartite_graph(H), is_factor_critical(H), not d["M"], sets)
    logging.info(f"Decomposition equalities: {equalities}, implications_hold={report.implications_hold}")
    return report
