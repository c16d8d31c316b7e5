from __future__ import annotations

import logging
from dataclasses import dataclass, field

from tqdm import tqdm

from balanced.augment import matching_via_augmentation
from balanced.balance import find_strong_odd_cycle, is_balanced, oracle_balanced_matrix
from balanced.charac import check_charac_D, check_charac_stable, check_weighted_D
from balanced.coloring import edge_coloring, verify_edge_coloring
from balanced.core import dual, get_limits
from balanced.decompose import compare_equalities, verify_galed1, verify_galed2
from balanced.errors import GenerationFailed, HypergraphError, InstanceTooLarge, ResultEmpty
from balanced.gen import FAMILIES, GenSpec, gen_closure, generate, make_rng
from balanced.solve import E_WEIGHTS, V_WEIGHTS, WeightFn, check_matcheq, check_vc1, degree_bound, verify_konig

KONIG_DRAWS = 10
CHARAC_DRAWS = 10
PLANTED_BATCH = 20
PLANTED_REFUTATIONS = ("konig-gap", "weighted-D", "charac-stable")


@dataclass(frozen=True)
class Finding:
    family: str
    seed: int
    check: str
    details: dict

    def to_dict(self) -> dict:
        return {"family": self.family, "seed": self.seed, "check": self.check, "details": self.details}


@dataclass
class SweepReport:
    instances: int = 0
    checks: int = 0
    skipped: int = 0
    findings: list = field(default_factory=list)
    # planted instances on which each refutation showed up
    planted: dict = field(default_factory=lambda: {"instances": 0, **dict.fromkeys(PLANTED_REFUTATIONS, 0)})

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "checks": self.checks,
            "skipped": self.skipped,
            "findings": [f.to_dict() for f in self.findings],
            "planted": dict(self.planted),
        }


class _Checker:
    def __init__(self, report: SweepReport, family: str, seed: int):
        self.report, self.family, self.seed = report, family, seed

    def expect(self, check: str, ok: bool, **details) -> None:
        self.report.checks += 1
        if not ok:
            finding = Finding(self.family, self.seed, check, details)
            logging.warning(f"Finding: {finding.to_dict()}")
            self.report.findings.append(finding)


def _balanced_checks(H, rng, check: _Checker, enumerate_small: bool, konig_draws: int, charac_draws: int) -> None:
    check.expect("heredity-dual", is_balanced(dual(H)).balanced)
    try:
        closure = gen_closure(H, 3, int(rng.integers(0, 2**32)))
        check.expect("heredity-closure", is_balanced(closure).balanced)
    except GenerationFailed as e:
        check.report.skipped += 1
        logging.info(f"Closure draw gave up: {e}")

    for d in (E_WEIGHTS, V_WEIGHTS, *(WeightFn.custom(rng.integers(0, 6, H.m)) for _ in range(konig_draws))):
        report = verify_konig(H, d)
        check.expect("konig", report.equal, weights=d.label, gamma=report.gamma, tau=report.tau)

    coloring = edge_coloring(H)
    check.expect("edge-coloring", verify_edge_coloring(H, coloring), k=coloring.k)

    for q in range(1, 5):
        bound = degree_bound(H, q)
        check.expect("degree-bound", not bound.violates_theorem, **bound.to_dict())

    check.expect("matcheq", check_matcheq(H))
    for v in H.vertices:
        try:
            vc1 = check_vc1(H, v)
        except ResultEmpty:
            continue
        check.expect("vc1", vc1.iff_holds, **vc1.to_dict())

    run = matching_via_augmentation(H, V_WEIGHTS)
    check.expect("augmentation-feasible", run.matching.weight <= run.solver_weight, **run.to_dict())

    if enumerate_small:
        for theorem in (verify_galed2, verify_galed1):
            result = theorem(H)
            check.expect(result.theorem, result.passed, failed=result.failed_items)
        eq = compare_equalities(H)
        check.expect("equalities", eq.implications_hold, **{k: v for k, v in eq.to_dict().items() if k != "sets"})

    limits = get_limits()
    if H.m <= limits.charac_max_edges and H.n <= limits.charac_max_vertices:
        charac = check_charac_D(H)
        check.expect("charac-D", charac.holds, witness=charac.witness)
    for _ in range(charac_draws):
        edge_weights = WeightFn.custom(rng.integers(1, 6, H.m))
        check.expect("weighted-D", check_weighted_D(H, edge_weights))
        vertex_weights = [int(x) for x in rng.integers(1, 6, H.n)]
        stable = check_charac_stable(H, vertex_weights)
        check.expect("charac-stable", stable.holds, failing_vertex=stable.failing_vertex)
        bridge = check_weighted_D(dual(H), WeightFn.custom(vertex_weights))
        check.expect("duality-bridge", bridge == stable.holds)


# Which of the refutations in PLANTED_REFUTATIONS show up on an unbalanced instance
def _planted_refutations(H, rng, konig_draws: int, charac_draws: int) -> set:
    found = set()
    for d in (E_WEIGHTS, V_WEIGHTS, *(WeightFn.custom(rng.integers(0, 6, H.m)) for _ in range(konig_draws))):
        report = verify_konig(H, d)
        if report.gamma < report.tau:
            found.add("konig-gap")
            break
    for d in (E_WEIGHTS, V_WEIGHTS, *(WeightFn.custom(rng.integers(1, 6, H.m)) for _ in range(charac_draws))):
        if not check_weighted_D(H, d):
            found.add("weighted-D")
            break
    for d in (None, *([int(x) for x in rng.integers(1, 6, H.n)] for _ in range(charac_draws))):
        if not check_charac_stable(H, d).holds:
            found.add("charac-stable")
            break
    logging.info(f"Planted instance refutations: {sorted(found)}")
    return found


def run_sweep(
    count: int = 20,
    seed: int = 0,
    families=FAMILIES,
    n: int = 6,
    m: int = 6,
    konig_draws: int = KONIG_DRAWS,
    charac_draws: int = CHARAC_DRAWS,
    planted_batch: int = PLANTED_BATCH,
) -> SweepReport:
    report = SweepReport()
    rng = make_rng(seed)
    jobs = [(family, seed + i) for family in families for i in range(count)]
    for family, instance_seed in tqdm(jobs, desc="Sweeping instances"):
        check = _Checker(report, family, instance_seed)
        try:
            H = generate(GenSpec(family, seed=instance_seed, n=n, m=m, n1=max(1, n // 2), n2=max(1, n - n // 2)))
            report.instances += 1
            cert = is_balanced(H)
            try:
                check.expect("oracle-agreement", oracle_balanced_matrix(H) == cert.balanced)
            except InstanceTooLarge:
                report.skipped += 1
            if family == "planted":
                check.expect("planted-unbalanced", not cert.balanced and find_strong_odd_cycle(H) is not None)
                if H.m <= get_limits().charac_max_edges and H.n <= get_limits().charac_max_vertices:
                    charac = check_charac_D(H)
                    check.expect("charac-D-refutes", not charac.holds and charac.witness is not None)
                report.planted["instances"] += 1
                for name in _planted_refutations(H, rng, konig_draws, charac_draws):
                    report.planted[name] += 1
                continue
            check.expect("generated-balanced", cert.balanced)
            if cert.balanced:
                _balanced_checks(H, rng, check, H.n <= 8 and H.m <= 8, konig_draws, charac_draws)
        except (InstanceTooLarge, GenerationFailed) as e:
            report.skipped += 1
            logging.info(f"Skipping {family} seed {instance_seed}: {e}")
        except HypergraphError as e:
            check.expect("no-errors", False, error=type(e).__name__, message=str(e))

    # On a large enough planted batch every refutation must show up at least once
    if report.planted["instances"] >= planted_batch:
        batch = _Checker(report, "planted", seed)
        for name in PLANTED_REFUTATIONS:
            batch.expect(f"planted-{name}", report.planted[name] > 0, counts=dict(report.planted))
    logging.info(f"Sweep finished: {report.instances} instances, {report.checks} checks, {len(report.findings)} findings")
    return report
