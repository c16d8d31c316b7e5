import argparse
import json
import logging
import sqlite3
import sys
from dataclasses import dataclass, field

from balanced import __version__
from balanced.augment import matching_via_augmentation
from balanced.balance import is_balanced, oracle_balanced_matrix
from balanced.charac import check_charac_D, check_charac_stable, check_weighted_D
from balanced.coloring import edge_coloring, equitable_bisect, vertex_2color
from balanced.core import set_limits
from balanced.decompose import classic_dac, compare_equalities, dpm, fqn, verify_galed1, verify_galed2
from balanced.errors import (
    HypergraphError,
    InstanceTooLarge,
    ResultEmpty,
    SearchExhausted,
    UsageError,
    VerificationFailure,
)
from balanced.gen import CLOSURE_OPS, FAMILIES, GenSpec, generate
from balanced.solve import (
    WeightFn,
    check_matcheq,
    check_vc1,
    degree_bound,
    max_matching,
    min_vertex_cover,
    verify_konig,
)
from balanced.sweep import CHARAC_DRAWS, KONIG_DRAWS, run_sweep
from balanced.textformat import format_instance, instance_digest, read_instance
from utils.database import init_db, store_finding, store_report
from utils.helper import load_settings, setup_logging

EXIT_OK, EXIT_ERROR, EXIT_FINDINGS, EXIT_TOO_LARGE = 0, 1, 2, 3


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CommandResult:
    payload: dict
    findings: list = field(default_factory=list)
    lines: list = field(default_factory=list)   # JSON lines printed before the report
    text: str | None = None                     # replaces the JSON report (gen)


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def _int_list(value):
    if value is None or value == "":
        return []
    try:
        return [int(tok) for tok in value.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma separated list of integers, got {value!r}")


# Command handlers: (args, H, weights_from_file) -> CommandResult

def cmd_check_balance(args, H, d):
    cert = is_balanced(H)
    payload = cert.to_dict()
    findings = []
    if args.oracle:
        oracle = oracle_balanced_matrix(H)
        payload["oracle"] = oracle
        if oracle != cert.balanced:
            findings.append(("oracle-agreement", {"search": cert.verdict, "oracle": oracle}))
    return CommandResult(payload, findings)


def cmd_match(args, H, d):
    matching = max_matching(H, d, avoid=_int_list(args.avoid) or None)
    return CommandResult({"gamma": matching.weight, "matching": list(matching.edges)})


def cmd_cover(args, H, d):
    cover = min_vertex_cover(H, d)
    return CommandResult({"tau": cover.weight, "cover": list(cover.values)})


def cmd_konig(args, H, d):
    report = verify_konig(H, d)
    findings = [("konig", report.to_dict())] if report.violates_theorem else []
    return CommandResult(report.to_dict(), findings)


def cmd_bound(args, H, d):
    report = degree_bound(H, args.q)
    findings = [("degree-bound", report.to_dict())] if report.violates_theorem else []
    return CommandResult(report.to_dict(), findings)


def cmd_color(args, H, d):
    if args.kind == "vertex":
        return CommandResult(vertex_2color(H).to_dict())
    if args.kind == "bisect":
        first, second = equitable_bisect(H)
        return CommandResult({"halves": [first, second]})
    return CommandResult(edge_coloring(H).to_dict())


def cmd_augment(args, H, d):
    run = matching_via_augmentation(H, d, start=_int_list(args.start))
    lines = [canonical(step.to_dict()) for step in run.steps]
    return CommandResult(run.to_dict(), [], lines)


def cmd_decompose(args, H, d):
    builders = {"dpm": dpm, "fqn": fqn, "classic": classic_dac}
    dec = builders[args.mode](H)
    return CommandResult(dec.to_dict())


def cmd_verify(args, H, d):
    if args.theorem in ("galed2", "galed1"):
        report = (verify_galed2 if args.theorem == "galed2" else verify_galed1)(H)
        payload = report.to_dict()
        findings = [(f"{args.theorem}-item-{name}", payload["items"][name]) for name in report.failed_items]
        return CommandResult(payload, findings)
    if args.theorem == "equalities":
        report = compare_equalities(H)
        findings = [] if report.implications_hold else [("equalities", report.to_dict())]
        return CommandResult(report.to_dict(), findings)
    if args.theorem == "matcheq":
        holds = check_matcheq(H)
        return CommandResult({"holds": holds}, [] if holds else [("matcheq", {})])
    reports, skipped = [], []
    for v in H.vertices:
        try:
            reports.append(check_vc1(H, v).to_dict())
        except ResultEmpty:
            skipped.append(v)
    findings = [("vc1", r) for r in reports if not r["iff_holds"]]
    return CommandResult({"vertices": reports, "skipped": skipped, "holds": not findings}, findings)


def cmd_charac(args, H, d):
    balanced = is_balanced(H).balanced
    if args.which == "D":
        report = check_charac_D(H, sample=args.sample, seed=args.seed)
        payload = report.to_dict()
        # sampling can only refute, so only an exhaustive verdict is compared both ways
        inconsistent = (balanced and not report.holds) or (not balanced and report.holds and not args.sample)
    elif args.which == "weighted":
        holds = check_weighted_D(H, d)
        payload = {"holds": holds}
        inconsistent = balanced and not holds
    else:
        report = check_charac_stable(H, _int_list(args.vertex_weights) or None)
        payload = report.to_dict()
        inconsistent = balanced and not report.holds
    payload["balanced"] = balanced
    return CommandResult(payload, [(f"charac-{args.which}", payload)] if inconsistent else [])


def cmd_gen(args):
    spec = GenSpec(args.family, seed=args.seed, n=args.n, m=args.m, max_len=args.max_len,
                   n1=args.n1, n2=args.n2, p=args.p, ops=args.ops)
    H = generate(spec)
    text = format_instance(H)
    payload = {"family": args.family, "seed": args.seed, "digest": instance_digest(H), "instance": text}
    return CommandResult(payload, text=text)


def cmd_sweep(args):
    families = tuple(args.families.split(",")) if args.families else FAMILIES
    unknown = set(families) - set(FAMILIES)
    if unknown:
        raise UsageError(f"unknown families {sorted(unknown)}")
    report = run_sweep(
        count=args.count,
        seed=args.seed,
        families=families,
        n=args.n,
        m=args.m,
        konig_draws=args.konig_draws,
        charac_draws=args.charac_draws,
    )
    findings = [(f"{f.family}:{f.check}", f.to_dict()) for f in report.findings]
    return CommandResult(report.to_dict(), findings)


INSTANCE_COMMANDS = {
    "check-balance": cmd_check_balance,
    "match": cmd_match,
    "cover": cmd_cover,
    "konig": cmd_konig,
    "bound": cmd_bound,
    "color": cmd_color,
    "augment": cmd_augment,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "charac": cmd_charac,
}


def build_parser(settings):
    common = ArgumentParser(add_help=False)
    common.add_argument("--max-states", type=int, default=None, help="search budget for exponential searches")
    common.add_argument("--db", default=None, help="SQLite report ledger path")
    common.add_argument("--log-level", default=None, help="logging level (DEBUG, INFO, ...)")

    instance = ArgumentParser(add_help=False, parents=[common])
    instance.add_argument("instance", help="hypergraph in the text format")
    instance.add_argument("--weights", choices=["E", "V", "custom"], default=settings.default_weights)

    parser = ArgumentParser(prog="balanced", description="Matching theory toolkit for balanced hypergraphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("check-balance", parents=[instance], help="strong odd cycle search")
    p.add_argument("--oracle", action="store_true", help="cross-check with the incidence-matrix oracle")
    p = sub.add_parser("match", parents=[instance], help="maximum weight matching")
    p.add_argument("--avoid", default=None, help="vertices the matching must miss")
    sub.add_parser("cover", parents=[instance], help="minimum integer vertex cover")
    sub.add_parser("konig", parents=[instance], help="compare matching and cover numbers")
    p = sub.add_parser("bound", parents=[instance], help="degree bound on the V-matching number")
    p.add_argument("--q", type=int, required=True)
    p = sub.add_parser("color", parents=[instance], help="edge coloring, vertex 2-coloring or bisection")
    p.add_argument("--kind", choices=["edge", "vertex", "bisect"], default="edge")
    p = sub.add_parser("augment", parents=[instance], help="matching growth by augmentation")
    p.add_argument("--start", default=None, help="starting matching as edge indices")
    p = sub.add_parser("decompose", parents=[instance], help="vertex decompositions")
    p.add_argument("--mode", choices=["dpm", "fqn", "classic"], required=True)
    p = sub.add_parser("verify", parents=[instance], help="check decomposition and duality properties")
    p.add_argument("--theorem", choices=["galed2", "galed1", "equalities", "matcheq", "vc1"], required=True)
    p = sub.add_parser("charac", parents=[instance], help="characterizations of balancedness")
    p.add_argument("--which", choices=["D", "weighted", "stable"], required=True)
    p.add_argument("--vertex-weights", default=None)
    p.add_argument("--sample", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", parents=[common], help="write a generated instance")
    p.add_argument("--family", choices=list(FAMILIES), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--max-len", type=int, default=3)
    p.add_argument("--n1", type=int, default=3)
    p.add_argument("--n2", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--ops", type=int, default=3, help=f"closure operations drawn from {', '.join(CLOSURE_OPS)}")

    p = sub.add_parser("sweep", parents=[common], help="generate instances and run every cross-check")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--families", default=None, help=f"comma separated subset of {', '.join(FAMILIES)}")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--konig-draws", type=int, default=KONIG_DRAWS, help="random weight functions per instance for the Konig check")
    p.add_argument("--charac-draws", type=int, default=CHARAC_DRAWS, help="random weightings per instance for the characterizations")
    return parser


def _execute(args):
    if args.command == "gen":
        return cmd_gen(args), None
    if args.command == "sweep":
        return cmd_sweep(args), None
    H, file_weights = read_instance(args.instance)
    d = WeightFn.from_name(args.weights, file_weights)
    result = INSTANCE_COMMANDS[args.command](args, H, d)
    digest = instance_digest(H, file_weights)
    result.payload.update({"command": args.command, "digest": digest, "version": __version__})
    if args.command in ("match", "cover", "konig", "augment", "charac"):
        result.payload.setdefault("weights", d.label)
    return result, digest


def _persist(db_path, command, digest, payload, exit_code, findings):
    conn = init_db(db_path)
    try:
        store_report(conn, command, digest, payload, exit_code)
        for item, details in findings:
            store_finding(conn, command, digest, item, details)
    finally:
        conn.close()


def run(argv=None, out=None):
    """Parse ``argv``, run one command and return the process exit code."""
    out = out or sys.stdout
    settings = load_settings()
    command, digest = None, None
    try:
        args = build_parser(settings).parse_args(argv)
        command = args.command
        setup_logging(args.log_level or settings.log_level, settings.log_dir)
        limits = settings.limits()
        if args.max_states is not None:
            limits["max_states"] = args.max_states
        set_limits(**limits)

        result, digest = _execute(args)
        exit_code = EXIT_FINDINGS if result.findings else EXIT_OK
        if result.text is not None:
            output = result.text
        else:
            output = "".join(line + "\n" for line in result.lines) + canonical(result.payload) + "\n"

        db_path = args.db or settings.report_db
        if db_path and not settings.dry_run:
            _persist(db_path, command, digest, result.payload, exit_code, result.findings)
        out.write(output)
        return exit_code
    except InstanceTooLarge as e:
        logging.error(f"{command}: {e}")
        exit_code, error = EXIT_TOO_LARGE, e
    except (VerificationFailure, SearchExhausted) as e:
        logging.error(f"{command}: {e}")
        exit_code, error = EXIT_FINDINGS, e
    except HypergraphError as e:
        logging.error(f"{command}: {e}")
        exit_code, error = EXIT_ERROR, e
    except (OSError, sqlite3.Error) as e:
        logging.error(f"{command}: {e}")
        exit_code, error = EXIT_ERROR, e
    payload = {"error": type(error).__name__, "message": str(error)}
    if getattr(error, "details", None):
        payload["details"] = error.details
    if getattr(error, "witness", None) is not None:
        payload["witness"] = error.witness.sequence()
    out.write(canonical(payload) + "\n")
    return exit_code


if __name__ == "__main__":
    sys.exit(run())
