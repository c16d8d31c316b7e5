import io
import json
import logging
import sqlite3

import pytest

from balanced.textformat import parse_instance
from main import EXIT_ERROR, EXIT_OK, EXIT_TOO_LARGE, run

logging.basicConfig(level=logging.INFO)

INSTANCES = {
    "p3.txt": "3 2\n1 2\n2 3\n",
    "c3.txt": "3 3\n1 2\n2 3\n1 3\n",
    "c4.txt": "4 4\n1 2\n2 3\n3 4\n1 4\n",
    "t1w.txt": "# T1 with weights\n4 2\n1 2 3 w=5\n3 4 w=1\n",
    "h5.txt": "4 3\n1 2\n2 3\n1 3 4\n",
    "loop.txt": "1 1\n1\n",
    "broken.txt": "3 2\n1 2\n",
}


@pytest.fixture
def files(cli_env):
    for name, text in INSTANCES.items():
        (cli_env / name).write_text(text)
    (cli_env / "bad.txt").write_bytes(b"3 2\n1 2\n2 \xff3\n")
    return cli_env


def run_cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()]


# Instance commands
def test_check_balance(files):
    code, [report] = run_cli("check-balance", "p3.txt")
    assert code == EXIT_OK and report["verdict"] == "balanced", "P3 is balanced."
    assert report["command"] == "check-balance" and len(report["digest"]) == 64, "Reports carry command and digest."

    code, [report] = run_cli("check-balance", "h5.txt", "--oracle")
    assert code == EXIT_OK, "An unbalanced verdict is not a failure."
    assert report["witness"] == [1, 0, 2, 1, 3, 2, 1] and report["oracle"] is False, "Witness and oracle agree."


def test_match_and_cover(files):
    code, [report] = run_cli("match", "c4.txt")
    assert code == EXIT_OK and report["gamma"] == 4 and report["matching"] == [0, 2], "C4 perfect matching."
    assert report["weights"] == "V", "V is the default preset."

    code, [report] = run_cli("match", "t1w.txt", "--weights", "custom")
    assert report["gamma"] == 5 and report["weights"] == "custom", "File weights drive custom matching."

    code, [report] = run_cli("match", "c4.txt", "--avoid", "1")
    assert report["matching"] == [1], "Avoiding vertex 1 leaves edge b."

    code, [report] = run_cli("cover", "p3.txt")
    assert report["tau"] == 2 and report["cover"] == [0, 2, 0], "P3 cover sits on the center."


def test_konig_and_bound(files):
    code, [report] = run_cli("konig", "c3.txt", "--weights", "E")
    assert code == EXIT_OK and (report["gamma"], report["tau"]) == (1, 2), "The triangle has a gap."
    assert not report["balanced"], "The gap is explained by imbalance."

    code, [report] = run_cli("bound", "c4.txt", "--q", "1")
    assert code == EXIT_OK and report["conclusion_holds"], "C4 meets the degree bound."


def test_color(files):
    code, [report] = run_cli("color", "c4.txt")
    assert code == EXIT_OK and report["k"] == 2 and report["classes"] == [[0, 2], [1, 3]], "C4 edge coloring."
    code, [report] = run_cli("color", "c4.txt", "--kind", "vertex")
    assert report["colors"] == {"1": 0, "2": 1, "3": 0, "4": 1}, "C4 vertex coloring."
    code, [report] = run_cli("color", "c4.txt", "--kind", "bisect")
    assert report["halves"] == [[0, 2], [1, 3]], "C4 bisection."


def test_not_balanced_is_an_error(files):
    code, [report] = run_cli("color", "h5.txt")
    assert code == EXIT_ERROR and report["error"] == "NotBalanced", "Coloring needs balance."
    assert report["witness"] == [1, 0, 2, 1, 3, 2, 1], "The error carries the witness."


def test_augment_prints_steps(files):
    code, lines = run_cli("augment", "c4.txt")
    *steps, report = lines
    assert code == EXIT_OK and len(steps) == report["steps"] == 2, "One JSON line per augmentation step."
    assert report["verified_optimal"] and report["weight"] == 4, "Augmentation reaches the optimum on C4."
    assert steps[-1]["weight_after"] == 4, "The last step reaches weight 4."


def test_decompose_and_verify(files):
    code, [report] = run_cli("decompose", "p3.txt", "--mode", "dpm")
    assert report["D"] == [1, 3] and report["P"] == [2] and report["tag"] == "DPM", "dpm(P3)."
    code, [report] = run_cli("decompose", "p3.txt", "--mode", "classic")
    assert report["A"] == [2], "classic_dac(P3)."

    for theorem in ("galed2", "galed1", "equalities", "matcheq"):
        code, _ = run_cli("verify", "c4.txt", "--theorem", theorem)
        assert code == EXIT_OK, f"{theorem} should pass on C4."

    code, [report] = run_cli("verify", "loop.txt", "--theorem", "vc1")
    assert code == EXIT_OK and report["skipped"] == [1], "Vertices whose deletion empties H are skipped."


def test_charac(files):
    code, [report] = run_cli("charac", "c3.txt", "--which", "D")
    assert code == EXIT_OK and not report["holds"] and not report["balanced"], "C3 is refuted consistently."
    code, [report] = run_cli("charac", "c4.txt", "--which", "stable", "--vertex-weights", "1,2,1,2")
    assert report["holds"], "C4 passes the stable-set test."
    code, [report] = run_cli("charac", "c4.txt", "--which", "weighted")
    assert report["holds"], "C4 passes the weighted deficient-set test."


# Generator and sweep
def test_gen_outputs_text(files):
    out = io.StringIO()
    assert run(["gen", "--family", "interval", "--seed", "3"], out=out) == EXIT_OK, "gen should succeed."
    H, weights = parse_instance(out.getvalue())
    assert H.n >= 1 and weights is None, "gen prints a parseable instance."


def test_sweep_command(files):
    code, [report] = run_cli("sweep", "--count", "1", "--families", "planted,interval", "--n", "5", "--m", "4")
    assert code == EXIT_OK and report["findings"] == [], "A tiny sweep finds nothing."


# Error paths
def test_error_exit_codes(files):
    code, [report] = run_cli("match", "broken.txt")
    assert code == EXIT_ERROR and report["error"] == "ParseError", "Malformed input is a parse error."
    code, [report] = run_cli("match", "missing.txt")
    assert code == EXIT_ERROR and report["error"] == "FileNotFoundError", "Missing files are IO errors."
    code, [report] = run_cli("match", "bad.txt")
    assert code == EXIT_ERROR and report["error"] == "ParseError", "Undecodable bytes are a parse error."
    code, [report] = run_cli("match", "p3.txt", "--weights", "custom")
    assert code == EXIT_ERROR and report["error"] == "UsageError", "Custom weights need w= fields."
    code, [report] = run_cli("frobnicate")
    assert code == EXIT_ERROR and report["error"] == "UsageError", "Unknown commands are usage errors."
    code, [report] = run_cli("match", "c4.txt", "--max-states", "1")
    assert code == EXIT_TOO_LARGE and report["error"] == "InstanceTooLarge", "Budget exhaustion has its own code."


# Report ledger
def test_reports_are_persisted(files):
    db = files / "ledger.db"
    code, _ = run_cli("match", "c4.txt", "--db", str(db))
    assert code == EXIT_OK, "match should succeed."
    conn = sqlite3.connect(db)
    rows = conn.execute("SELECT command, exit_code, payload FROM reports").fetchall()
    conn.close()
    assert len(rows) == 1 and rows[0][:2] == ("match", 0), "One report row per run."
    assert json.loads(rows[0][2])["gamma"] == 4, "The stored payload is the printed report."


def test_dry_run_skips_the_ledger(files, monkeypatch):
    monkeypatch.setenv("DRY_RUN", "true")
    db = files / "ledger.db"
    run_cli("match", "c4.txt", "--db", str(db))
    assert not db.exists(), "DRY_RUN must not create the ledger."
