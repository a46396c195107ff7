"""CLI contract: exit codes, report shape, determinism."""

import json
import os

from lcslab.cli import main, run


def payload(report):
    return json.dumps({"results": report["results"], "checks": report["checks"]}, sort_keys=True)


def test_witt_reference_row():
    code, rep = run(["series", "witt", "--n", "2", "--max", "19"])
    assert code == 0
    assert rep["results"]["witt"][-2:] == [14532, 27594]
    assert any(c["status"] == "pass" for c in rep["checks"])


def test_exit_code_usage():
    assert main(["no-such-command"]) == 2
    assert main(["series", "witt"]) == 2  # missing --n
    assert main(["free-lcs", "--n", "2"]) == 2  # missing --max-deg


def test_report_written_atomically(tmp_path):
    out = tmp_path / "report.json"
    code, _ = run(["--out", str(out), "series", "necklaces", "--n", "2", "--max", "6"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["results"]["necklaces"] == [2, 3, 4, 6, 8, 14]
    assert rep["meta"]["command"] == "series"
    assert "elapsed_seconds" in rep["meta"]
    assert not os.path.exists(str(out) + ".tmp")


def test_byte_identical_reruns():
    args = ["free-lcs", "--n", "2", "--max-deg", "5", "--i-max", "3"]
    _, rep1 = run(args)
    _, rep2 = run(args)
    assert payload(rep1) == payload(rep2)


def test_free_lcs_table_shape():
    code, rep = run(["free-lcs", "--n", "2", "--max-deg", "5", "--i-max", "3"])
    assert code == 0
    res = rep["results"]
    assert res["L"][0] == [1, 2, 4, 8, 16, 32]
    assert res["B"][0] == [1, 2, 3, 4, 6, 8]  # necklace counts
    assert res["meta"]["I_max"] == 3


def test_free_lcs_checks_flag():
    code, rep = run(["free-lcs", "--n", "2", "--max-deg", "6", "--i-max", "3", "--checks"])
    assert code == 0
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_quotient_lcs_with_relation_file(tmp_path):
    rel = tmp_path / "rels.txt"
    rel.write_text("generators: 2\nprime: 1048573\nxy - yx\n")
    code, rep = run(["quotient-lcs", "--relations", str(rel), "--max-deg", "5", "--i-max", "2"])
    assert code == 0
    assert rep["results"]["L"][1] == [0] * 6  # commutative: no commutators anywhere
    assert rep["results"]["meta"]["relations_hash"]


def test_quotient_lcs_random_two_primes():
    code, rep = run(
        [
            "quotient-lcs", "--random", "3", "--seed", "5", "--max-deg", "7",
            "--i-max", "3", "--second-prime", "1048583",
        ]
    )
    assert code == 0
    assert rep["checks"][0]["status"] == "pass"  # stable across primes
    assert rep["results"]["meta"]["hilbert"] == [1, 2, 4, 7, 12, 20, 33, 54]


def test_fs_check_cli():
    code, rep = run(["fs-check", "--n", "2", "--max-deg", "5"])
    assert code == 0
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_psi_cli_small_degrees():
    code, rep = run(
        ["psi", "--relations-degrees", "3", "--deg", "5..6", "--seed", "1", "--prime", "1048573"]
    )
    assert code == 0
    rows = rep["results"]["rows"]
    assert [r["d"] for r in rows] == [5, 6]
    assert all(r["stable"] for r in rows)
    assert rows[0]["a"] == 6 and rows[0]["rank"] == 6


def test_verify_identities_cli():
    for field in ("q", "f2", "f3", "f5"):
        code, rep = run(["verify-identities", "--field", field])
        assert code == 0, field
        assert all(c["status"] == "pass" for c in rep["checks"]), field


def test_experiments_report_only():
    code, rep = run(["experiments", "--seed", "3", "--max-deg", "8"])
    assert code == 0
    statuses = {c["name"]: c["status"] for c in rep["checks"]}
    assert statuses["proven vanishing bounds"] == "pass"
    report_only = [n for n, s in statuses.items() if s == "report-only"]
    assert len(report_only) >= 3
    # the even-by-even strong inclusion genuinely fails on four generators
    assert any(v > 0 for v in rep["results"]["free4_M2M2_strong_defects"].values())


def test_truncation_exit_code(monkeypatch):
    from lcslab import cli
    from lcslab.presented import TruncationError

    def boom(args):
        raise TruncationError("past the built truncation")

    monkeypatch.setitem(cli._HANDLERS, "series", boom)
    code, rep = run(["series", "witt", "--n", "2", "--max", "5"])
    assert code == 3
    assert "TruncationError" in rep["error"]


def test_tsv_views(tmp_path):
    prefix = str(tmp_path / "table")
    code, _ = run(["free-lcs", "--n", "2", "--max-deg", "4", "--i-max", "2", "--tsv", prefix])
    assert code == 0
    text = (tmp_path / "table.B.tsv").read_text()
    assert text.splitlines()[0].startswith("i\\d")
