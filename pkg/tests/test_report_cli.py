import io
import json
import subprocess
import sys

import pytest

from tworank.cli import run
from tworank.report import (
    NOT_APPLICABLE,
    SKIPPED,
    VERIFIED,
    VIOLATED,
    VerificationReport,
    dump_reports,
    exit_code,
    load_reports,
)


def make(verdict, **kw):
    return VerificationReport("demo", {"x": 1}, verdict, **kw)


def test_report_roundtrip():
    r = VerificationReport(
        "sylow2-gl.3", {"n": 2, "q": 7}, VERIFIED,
        counts={"involutions": 9}, elapsed_ms=12, seed=3,
    )
    back = VerificationReport.from_json(r.to_json())
    assert back == r
    d = r.to_dict()
    assert d["schema"] == 1 and d["lemma_id"] == "sylow2-gl.3"


def test_reader_tolerates_unknown_fields():
    d = json.loads(make(VERIFIED).to_json())
    d["future_field"] = {"a": 1}
    r = VerificationReport.from_dict(d)
    assert r.verdict == VERIFIED


def test_violated_requires_witness():
    with pytest.raises(ValueError):
        make(VIOLATED)
    r = make(VIOLATED, witness={"g": "x"})
    assert r.witness == {"g": "x"}


def test_stable_output_drops_timing():
    r = make(VERIFIED, elapsed_ms=500)
    assert "elapsed_ms" not in r.to_dict(stable=True)
    assert r.to_dict(stable=True) == make(VERIFIED, elapsed_ms=7).to_dict(stable=True)


def test_exit_codes():
    assert exit_code([make(VERIFIED), make(NOT_APPLICABLE)]) == 0
    assert exit_code([make(VERIFIED), make(VIOLATED, witness={})]) == 1
    assert exit_code([make(VERIFIED), make(SKIPPED)]) == 2


def test_dump_and_load_reports():
    buf = io.StringIO()
    reports = [make(VERIFIED), make(SKIPPED)]
    dump_reports(reports, buf)
    buf.seek(0)
    assert load_reports(buf) == reports


def test_cli_sylow2_statement3(capsys):
    code = run(["verify", "sylow2", "--n", "2", "--q", "7", "--statement", "3",
                "--stable-output"])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out.strip())
    assert payload["counts"]["involutions"] == 9
    assert payload["verdict"] == "verified"


def test_cli_sylow2_all_statements(capsys):
    code = run(["verify", "sylow2", "--n", "2", "--q", "7", "--stable-output"])
    out = capsys.readouterr().out
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert code == 0
    assert len(lines) == 5
    verdicts = {l["params"]["statement"]: l["verdict"] for l in lines}
    assert verdicts[3] == "verified"
    assert verdicts[1] == "not-applicable"  # q = 7 excluded from statement 1


def test_cli_stable_output_is_deterministic(capsys):
    run(["verify", "tower", "--seed", "5", "--trials", "6", "--stable-output"])
    first = capsys.readouterr().out
    run(["verify", "tower", "--seed", "5", "--trials", "6", "--stable-output"])
    second = capsys.readouterr().out
    assert first == second


def test_cli_census_csv(tmp_path, capsys):
    out = tmp_path / "census.csv"
    code = run(["census", "sylow2", "--n", "2", "--q", "7", "--format", "csv",
                "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "n,q,construction,order,involutions,central,bound,verdict"
    assert rows[1] == "2,7,Presentation4q1,32,9,1,9,within-bound"


def test_cli_plane_build(tmp_path):
    out = tmp_path / "plane.json"
    code = run(["plane", "build", "--q", "3", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["num_points"] == 13
    code = run(["plane", "build", "--q", "3", "--format", "csv", "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 13


def test_cli_report_merge(tmp_path, capsys):
    p1 = tmp_path / "a.ndjson"
    p2 = tmp_path / "b.ndjson"
    with open(p1, "w") as fh:
        dump_reports([make(VERIFIED)], fh)
    with open(p2, "w") as fh:
        dump_reports([make(SKIPPED)], fh)
    merged = tmp_path / "merged.ndjson"
    code = run(["report", "merge", str(p1), str(p2), "--out", str(merged)])
    assert code == 2  # skip present
    with open(merged) as fh:
        assert len(load_reports(fh)) == 2


def test_cli_usage_errors():
    assert run(["frobnicate"]) == 3
    assert run(["verify", "sylow2", "--n", "2"]) == 3  # missing --q


def test_cli_markdown_format(capsys):
    code = run(["verify", "sylow2", "--n", "2", "--q", "7", "--statement", "3",
                "--format", "md", "--stable-output"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("|") and "sylow2-gl.3" in out


def test_cli_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "tworank.cli", "verify", "sylow2", "--n", "2",
         "--q", "7", "--statement", "3", "--stable-output"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert '"verdict": "verified"' in proc.stdout


def test_cli_resource_cap_exit_code(capsys):
    code = run(["verify", "sylow2", "--n", "4", "--q", "31", "--statement", "2",
                "--cap", "100", "--stable-output"])
    out = capsys.readouterr().out
    assert code == 2
    assert json.loads(out.strip())["verdict"] == "skipped-resource"


def test_cli_lemma_a_random_csv(tmp_path, capsys):
    out = tmp_path / "verdicts.csv"
    code = run(["verify", "lemma-a", "--n", "2", "--q", "7", "--mode", "random",
                "--trials", "5", "--seed", "2", "--format", "csv",
                "--out", str(out), "--stable-output"])
    capsys.readouterr()
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "order,involutions,best_index,part,bound,verdict"
    assert len(rows) >= 6
    assert all(r.endswith(("satisfied", "odd-order-skip")) for r in rows[1:])


def test_cli_jobs_flag(capsys):
    code = run(["verify", "sylow2", "--n", "2", "--q", "7", "--jobs", "2",
                "--stable-output"])
    out = capsys.readouterr().out
    assert code == 0
    assert len(out.strip().splitlines()) == 5
