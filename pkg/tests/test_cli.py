from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from sp6web import cli, suites
from sp6web.qfield import qint, qpow
from sp6web.suites import Check

THETA = "obj:\nslice: cup(2)\nslice: covtx(2>1,1) id(2)\nslice: vtx(1,1>2) id(2)\nslice: cap(2)\n"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out.strip(), err.strip()


# -- eval --------------------------------------------------------------------


def test_eval_circle_plain_and_latex(capsys):
    rc, out, _ = run(capsys, "eval", "--web", "obj:; slice: cup(1); slice: cap(1)")
    assert rc == 0 and out == "-q^-6 - q^-4 - q^-2 - q^2 - q^4 - q^6"
    rc, out, _ = run(capsys, "eval", "--format", "latex", "--web", "obj:; slice: cup(1); slice: cap(1)")
    assert out == r"-\frac{[3][8]}{[4]}"


def test_eval_empty_web(capsys):
    assert run(capsys, "eval", "--web", "obj:") == (0, "1", "")


def test_eval_file_json(tmp_path, capsys):
    f = tmp_path / "theta.web"
    f.write_text(THETA)
    rc, out, _ = run(capsys, "eval", str(f), "--format", "json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["schema"] == cli.SCHEMA and doc["command"] == "eval"
    assert doc["value"]["latex"] == r"\frac{[2][3][7][8]}{[4]}"
    assert "seconds" not in out


def test_eval_stdin_with_jobs(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(THETA))
    rc, out, _ = run(capsys, "eval", "-", "--jobs", "2")
    single = cli._evaluate(cli.parse_web(THETA), cli.RunConfig("eval", None, "plain", 10**6, 1, True, 42, False))
    assert rc == 0 and out == str(single)


def test_eval_open_web_is_a_user_error(capsys):
    rc, _, err = run(capsys, "eval", "--web", "obj: 1; slice: id(1)")
    assert rc == 1 and "not closed" in err


def test_eval_syntax_error_reports_position(capsys):
    rc, _, err = run(capsys, "eval", "--web", "obj:\nslice: blob(1)")
    assert rc == 1 and "line 2" in err


def test_missing_file(capsys):
    rc, _, err = run(capsys, "eval", "/nonexistent/x.web")
    assert rc == 1 and "cannot read" in err


def test_budget_exhaustion_is_internal(capsys):
    rc, _, err = run(capsys, "eval", "--budget", "3", "--web", "obj:; slice: cup(3); slice: cap(3)")
    assert rc == 2 and "budget" in err


def test_bad_flag_is_a_user_error(capsys):
    assert run(capsys, "eval", "--jobs", "0")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


# -- link and annular --------------------------------------------------------


def test_link_hopf_latex(capsys):
    rc, out, _ = run(capsys, "link", "--braid", "s1 s1", "--colors", "1,1", "--format", "latex")
    assert rc == 0 and out == r"\frac{[8][9]}{[2]}"


def test_link_json_file_and_framing(tmp_path, capsys):
    f = tmp_path / "kink.json"
    f.write_text(json.dumps({"strands": 2, "colors": [1, 1], "word": ["s1"]}))
    rc, out, _ = run(capsys, "link", str(f), "--format", "json", "--normalize-framing")
    doc = json.loads(out)
    assert rc == 0 and doc["normalize_framing"] is True
    assert doc["value"]["latex"] == r"-\frac{[3][8]}{[4]}"
    rc, out, _ = run(capsys, "link", str(f))
    assert out == str(-qpow(7) * -(qint(3) * qint(8)) / qint(4))


def test_link_errors(capsys):
    assert run(capsys, "link", "--braid", "s3", "--colors", "1,1")[0] == 1
    assert run(capsys, "link")[0] == 1


def test_annular(capsys):
    assert run(capsys, "annular", "--braid", "", "--colors", "3") == (0, "x3", "")
    rc, out, _ = run(capsys, "annular", "--colors", "1,2", "--format", "json")
    doc = json.loads(out)
    assert doc["terms"] == [{"degree": [1, 1, 0], "coefficient": doc["terms"][0]["coefficient"]}]
    assert doc["terms"][0]["coefficient"]["text"] == "1"


# -- verify ------------------------------------------------------------------


def test_verify_relations_json(capsys):
    rc, out, _ = run(capsys, "verify", "relations", "--format", "json")
    doc = json.loads(out)
    assert rc == 0 and doc["passed"] and len(doc["checks"]) >= 10


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 1


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(suites, "run_suite", lambda name, seed=42, engine=None: [Check(name, "bad", False, "forced")])
    rc, out, _ = run(capsys, "verify", "relations")
    assert rc == 3 and out.startswith("FAIL")


def test_output_is_deterministic(capsys):
    argv = ("link", "--braid", "s1 s1 s1", "--colors", "1,1", "--format", "json")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_console_script_entry():
    res = subprocess.run(
        [sys.executable, "-m", "sp6web.cli", "eval", "--web", "obj:"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and res.stdout.strip() == "1"


@pytest.mark.parametrize("fmt", ["plain", "json", "latex"])
def test_every_format_renders(fmt, capsys):
    rc, out, _ = run(capsys, "eval", "--format", fmt, "--web", "obj:; slice: cup(2); slice: cap(2)")
    assert rc == 0 and out
