from __future__ import annotations

import json
import subprocess
import sys
from io import StringIO

import pytest

from gaussfrac.cli import EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, main, read_config


def run(*argv: str) -> tuple[int, str]:
    out = StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv: str) -> tuple[int, dict]:
    code, text = run(*argv)
    return code, json.loads(text)


def test_expand_golden():
    code, obj = run_json("expand", "--alg", "hurwitz", "--surd", "1,-1,-1", "--depth", "4")
    assert code == EXIT_OK
    assert obj["quotients"] == ["2", "-3", "3", "-3"]
    assert obj["convergents"][-1] == "34/21"
    assert obj["terminated"] is False


def test_expand_rational_terminates():
    code, obj = run_json("expand", "--value", "(3+1i)/2", "--depth", "10")
    assert code == EXIT_OK and obj["terminated"] is True
    assert obj["quotients"] == ["1", "1-1i"]


def test_period_sqrt2():
    code, obj = run_json("period", "--alg", "hurwitz", "--surd", "1,0,-2")
    assert code == EXIT_OK
    assert (obj["preperiod"], obj["period"], obj["cycle"]) == (1, 1, ["2"])


def test_check_reports_violation_with_exit_zero():
    code, obj = run_json("check", "--cond", "Hprime", "--seq", "0,-1+1i,1+1i")
    assert code == EXIT_OK
    assert obj["ok"] is False and obj["first_violation"]["index"] == 1


def test_profile_golden():
    code, obj = run_json("profile", "--seq", "2,-3,3,-3,3,-3", "--theta", "golden")
    assert code == EXIT_OK and obj["member"] is True


def test_usage_errors_exit_2():
    code, obj = run_json("expand", "--surd", "1,0,-4")
    assert code == EXIT_USAGE and obj["error"]["name"] == "RationalRoot"
    code, obj = run_json("expand", "--surd", "1,2,1")
    assert code == EXIT_USAGE and obj["error"]["name"] == "DegenerateDisc"
    code, _ = run("expand", "--surd", "1,-1,-1", "--prec", "8")
    assert code == EXIT_USAGE
    code, _ = run("expand", "--alg", "nope", "--surd", "1,-1,-1")
    assert code == EXIT_USAGE
    code, _ = run("expand")
    assert code == EXIT_USAGE


def test_argparse_errors_exit_2(capsys):
    assert main(["frobnicate"], out=StringIO()) == EXIT_USAGE
    capsys.readouterr()


def test_compute_errors_exit_3():
    code, obj = run_json("expand", "--approx", "1/2,0,1/100", "--depth", "5")
    assert code == EXIT_COMPUTE
    assert obj["error"]["name"] == "PrecisionExhausted"
    assert obj["error"]["partial_quotients"] == []
    code, obj = run_json("period", "--surd", "3+1i,-1+4i,2-5i", "--max-steps", "1")
    assert code == EXIT_COMPUTE and obj["error"]["name"] == "ExceededBudget"
    code, obj = run_json("generic", "--blocks", "3;-3", "--bridge-budget", "0")
    assert code == EXIT_COMPUTE
    assert obj["error"]["name"] == "BridgeSearchFailed" and obj["error"]["junction"] == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# golden ratio, shifted\nalg = shifted-hurwitz\nd = 3/10\ndepth = 6\n")
    assert read_config(str(cfg)) == {"alg": "shifted-hurwitz", "d": "3/10", "depth": "6"}
    code, obj = run_json("expand", "--config", str(cfg), "--surd", "1,-1,-1")
    assert code == EXIT_OK and obj["quotients"] == ["1"] * 6
    # command-line flags win over the file
    code, obj = run_json("expand", "--config", str(cfg), "--depth", "2", "--surd", "1,-1,-1")
    assert obj["quotients"] == ["1", "1"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    code, _ = run("expand", "--config", str(bad), "--surd", "1,-1,-1")
    assert code == EXIT_USAGE


def test_prefix_probe_csv():
    code, text = run("probe-t72", "--surd", "1,-1,-1", "--lengths", "4,8,16,24", "--points", "1.5;2;3", "--format", "csv")
    assert code == EXIT_OK
    lines = text.strip().splitlines()
    assert lines[0] == "i,series,point,distance" and len(lines) == 1 + 12


def test_conjugated_probe_shape_violation():
    code, obj = run_json("probe-p75", "--alpha", "3,-3,3,-3", "--beta", "2+1i,-3,2+1i,-3",
                         "--lengths", "2,4", "--junction", "2")
    assert code == EXIT_USAGE and obj["error"]["name"] == "ShapeViolation"


def test_qform_modes():
    code, text = run("qform", "--mode", "coverage", "--zeta1", "golden", "--zeta2", "0", "--N", "2,4")
    rows = [json.loads(line) for line in text.splitlines()]
    assert code == EXIT_OK and [r["N"] for r in rows] == [2, 4]
    code, obj = run_json("qform", "--mode", "isolation", "--N", "5")
    assert code == EXIT_OK and obj["lower_bound"].startswith("0.381966011250105")
    code, text = run("qform", "--mode", "values", "--zeta1", "0", "--zeta2", "0", "--N", "1")
    assert len(text.splitlines()) == 81


def test_admissible_command():
    code, obj = run_json("admissible", "--block", "3", "--seed", "1")
    assert code == EXIT_OK and obj["tag"] == "admissible"


@pytest.mark.parametrize("argv", [["--help"], ["expand", "--help"]])
def test_console_script(argv):
    r = subprocess.run([sys.executable, "-m", "gaussfrac", *argv], capture_output=True, text=True)
    assert r.returncode == 0 and "usage" in r.stdout
