import json
import shutil
import subprocess
import sys

import pytest

from qgw.cli import convention_hash, main


def _run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_help_exits_zero(capsys):
    code, out, _ = _run(capsys, "--help")
    assert code == 0 and "report" in out


@pytest.mark.parametrize(
    "args",
    [
        ("check", "qybe", "--series", "E"),
        ("check", "qybe", "--series", "D", "--rank", "1"),
        ("check", "flatness", "--max-degree", "9"),
        ("check", "flatness", "--max-degree", "-1"),
        ("check", "semiclassical", "--series", "B"),
        ("check", "nonsense"),
    ],
)
def test_usage_errors_exit_two(capsys, args):
    code, _, _ = _run(capsys, *args)
    assert code == 2


def test_qybe_check_json(capsys):
    code, out, err = _run(capsys, "check", "qybe", "--series", "A", "--rank", "1")
    data = json.loads(out)
    assert code == 0
    assert data["checks"]["qybe"]["qybe"] == "pass"
    assert data["convention_ledger_hash"] == convention_hash()
    assert "overall" in err


def test_flatness_check_dims(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = _run(capsys, "check", "flatness", "--algebra", "frt", "--out", str(path))
    data = json.loads(path.read_text())
    assert code == 0 and "flatness" in out
    assert data["checks"]["flatness"]["quantum_dims"] == [1, 4, 10, 20, 35]


def test_semiclassical_series_c_runs(capsys):
    code, out, _ = _run(capsys, "check", "semiclassical", "--series", "C")
    assert code == 0
    assert json.loads(out)["checks"]["semiclassical"]["status"] == "pass"


def _report(tmp_path, name, *extra):
    exe = shutil.which("qgw")
    cmd = [exe] if exe else [sys.executable, "-m", "qgw.cli"]
    path = tmp_path / name
    res = subprocess.run(cmd + ["report", *extra, "--out", str(path)], capture_output=True, text=True)
    assert res.returncode == 0, res.stdout + res.stderr
    return path.read_bytes()


def test_report_is_deterministic(tmp_path):
    a = _report(tmp_path, "a.json", "--series", "A", "--rank", "1")
    b = _report(tmp_path, "b.json", "--series", "A", "--rank", "1")
    assert a == b
    data = json.loads(a)
    assert data["pass"] and set(data["checks"]) >= {"qybe", "center", "freeness"}


@pytest.mark.slow
def test_seeded_report_is_deterministic(tmp_path):
    a = _report(tmp_path, "a.json", "--series", "B", "--rank", "1", "--seed", "7")
    b = _report(tmp_path, "b.json", "--series", "B", "--rank", "1", "--seed", "7")
    assert a == b
    assert json.loads(a)["checks"]["semiclassical"]["status"] == "skipped"
