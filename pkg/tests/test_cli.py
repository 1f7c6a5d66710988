import json
import subprocess
import sys

import pytest

from conftest import CONFIGS, FIXTURES
from leo_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("leo", ["z2", "z3", "cnot"])
def test_verify_passes(capsys, leo):
    code, out, _ = run(capsys, "verify", leo)
    assert code == 0
    assert "PASS" in out and "trials            100" in out


def test_verify_cnot_prints_rotated_matrix(capsys):
    _, out, _ = run(capsys, "verify", "cnot")
    assert "  [+1 +0 +0 +0]" in out
    assert "  [+0 +0 +0 -1]" in out


def test_verify_unknown_name_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2


def test_sweep_default_config_row_count(capsys, tmp_path):
    out = tmp_path / "z2.csv"
    code, _, err = run(capsys, "sweep", str(CONFIGS / "z2.json"), "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 24
    assert "leo" in err and "free" in err


def test_sweep_noiseless_stdout(capsys):
    code, out, _ = run(capsys, "sweep", str(CONFIGS / "noiseless_z2.json"), "--shots", "256")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert rows and all(float(r[3]) >= 0.95 for r in rows)


def test_sweep_writes_svg(capsys, tmp_path):
    svg = tmp_path / "plot.svg"
    code, _, _ = run(
        capsys, "sweep", str(CONFIGS / "noiseless_z2.json"), "--shots", "64", "--svg", str(svg), "--out", str(tmp_path / "a.csv")
    )
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<circle") >= 24


@pytest.mark.parametrize("payload", [None, "{broken", json.dumps({"which": "z2", "shots": -4})])
def test_sweep_bad_config_exits_2(capsys, tmp_path, payload):
    path = tmp_path / "cfg.json"
    if payload is not None:
        path.write_text(payload)
    code, _, err = run(capsys, "sweep", str(path))
    assert code == 2
    assert "config error" in err


def test_sweep_is_byte_identical_across_runs(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "sweep", str(CONFIGS / "z3.json"), "--seed", "5", "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_kick_study_reports_slopes(capsys):
    code, out, _ = run(capsys, "kick-study", str(CONFIGS / "kick_study.json"))
    assert code == 0
    slopes = [float(line.rsplit(":", 1)[1]) for line in out.splitlines() if line.startswith("slope")]
    assert slopes[0] == pytest.approx(2, abs=0.1)
    assert slopes[1] == pytest.approx(1, abs=0.1)
    assert slopes[2] == pytest.approx(-1, abs=0.1)


def test_kick_study_bad_config(capsys, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"m_grid": [0]}))
    assert run(capsys, "kick-study", str(path))[0] == 2


@pytest.mark.parametrize(
    "which, tau, fixture", [("z2", "1", "z2_tau1.qasm"), ("z3", "1", "z3_tau1.qasm"), ("cnot", "2", "cnot_tau2.qasm")]
)
def test_export_matches_fixture(capsys, tmp_path, which, tau, fixture):
    out = tmp_path / "c.qasm"
    assert run(capsys, "export", which, "--tau", tau, str(out))[0] == 0
    assert out.read_bytes() == (FIXTURES / fixture).read_bytes()


def test_export_to_stdout(capsys):
    code, out, _ = run(capsys, "export", "z2", "--tau", "1")
    assert code == 0
    assert out == (FIXTURES / "z2_tau1.qasm").read_text()


def test_export_negative_tau(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["export", "z2", "--tau", "-1"])
    assert exc.value.code == 2


def test_entry_point_runs_as_module():
    proc = subprocess.run(
        [sys.executable, "-m", "leo_lab.cli", "verify", "z2", "--trials", "5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
