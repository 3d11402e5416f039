import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gaugeforge.cli import main
from gaugeforge.config import DEFAULTS, parse_config
from gaugeforge.errors import ConfigError
from gaugeforge.expr import parse, simplify

PRIMARY = """
[system]
omega0 = 1.0
x0 = 0.0
v0 = 0.0

[gauge]
f1 = C1
f2 = C2
f4 = C4
f6 = C6

[constants]
C1 = 0.3
C2 = 0.5
C4 = -1.2
C6 = 1.0
"""

UNDRIVEN = """
[system]
omega0 = 2.0
"""

RESONANT = """
[system]
omega0 = 1.0
x0 = 0
v0 = 0
t_end = 20

[drive]
force = "A*sin(t)"

[constants]
A = 0.2
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def same(text, expected):
    return simplify(parse(text)) == simplify(parse(expected))


# --- verify-null ---------------------------------------------------------------------

def test_verify_null_primary(tmp_path, capsys):
    code, report, _ = run(capsys, "verify-null", "--config", write(tmp_path, PRIMARY))
    assert code == 0
    assert report["certificate"] == "certified_symbolic"
    assert report["overall"] is True


def test_verify_null_lagrangian_override(capsys):
    code, report, _ = run(capsys, "verify-null", "--lagrangian", "x*t")
    assert code == 1
    assert report["certificate"] == "not_null"
    assert same(report["residual"], "-t")
    assert "t" in report["witness"]


def test_verify_null_missing_key(tmp_path, capsys):
    cfg = PRIMARY.replace("f2 = C2\n", "")
    code, report, err = run(capsys, "verify-null", "--config", write(tmp_path, cfg))
    assert code == 2 and report is None
    assert "gauge.f2" in err


def test_verify_null_undeclared_constant(tmp_path, capsys):
    cfg = PRIMARY.replace("f4 = C4", "f4 = C9")
    code, _, err = run(capsys, "verify-null", "--config", write(tmp_path, cfg))
    assert code == 2
    assert "C9" in err and "gauge.f4" in err


def test_verify_null_syntax_error(tmp_path, capsys):
    cfg = PRIMARY.replace("f4 = C4", 'f4 = "C4*("')
    code, _, err = run(capsys, "verify-null", "--config", write(tmp_path, cfg))
    assert code == 2 and "gauge.f4" in err


def test_missing_config(capsys):
    assert main(["derive-force"]) == 2
    assert main(["simulate", "--config", "/nonexistent/run.ini"]) == 2


# --- derive-force ---------------------------------------------------------------------

def test_derive_force_constant_gauge(tmp_path, capsys):
    cfg = PRIMARY.replace("C1 = 0.3", "C1 = 0").replace("C4 = -1.2", "C4 = 0")
    code, report, _ = run(capsys, "derive-force", "--config", write(tmp_path, cfg))
    assert code == 0
    assert report["force"] == "C2" and report["shift"] == "C6"
    roles = {k: v["role"] for k, v in report["classification"].items()}
    assert roles == {"phi1": "inert", "phi2": "F-gauge", "phi3": "inert", "phi4": "E-gauge"}


def test_derive_force_numeric_constant_gauge(tmp_path, capsys):
    gauge = "[gauge]\nf1 = 0\nf2 = 0.5\nf4 = 0\nf6 = 1\n"
    code, report, _ = run(capsys, "derive-force", "--config", write(tmp_path, gauge))
    assert (report["force"], report["shift"]) == ("0.5", "1")


def test_derive_force_zero_gauge(tmp_path, capsys):
    gauge = "[gauge]\nf1 = 0\nf2 = 0\nf4 = 0\nf6 = 0\n"
    code, report, _ = run(capsys, "derive-force", "--config", write(tmp_path, gauge))
    assert (report["force"], report["shift"]) == ("0", "0")
    assert {v["role"] for v in report["classification"].values()} == {"inert"}


def test_derive_force_sine(tmp_path, capsys):
    gauge = '[gauge]\nf1 = 0\nf2 = "sin(2*t)"\nf4 = 0\nf6 = 0\n'
    code, report, _ = run(capsys, "derive-force", "--config", write(tmp_path, gauge))
    assert same(report["force"], "sin(2*t) + 2*t*cos(2*t)")


# --- simulate ---------------------------------------------------------------------------

def test_simulate_undriven(tmp_path, capsys):
    out = tmp_path / "out"
    code, summary, _ = run(capsys, "simulate", "--config", write(tmp_path, UNDRIVEN), "--out", str(out))
    assert code == 0
    assert summary["omega"] == 2.0
    assert summary["samples"] == 10001
    assert summary["max_energy_drift"] <= 1e-8
    assert (out / "trajectory.csv").read_text().startswith("t,x,v,E,H,balance_residual\n")
    assert json.loads((out / "summary.json").read_text()) == summary


def test_simulate_constant_force_from_gauge(tmp_path, capsys):
    cfg = PRIMARY.replace("C1 = 0.3", "C1 = 0").replace("C4 = -1.2", "C4 = 0")
    code, summary, _ = run(capsys, "simulate", "--config", write(tmp_path, cfg),
                           "--out", str(tmp_path / "o"))
    assert code == 0
    assert summary["force"] == "C2"
    assert summary["max_energy_drift"] <= 1e-6
    assert summary["max_hamiltonian_drift"] > 0.1
    assert summary["balance_ok"] is True


def test_simulate_resonant(tmp_path, capsys):
    out = tmp_path / "o"
    code, summary, _ = run(capsys, "simulate", "--config", write(tmp_path, RESONANT), "--out", str(out))
    assert code == 0
    data = np.loadtxt(out / "trajectory.csv", delimiter=",", skiprows=1)
    assert data[-1, 0] == 20.0
    expected = 0.1 * abs(math.sin(20) - 20 * math.cos(20))
    assert abs(abs(data[-1, 1]) - expected) <= 1e-4
    assert summary["max_balance_residual"] <= 1e-5


def test_simulate_json_format(tmp_path, capsys):
    out = tmp_path / "o"
    cfg = UNDRIVEN + "t_end = 0.1\n"
    run(capsys, "simulate", "--config", write(tmp_path, cfg), "--out", str(out), "--format", "json")
    traj = json.loads((out / "trajectory.json").read_text())
    assert len(traj["t"]) == 101 and traj["t"][-1] == 0.1


def test_simulate_non_finite_exits_3(tmp_path, capsys):
    cfg = "[system]\nc = -1e6\nt_end = 10\ndt = 0.01\n"
    code, _, err = run(capsys, "simulate", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o"))
    assert code == 3
    assert "step" in err


def test_simulate_non_oscillatory_warning(tmp_path, capsys):
    cfg = "[system]\nc = -1\nt_end = 1\n"
    code, summary, _ = run(capsys, "simulate", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o"))
    assert code == 0
    assert summary["oscillatory"] is False and summary["warnings"]


def test_simulate_conflicting_parameters(tmp_path, capsys):
    cfg = "[system]\nomega0 = 1\nk = 4\nm = 1\n"
    code, _, err = run(capsys, "simulate", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o"))
    assert code == 2 and "system" in err


# --- check-helmholtz ------------------------------------------------------------------------

def test_helmholtz_pass(capsys):
    code, report, _ = run(capsys, "check-helmholtz", "--ode", "a + 4*x")
    assert code == 0 and report["overall"] is True


def test_helmholtz_damped_fails(capsys):
    code, report, _ = run(capsys, "check-helmholtz", "--ode", "a + 0.3*v + 4*x")
    assert code == 1
    verdicts = {c["name"]: c["passed"] for c in report["conditions"]}
    assert verdicts == {"nondegeneracy": True, "first_derivative": False, "second_derivative": True}


def test_helmholtz_not_second_order(capsys):
    code, report, err = run(capsys, "check-helmholtz", "--ode", "v + x")
    assert code == 2 and report is None and err


def test_helmholtz_from_config(tmp_path, capsys):
    cfg = "[helmholtz]\node = a + w^2*x\n\n[constants]\nw = 3\n"
    code, report, _ = run(capsys, "check-helmholtz", "--config", write(tmp_path, cfg))
    assert code == 0 and report["config"]["helmholtz"]["ode"] == "a + w^2*x"


# --- config, determinism, sweeps --------------------------------------------------------------

def test_reports_echo_resolved_config(tmp_path, capsys):
    _, report, _ = run(capsys, "verify-null", "--config", write(tmp_path, PRIMARY))
    cfg = report["config"]
    assert cfg["tolerances"] == DEFAULTS["tolerances"]
    assert cfg["system"]["dt"] == 1e-3 and cfg["system"]["t_end"] == 10.0
    assert cfg["constants"]["C2"] == 0.5
    assert cfg["gauge"]["gauge"]["f2"] == "C2"


def test_outputs_are_deterministic(tmp_path, capsys):
    path = write(tmp_path, RESONANT)
    blobs = []
    for name in ("a", "b"):
        out = tmp_path / name
        run(capsys, "simulate", "--config", path, "--out", str(out))
        blobs.append(((out / "trajectory.csv").read_bytes(),
                      (out / "summary.json").read_bytes().replace(str(out).encode(), b"OUT")))
    assert blobs[0] == blobs[1]
    first = run(capsys, "verify-null", "--lagrangian", "x*t")
    assert run(capsys, "verify-null", "--lagrangian", "x*t") == first


def test_seed_environment_variable(monkeypatch, capsys):
    monkeypatch.setenv("GAUGEFORGE_SEED", "5")
    a = run(capsys, "verify-null", "--lagrangian", "x*t")[1]["witness"]
    monkeypatch.setenv("GAUGEFORGE_SEED", "6")
    b = run(capsys, "verify-null", "--lagrangian", "x*t")[1]["witness"]
    assert a != b


SWEEP = """
[gauge:constant]
f1 = 0
f2 = 0.5
f4 = 0
f6 = 1

[gauge:ramp]
f1 = t
f2 = 0
f4 = "t^2"
f6 = 0

[gauge:wave]
f1 = 0
f2 = "sin(2*t)"
f4 = 0
f6 = "cos(t)"
"""


@pytest.mark.parametrize("command", ["verify-null", "derive-force"])
def test_jobs_sweep_matches_serial(tmp_path, capsys, command):
    path = write(tmp_path, SWEEP)
    code1, serial, _ = run(capsys, command, "--config", path)
    code2, parallel, _ = run(capsys, command, "--config", path, "--jobs", "3")
    assert code1 == code2 == 0
    assert serial == parallel
    assert [e["name"] for e in serial["entries"]] == ["gauge:constant", "gauge:ramp", "gauge:wave"]


def test_config_rejects_bad_input():
    with pytest.raises(ConfigError):
        parse_config("[system]\nspeed = 3\n")
    with pytest.raises(ConfigError):
        parse_config("[tolerances]\nnull_tol = -1\n")
    with pytest.raises(ConfigError):
        parse_config("[output]\nformat = xml\n")
    with pytest.raises(ConfigError):
        parse_config("[mystery]\nx = 1\n")


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "gaugeforge.cli", "check-helmholtz", "--ode", "a + x"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["overall"] is True
