import pathlib

import pytest

from targetpath.cli import main

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
DEMO = str(SCENARIOS / "demo.cfg")
COMPLIANT = str(SCENARIOS / "compliant.cfg")


def _simulate(tmp_path, scenario, *extra, name="out.csv"):
    out = tmp_path / name
    code = main(["simulate", "--scenario", scenario, "--out", str(out), *extra])
    return code, out


@pytest.fixture(scope="module")
def short_override():
    return ["--override", "sim.duration=0.2"]


def test_simulate_demo_summary(tmp_path, capsys):
    out = tmp_path / "demo.csv"
    code = main(["simulate", "--scenario", DEMO, "--out", str(out)])
    captured = capsys.readouterr().out
    assert code == 0
    assert out.exists()
    t_conv = float(next(l for l in captured.splitlines() if l.startswith("# t_conv")).split("=")[1])
    assert 4.0 <= t_conv <= 10.0


def test_simulate_missing_scenario(tmp_path, capsys):
    code, _ = _simulate(tmp_path, str(SCENARIOS / "nope.cfg"))
    assert code == 1
    assert capsys.readouterr().err


def test_simulate_unknown_override(tmp_path, short_override, capsys):
    code, _ = _simulate(tmp_path, DEMO, "--override", "sim.bogus=1")
    assert code == 1
    assert capsys.readouterr().err


def test_simulate_halved_dt_doubles_rows(tmp_path, capsys):
    _, out1 = _simulate(tmp_path, DEMO, "--override", "sim.duration=0.5", name="a.csv")
    _, out2 = _simulate(
        tmp_path, DEMO, "--override", "sim.duration=0.5", "--override", "sim.dt=0.0005",
        name="b.csv",
    )
    n1 = sum(1 for l in out1.read_text().splitlines() if l and not l.startswith("#")) - 1
    n2 = sum(1 for l in out2.read_text().splitlines() if l and not l.startswith("#")) - 1
    assert abs(n2 - 2 * n1) <= 1


def test_simulate_determinism(tmp_path, short_override):
    _, out1 = _simulate(tmp_path, DEMO, *short_override, name="a.csv")
    _, out2 = _simulate(tmp_path, DEMO, *short_override, name="b.csv")
    assert out1.read_bytes() == out2.read_bytes()


def test_gains_check_demo_fails_budget(capsys):
    code = main(["gains", "check", "--scenario", DEMO])
    out = capsys.readouterr().out
    assert code == 2
    assert "forward_gain_budget" in out and "FAIL" in out
    assert "forward_gain_budget.ok=0" in out
    assert "c1_floor.ok=1" in out


def test_gains_check_compliant(capsys):
    code = main(["gains", "check", "--scenario", COMPLIANT])
    assert code == 0
    assert "overall: pass" in capsys.readouterr().out


def test_gains_synth_roundtrip(tmp_path, capsys):
    code = main(["gains", "synth", "--d", "2", "--kappa-max", "0.02", "--c0", "0.4", "--c2", "1"])
    out = capsys.readouterr().out
    assert code == 0
    # emitted block is scenario-ready: splice it into a file and re-check
    cfg = tmp_path / "synth.cfg"
    cfg.write_text(
        out
        + "speed.v = 15\ninit.e_p = 1\nsim.dt = 0.001\nsim.duration = 0.1\n"
        + "path.kind = constant\n"
    )
    code = main(["gains", "check", "--scenario", str(cfg)])
    assert code == 0


def test_gains_synth_infeasible(capsys):
    code = main(["gains", "synth", "--d", "2", "--kappa-max", "0.6", "--c0", "0.4", "--c2", "1"])
    assert code == 2
    assert "infeasible" in capsys.readouterr().err


def test_lyapunov_grid_compliant(capsys):
    code = main(["lyapunov", "grid", "--scenario", COMPLIANT, "--n", "101"])
    assert code == 0
    assert "grid positivity ok" in capsys.readouterr().out


def test_lyapunov_trace_roundtrip(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = main([
        "simulate", "--scenario", COMPLIANT, "--out", str(out),
        "--override", "sim.duration=20", "--override", "path.kind=constant",
        "--override", "path.amplitude=0",
    ])
    assert code == 0
    code = main(["lyapunov", "trace", "--log", str(out), "--scenario", COMPLIANT])
    assert code == 0


def test_lyapunov_trace_truncated(tmp_path, capsys):
    bad = tmp_path / "trunc.csv"
    bad.write_text("t,x,y\n0,1\n")
    code = main(["lyapunov", "trace", "--log", str(bad), "--scenario", COMPLIANT])
    assert code == 1
    assert capsys.readouterr().err


def test_usage_error_exit_code():
    assert main(["no-such-command"]) == 1


def test_version(capsys):
    assert main(["--version"]) == 0
