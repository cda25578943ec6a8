import math
import random

import numpy as np
import pytest

from targetpath.config import ScenarioError, load_scenario, parse_kv_lines, scenario_from_mapping
from targetpath.kinematics import NO_NOISE, SpeedProfile
from targetpath.simulator import (
    CSV_COLUMNS,
    PerturbationSpec,
    Scenario,
    TrajectoryLog,
    _noise_sample,
    convergence_time,
    perturb,
    run,
    step,
)

from conftest import make_scenario

# first ten uniform samples for seed 42, kappa_amp 0.01, vx_amp 0.5 (frozen)
UNIFORM_FIXTURE = [
    (0.002788535969157675, -0.47498924477733306),
    (-0.004499413632617615, -0.27678926185117725),
    (0.0047294242832802485, 0.1766994874229113),
    (0.007843591354096908, -0.41306116737058385),
    (-0.0015615636062945915, -0.47020278056192966),
    (-0.005627240503927933, 0.005355288103362388),
    (-0.009469280606322728, -0.3011623493133515),
    (0.002997688755590464, 0.04494148060321668),
    (-0.0055911875591860664, 0.08926568387590872),
    (0.006188609133556533, -0.493501240321939),
]


def test_perturb_none_identity():
    spec = PerturbationSpec()
    rng = random.Random(0)
    assert perturb(0.01, 15.0, spec, 3.0, rng) == (0.01, 15.0)


def test_perturb_sinusoidal_bounded():
    spec = PerturbationSpec(kind="sinusoidal", kappa_amp=0.005, vx_amp=0.3, frequency=2.0)
    rng = random.Random(0)
    for t in np.linspace(0.0, 10.0, 500):
        k, v = perturb(0.01, 15.0, spec, t, rng)
        assert abs(k - 0.01) <= 0.005 + 1e-15
        assert abs(v - 15.0) <= 0.3 + 1e-15


def test_perturb_uniform_reproducible():
    spec = PerturbationSpec(kind="uniform", kappa_amp=0.01, vx_amp=0.5)
    rng = random.Random(42)
    got = [_noise_sample(spec, k * 1e-3, rng) for k in range(10)]
    for (dk, dv), (ek, ev) in zip(got, UNIFORM_FIXTURE):
        assert dk == ek and dv == ev


def test_perturbation_spec_validation():
    with pytest.raises(ValueError):
        PerturbationSpec(kind="pink")
    with pytest.raises(ValueError):
        PerturbationSpec(kind="uniform", kappa_amp=-1.0)
    with pytest.raises(ValueError):
        PerturbationSpec(kind="sinusoidal", frequency=0.0)


def test_scenario_validation(published_gains, sine_path):
    with pytest.raises(ValueError):
        make_scenario(published_gains, sine_path, dt=0.0)
    with pytest.raises(ValueError):
        make_scenario(published_gains, sine_path, duration=1e-4)
    with pytest.raises(ValueError):
        Scenario(gains=published_gains, path=sine_path, speed=SpeedProfile(v_base=15.0))
    with pytest.raises(ValueError):
        Scenario(gains=published_gains, path=sine_path, speed=SpeedProfile(v_base=15.0),
                 init_errors=(1, 1, 0), init_pose=(0, 0, 0))
    with pytest.raises(ValueError):
        make_scenario(published_gains, sine_path,
                      noise=PerturbationSpec(kind="uniform", vx_amp=20.0))


def test_init_from_errors_reconstruction(published_gains, sine_path):
    sc = make_scenario(published_gains, sine_path, e_p=10.0, e_q=-3.0, xi=0.8)
    w = sc.initial_state()
    d = published_gains.d
    p = w.x + d * math.cos(w.psi)
    q = w.y + d * math.sin(w.psi)
    theta = w.psi + math.atan(d * w.v)
    assert p - w.p_r == pytest.approx(10.0, abs=1e-12)
    assert q - w.q_r == pytest.approx(-3.0, abs=1e-12)
    assert theta - w.psi_r == pytest.approx(0.8, abs=1e-12)
    assert w.v == 0.0


def test_equilibrium_preserved(compliant_gains, straight_path):
    log = run(make_scenario(compliant_gains, straight_path, e_p=0.0, e_q=0.0, xi=0.0,
                            duration=2.0))
    assert np.abs(log.e_p).max() < 1e-9
    assert np.abs(log.e_q).max() < 1e-9
    assert np.abs(log.xi).max() < 1e-9
    # reference still advances along the path
    assert log.s[-1] == pytest.approx(30.0, rel=1e-6)


def test_step_noise_zero_equals_no_noise(published_gains, sine_path):
    sc = make_scenario(published_gains, sine_path)
    w = sc.initial_state()
    a = step(w, sc, 0.0, NO_NOISE)
    from targetpath.kinematics import PerturbationSample

    b = step(w, sc, 0.0, PerturbationSample(0.0, 0.0))
    assert a == b


def test_run_determinism_bytes(tmp_path, published_gains, sine_path):
    sc = make_scenario(published_gains, sine_path, duration=0.5,
                       noise=PerturbationSpec(kind="uniform", kappa_amp=0.005), seed=7)
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run(sc).write_csv(str(f1))
    run(sc).write_csv(str(f2))
    assert f1.read_bytes() == f2.read_bytes()


def test_speed_bounds_hold(published_gains, sine_path):
    import dataclasses

    sp = SpeedProfile(kind="sinusoidal", v_base=15.0, amplitude=4.0, period=3.0)
    sc = dataclasses.replace(make_scenario(published_gains, sine_path, duration=2.0), speed=sp)
    log = run(sc)
    vx = log.v_d / np.sqrt(1.0 + (log.v * published_gains.d) ** 2)
    assert np.all(vx >= sp.v_min - 1e-9)
    assert np.all(vx <= sp.v_max + 1e-9)


def test_csv_roundtrip_and_format(tmp_path, published_gains, sine_path):
    sc = make_scenario(published_gains, sine_path, duration=0.1)
    log = run(sc)
    path = tmp_path / "run.csv"
    log.write_csv(str(path))
    text = path.read_text().splitlines()
    assert text[0] == ",".join(CSV_COLUMNS)
    assert len([l for l in text if not l.startswith("#") and l]) == len(log) + 1
    assert any(l.startswith("# t_conv") for l in text)
    back = TrajectoryLog.read_csv(str(path))
    np.testing.assert_array_equal(back.t, log.t)
    np.testing.assert_array_equal(back.V, log.V)


def test_csv_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        TrajectoryLog.read_csv(str(bad))
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(CSV_COLUMNS) + "\n")
    with pytest.raises(ValueError):
        TrajectoryLog.read_csv(str(empty))


def test_convergence_time_logic():
    t = np.arange(0.0, 10.0, 0.1)
    e = np.where(t < 4.0, 5.0, 0.0)
    z = np.zeros_like(t)
    assert convergence_time(t, e, z, z) == pytest.approx(4.0)
    assert convergence_time(t, z, z, z) == 0.0
    assert convergence_time(t, np.full_like(t, 5.0), z, z) is None


def test_scenario_file_parsing(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(
        "# comment\n"
        "vehicle.d = 2.0\n"
        "speed.v = 15.0\n"
        "path.kind = piecewise\n"
        "path.kappa_max = 0.02\n"
        "path.samples = 0:0.0 100:0.02\n"
        "gains.c0 = 0.4\ngains.c1 = 0.3\ngains.c2 = 1.0\n"
        "gains.m = 10\ngains.n = 3\ngains.beta = 0.2\ngains.rho = 0.2\n"
        "init.e_p = 1\ninit.e_q = 2\ninit.xi = 0.3\n"
        "sim.dt = 0.001\nsim.duration = 1.0\n"
    )
    sc = load_scenario(str(cfg))
    assert sc.gains.d == 2.0
    assert sc.path.kind == "piecewise"
    assert sc.path.samples == ((0.0, 0.0), (100.0, 0.02))
    assert sc.init_errors == (1.0, 2.0, 0.3)


def test_scenario_unknown_key_rejected():
    with pytest.raises(ScenarioError):
        parse_kv_lines("vehicle.d = 2\nbogus.key = 1\n")


def test_scenario_requires_one_init_style():
    base = {
        "vehicle.d": "2", "speed.v": "15", "path.kappa_max": "0.02",
        "gains.c0": "0.4", "gains.c1": "0.3", "gains.c2": "1",
        "gains.m": "10", "gains.n": "3", "gains.beta": "0.2", "gains.rho": "0.2",
    }
    with pytest.raises(ScenarioError):
        scenario_from_mapping(dict(base))
    with pytest.raises(ScenarioError):
        scenario_from_mapping({**base, "init.e_p": "1", "init.x": "0"})
    sc = scenario_from_mapping({**base, "init.e_p": "1"})
    assert sc.init_errors == (1.0, 0.0, 0.0)


def test_bundled_scenarios_parse():
    import pathlib

    root = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
    for name in ("demo.cfg", "compliant.cfg"):
        sc = load_scenario(str(root / name))
        assert sc.gains.d == 2.0
