import math

import pytest

from targetpath.gains import GainSet, synthesize_gains
from targetpath.kinematics import SpeedProfile
from targetpath.path_model import PathSpec
from targetpath.simulator import Scenario

XI0 = 9.0 * math.pi / 10.0


@pytest.fixture(scope="session")
def published_gains() -> GainSet:
    """The benchmark constants (N=3 is this artifact's choice)."""
    return GainSet(c0=0.4, c1=0.7, c2=1.0, m=1562.0, n=3.0, beta=0.96, rho=0.2,
                   d=2.0, kappa_max=0.02)


@pytest.fixture(scope="session")
def compliant_gains() -> GainSet:
    return synthesize_gains(d=2.0, kappa_max=0.02, c0=0.4, c2=1.0)


@pytest.fixture(scope="session")
def sine_path() -> PathSpec:
    return PathSpec(kind="sinusoidal", kappa_max=0.02, amplitude=0.02, period=200.0)


@pytest.fixture(scope="session")
def straight_path() -> PathSpec:
    return PathSpec(kind="constant", kappa_max=0.02, amplitude=0.0)


def make_scenario(gains, path, e_p=10.0, e_q=10.0, xi=XI0, dt=1e-3, duration=20.0, **kw):
    return Scenario(
        gains=gains,
        path=path,
        speed=SpeedProfile(kind="constant", v_base=15.0),
        init_errors=(e_p, e_q, xi),
        dt=dt,
        duration=duration,
        **kw,
    )
