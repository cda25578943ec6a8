"""Scenario files: plain `key = value` lines with dotted section prefixes.

Lines starting with `#` (or blank) are ignored.  Unknown keys are errors.
Angles are radians, lengths meters.  `path.samples` is a space-separated
list of `s:kappa` tokens.
"""

from __future__ import annotations

import math

from .gains import GainSet
from .kinematics import SpeedProfile
from .path_model import PathSpec
from .simulator import PerturbationSpec, Scenario

_FLOAT_KEYS = {
    "vehicle.d",
    "speed.v", "speed.amplitude", "speed.period",
    "path.kappa_max", "path.amplitude", "path.period", "path.s0",
    "gains.c0", "gains.c1", "gains.c2", "gains.m", "gains.n",
    "gains.beta", "gains.rho",
    "init.e_p", "init.e_q", "init.xi",
    "init.x", "init.y", "init.psi", "init.v",
    "init.p_r", "init.q_r", "init.psi_r",
    "sim.dt", "sim.duration",
    "noise.kappa_amp", "noise.vx_amp", "noise.frequency",
}
_STR_KEYS = {"speed.kind", "path.kind", "path.samples", "controller.variant", "noise.kind"}
_INT_KEYS = {"sim.seed"}
KNOWN_KEYS = _FLOAT_KEYS | _STR_KEYS | _INT_KEYS


class ScenarioError(ValueError):
    """Malformed scenario file or inconsistent key set."""


def parse_kv_lines(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ScenarioError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        out[key] = val.strip()
    return out


def _parse_samples(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for tok in text.split():
        s, sep, k = tok.partition(":")
        if not sep:
            raise ScenarioError(f"bad sample token {tok!r}, expected s:kappa")
        pairs.append((float(s), float(k)))
    return tuple(pairs)


def scenario_from_mapping(kv: dict[str, str]) -> Scenario:
    """Build a Scenario from already-parsed key/value strings."""
    for key in kv:
        if key not in KNOWN_KEYS:
            raise ScenarioError(f"unknown key {key!r}")

    def fget(key: str, default: float | None = None) -> float:
        if key in kv:
            try:
                return float(kv[key])
            except ValueError as exc:
                raise ScenarioError(f"key {key}: {exc}") from None
        if default is None:
            raise ScenarioError(f"missing required key {key!r}")
        return default

    d = fget("vehicle.d")
    kappa_max = fget("path.kappa_max")

    path_kind = kv.get("path.kind", "constant")
    path = PathSpec(
        kind=path_kind,
        kappa_max=kappa_max,
        samples=_parse_samples(kv["path.samples"]) if "path.samples" in kv else (),
        amplitude=fget("path.amplitude", kappa_max if path_kind == "sinusoidal" else 0.0),
        period=fget("path.period", 0.0),
        s0=fget("path.s0", 0.0),
    )
    speed = SpeedProfile(
        kind=kv.get("speed.kind", "constant"),
        v_base=fget("speed.v"),
        amplitude=fget("speed.amplitude", 0.0),
        period=fget("speed.period", 1.0),
    )
    gains = GainSet(
        c0=fget("gains.c0"),
        c1=fget("gains.c1"),
        c2=fget("gains.c2"),
        m=fget("gains.m"),
        n=fget("gains.n"),
        beta=fget("gains.beta"),
        rho=fget("gains.rho"),
        d=d,
        kappa_max=kappa_max,
    )
    noise = PerturbationSpec(
        kind=kv.get("noise.kind", "none"),
        kappa_amp=fget("noise.kappa_amp", 0.0),
        vx_amp=fget("noise.vx_amp", 0.0),
        frequency=fget("noise.frequency", 1.0),
    )

    has_err = any(f"init.{k}" in kv for k in ("e_p", "e_q", "xi"))
    has_pose = any(f"init.{k}" in kv for k in ("x", "y", "psi"))
    if has_err == has_pose:
        raise ScenarioError("specify exactly one of init.{e_p,e_q,xi} or init.{x,y,psi}")
    init_errors = init_pose = None
    if has_err:
        init_errors = (fget("init.e_p", 0.0), fget("init.e_q", 0.0), fget("init.xi", 0.0))
    else:
        init_pose = (fget("init.x", 0.0), fget("init.y", 0.0), fget("init.psi", 0.0))

    try:
        return Scenario(
            gains=gains,
            path=path,
            speed=speed,
            variant=kv.get("controller.variant", "saturated"),
            p_r0=fget("init.p_r", 0.0),
            q_r0=fget("init.q_r", 0.0),
            psi_r0=fget("init.psi_r", 0.0),
            init_errors=init_errors,
            init_pose=init_pose,
            v0=fget("init.v", 0.0),
            dt=fget("sim.dt", 1e-3),
            duration=fget("sim.duration", 20.0),
            noise=noise,
            seed=int(kv.get("sim.seed", "0")),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def load_scenario(path: str, overrides: dict[str, str] | None = None) -> Scenario:
    with open(path) as fh:
        kv = parse_kv_lines(fh.read())
    if overrides:
        for key, val in overrides.items():
            if key not in KNOWN_KEYS:
                raise ScenarioError(f"unknown override key {key!r}")
            kv[key] = val
    sc = scenario_from_mapping(kv)
    if not math.isfinite(sc.dt):
        raise ScenarioError("sim.dt must be finite")
    return sc
