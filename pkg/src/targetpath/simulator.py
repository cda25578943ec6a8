"""Fixed-step closed-loop simulation with deterministic logging.

One scenario = geometry + speed profile + path + gains + initial condition
+ integration grid + optional measurement noise.  Integration is classical
4th-order Runge-Kutta on the 8 coupled states, with the noise sample held
constant across the substeps of each step.  Every step is logged, and the
log can be written as a reproducible CSV (identical scenario and seed give
identical bytes).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .gains import ConditionReport, GainSet, check_conditions
from .kinematics import (
    NO_NOISE,
    PerturbationSample,
    SpeedProfile,
    WorldState,
    closed_loop_rhs,
    evaluate_closed_loop,
)
from .lyapunov import detect_trap_time, energy, energy_rate
from .path_model import PathSpec
from .steering import SATURATED, VARIANTS, steering_budget

CSV_COLUMNS = (
    "t", "x", "y", "psi", "v", "p", "q", "theta",
    "p_r", "q_r", "psi_r", "s", "e_p", "e_q", "xi",
    "y1", "y2", "u1", "u2", "u", "omega", "v_d", "V", "Vdot",
)

# convergence thresholds for the summary's t_conv
CONV_POS = 0.5   # m, on ||(e_p, e_q)||
CONV_ANG = 0.05  # rad, on |xi|


class IntegrationError(RuntimeError):
    """Raised when the derivative or state stops being finite."""


@dataclass(frozen=True)
class PerturbationSpec:
    kind: str = "none"
    kappa_amp: float = 0.0
    vx_amp: float = 0.0
    frequency: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "uniform", "sinusoidal"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kappa_amp < 0.0 or self.vx_amp < 0.0:
            raise ValueError("noise amplitudes must be >= 0")
        if self.kind == "sinusoidal" and self.frequency <= 0.0:
            raise ValueError("sinusoidal noise needs frequency > 0")


def perturb(
    kappa: float, Vx: float, spec: PerturbationSpec, t: float, rng: random.Random
) -> tuple[float, float]:
    """Measured (kappa, Vx) as seen by the controller at time t."""
    dk, dv = _noise_sample(spec, t, rng)
    return kappa + dk, Vx + dv


def _noise_sample(spec: PerturbationSpec, t: float, rng: random.Random) -> PerturbationSample:
    if spec.kind == "none":
        return NO_NOISE
    if spec.kind == "sinusoidal":
        w = math.sin(2.0 * math.pi * spec.frequency * t)
        return PerturbationSample(spec.kappa_amp * w, spec.vx_amp * w)
    return PerturbationSample(
        spec.kappa_amp * (2.0 * rng.random() - 1.0),
        spec.vx_amp * (2.0 * rng.random() - 1.0),
    )


@dataclass(frozen=True)
class Scenario:
    gains: GainSet
    path: PathSpec
    speed: SpeedProfile
    variant: str = SATURATED
    # initial reference pose
    p_r0: float = 0.0
    q_r0: float = 0.0
    psi_r0: float = 0.0
    # exactly one initialization style: errors or vehicle pose
    init_errors: tuple[float, float, float] | None = None  # (e_p, e_q, xi)
    init_pose: tuple[float, float, float] | None = None    # (x, y, psi)
    v0: float = 0.0
    dt: float = 1e-3
    duration: float = 20.0
    noise: PerturbationSpec = field(default_factory=PerturbationSpec)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown controller variant {self.variant!r}")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.duration < self.dt:
            raise ValueError("duration must be >= dt")
        if (self.init_errors is None) == (self.init_pose is None):
            raise ValueError("exactly one of init_errors / init_pose must be given")
        if self.noise.vx_amp >= self.speed.v_min:
            raise ValueError("vx noise amplitude must stay below V_min")

    def initial_state(self) -> WorldState:
        d = self.gains.d
        s0 = self.path.s0
        if self.init_pose is not None:
            x0, y0, psi0 = self.init_pose
        else:
            e_p0, e_q0, xi0 = self.init_errors
            # invert the target attachment with theta0 = psi0 + atan(d*v0)
            psi0 = self.psi_r0 + xi0 - math.atan(d * self.v0)
            x0 = self.p_r0 + e_p0 - d * math.cos(psi0)
            y0 = self.q_r0 + e_q0 - d * math.sin(psi0)
        return WorldState(self.p_r0, self.q_r0, self.psi_r0, s0, x0, y0, psi0, self.v0)


@dataclass
class TrajectoryLog:
    """Column-per-quantity record of a run, plus its summary block."""

    columns: dict[str, np.ndarray]
    summary: dict[str, object]
    gain_report: ConditionReport

    def __getattr__(self, name: str):
        try:
            return self.columns[name]
        except KeyError:
            raise AttributeError(name) from None

    def __len__(self) -> int:
        return len(self.columns["t"])

    def summary_lines(self) -> list[str]:
        out = []
        for k, v in self.summary.items():
            if isinstance(v, float):
                out.append(f"# {k} = {v:.9g}")
            else:
                out.append(f"# {k} = {v}")
        return out

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            cols = [self.columns[c] for c in CSV_COLUMNS]
            for i in range(len(self)):
                fh.write(",".join(format(col[i], ".17g") for col in cols) + "\n")
            for line in self.summary_lines():
                fh.write(line + "\n")

    @staticmethod
    def read_csv(path: str) -> "TrajectoryLog":
        with open(path) as fh:
            header = fh.readline().strip()
            names = tuple(header.split(","))
            if names != CSV_COLUMNS:
                raise ValueError(f"unexpected CSV header: {header!r}")
            rows = []
            summary: dict[str, object] = {}
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].partition("=")
                    summary[key.strip()] = val.strip()
                    continue
                vals = line.split(",")
                if len(vals) != len(names):
                    raise ValueError("malformed CSV row")
                rows.append([float(v) for v in vals])
        if not rows:
            raise ValueError("CSV contains no data rows")
        arr = np.asarray(rows)
        cols = {name: arr[:, i] for i, name in enumerate(names)}
        return TrajectoryLog(cols, summary, None)


def step(world: WorldState, scenario: Scenario, t: float,
         noise: PerturbationSample = NO_NOISE) -> WorldState:
    """One RK4 update of the coupled state over scenario.dt."""
    g, path, var = scenario.gains, scenario.path, scenario.variant
    dt = scenario.dt

    def rhs(w: WorldState, tt: float) -> WorldState:
        return closed_loop_rhs(w, g, path, scenario.speed.value(tt), noise, var)

    k1 = rhs(world, t)
    k2 = rhs(WorldState(*(w + 0.5 * dt * k for w, k in zip(world, k1))), t + 0.5 * dt)
    k3 = rhs(WorldState(*(w + 0.5 * dt * k for w, k in zip(world, k2))), t + 0.5 * dt)
    k4 = rhs(WorldState(*(w + dt * k for w, k in zip(world, k3))), t + dt)
    nxt = WorldState(
        *(w + dt / 6.0 * (a + 2.0 * b + 2.0 * c + e)
          for w, a, b, c, e in zip(world, k1, k2, k3, k4))
    )
    if not all(math.isfinite(v) for v in nxt):
        raise IntegrationError(f"non-finite state after step at t={t:g}: {nxt}")
    return nxt


def run(scenario: Scenario) -> TrajectoryLog:
    """Integrate the scenario and return the full log with summary."""
    g = scenario.gains
    report = check_conditions(g)
    budget_ok = report.entry("forward_gain_budget").ok and report.entry("turn_gain_budget").ok
    budget = steering_budget(g.d, g.kappa_max)
    guard = scenario.variant == SATURATED and budget_ok

    rng = random.Random(scenario.seed)
    n_steps = round(scenario.duration / scenario.dt)
    n_rows = n_steps + 1
    data = np.empty((n_rows, len(CSV_COLUMNS)))

    world = scenario.initial_state()
    dt = scenario.dt
    budget_violations = 0
    max_domega = 0.0
    min_vd = math.inf

    for k in range(n_rows):
        t = k * dt
        ns = _noise_sample(scenario.noise, t, rng)
        vx = scenario.speed.value(t)
        ev = evaluate_closed_loop(world, g, scenario.path, vx, ns, scenario.variant)
        if not all(math.isfinite(x) for x in ev.deriv):
            raise IntegrationError(f"non-finite derivative at t={t:g}: state={world}")

        load = abs(ev.u1) / g.d + abs(ev.u2)
        if load > budget * (1.0 + 1e-12):
            if guard:
                raise IntegrationError(
                    f"steering budget exceeded at t={t:g}: {load:g} > {budget:g}"
                )
            budget_violations += 1
        domega = abs(g.d * ev.omega)
        if domega > max_domega:
            max_domega = domega
        if ev.v_d < min_vd:
            min_vd = ev.v_d

        err = ev.err
        # exact rates of the rotated errors, for the analytic energy rate
        c_r, s_r = math.cos(world.psi_r), math.sin(world.psi_r)
        ep_dot = ev.v_d * math.cos(ev.target.theta) - ev.u * c_r
        eq_dot = ev.v_d * math.sin(ev.target.theta) - ev.u * s_r
        psir_dot = ev.u * ev.kappa
        y1_dot = ep_dot * c_r + eq_dot * s_r + psir_dot * err.y2
        y2_dot = -ep_dot * s_r + eq_dot * c_r - psir_dot * err.y1
        xi_dot = ev.v_d * ev.omega - psir_dot
        V = energy(err, g)
        Vdot = energy_rate(err, y1_dot, y2_dot, xi_dot, g) / ev.v_d

        data[k] = (
            t, world.x, world.y, world.psi, world.v,
            ev.target.p, ev.target.q, ev.target.theta,
            world.p_r, world.q_r, world.psi_r, world.s,
            err.e_p, err.e_q, err.xi, err.y1, err.y2,
            ev.u1, ev.u2, ev.u, ev.omega, ev.v_d, V, Vdot,
        )
        if k < n_steps:
            world = step(world, scenario, t, ns)

    cols = {name: data[:, i] for i, name in enumerate(CSV_COLUMNS)}
    summary = _summarize(cols, g, report, budget_violations, max_domega, min_vd)
    return TrajectoryLog(cols, summary, report)


def convergence_time(t: np.ndarray, e_p: np.ndarray, e_q: np.ndarray, xi: np.ndarray) -> float | None:
    """First time after which the errors stay inside the convergence box."""
    ok = (np.hypot(e_p, e_q) < CONV_POS) & (np.abs(xi) < CONV_ANG)
    if not ok[-1]:
        return None
    bad = np.nonzero(~ok)[0]
    if len(bad) == 0:
        return 0.0
    return float(t[bad[-1] + 1])


def _summarize(cols, g: GainSet, report: ConditionReport,
               budget_violations: int, max_domega: float, min_vd: float) -> dict:
    t_conv = convergence_time(cols["t"], cols["e_p"], cols["e_q"], cols["xi"])
    t0 = detect_trap_time(cols["t"], cols["xi"], g.rho)
    return {
        "t_conv": t_conv if t_conv is not None else "not-converged",
        "t0": t0 if t0 is not None else "not-reached",
        "max_abs_d_omega": max_domega,
        "min_v_d": min_vd,
        "max_abs_v": float(np.abs(cols["v"]).max()),
        "budget_violations": budget_violations,
        "gain_conditions": "pass" if report.ok else "FAIL:" + "+".join(
            e for e in report.failures() if e != "curvature_ratio_lower"
        ),
    }
