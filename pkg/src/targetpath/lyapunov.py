"""Energy function for the rotated error dynamics and its decrease bounds.

V(y1, y2, xi) = (y1^2 + y2^2)/2 + F(xi) y2 / C0 + N xi^2 / (2 C0), where
F is the sine integral.  On the trapped set |xi| < 2*rho the decrease of V
is bounded below by two separately sign-definite forms in (y1, xi) and
(y2, xi); this module evaluates all of them and checks logged trajectories
against the predicted decrease.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .gains import GainSet
from .kinematics import ErrorCoords
from .steering import saturate


def sine_integral(xi: float) -> float:
    """F(xi) = integral of sin(s)/s from 0 to xi (odd, |F(xi)| <= |xi|)."""
    return float(sici(xi)[0])


def _sinc(xi: float) -> float:
    return math.sin(xi) / xi if abs(xi) > 1e-9 else 1.0 - xi * xi / 6.0


def energy(err: ErrorCoords, g: GainSet) -> float:
    """Evaluate V at the given rotated error coordinates."""
    if g.n <= 1.0 / g.c0:
        raise ValueError("requires N > 1/C0 for positive definiteness")
    return (
        0.5 * (err.y1**2 + err.y2**2)
        + sine_integral(err.xi) * err.y2 / g.c0
        + g.n * err.xi**2 / (2.0 * g.c0)
    )


def energy_rate(err: ErrorCoords, y1_dot: float, y2_dot: float, xi_dot: float, g: GainSet) -> float:
    """Chain-rule derivative of V given rates of (y1, y2, xi)."""
    f = sine_integral(err.xi)
    return (
        err.y1 * y1_dot
        + err.y2 * y2_dot
        + (_sinc(err.xi) * xi_dot * err.y2 + f * y2_dot) / g.c0
        + g.n * err.xi * xi_dot / g.c0
    )


def _require_trapped(xi: float, g: GainSet) -> None:
    if abs(xi) >= 2.0 * g.rho:
        raise ValueError(f"|xi| = {abs(xi):g} outside the trapped band (< {2.0 * g.rho:g})")


def decay_bound_y1(y1: float, xi: float, g: GainSet) -> float:
    """Lower bound on the (y1, xi) part of -V_dot, valid for |xi| < 2*rho."""
    _require_trapped(xi, g)
    return (
        g.c1 * y1 * saturate(g.m * y1)
        - (3.0 + g.c1) * g.kappa_max / g.c0 * abs(xi * y1)
        - 0.5 * xi**2 * abs(y1)
        + 0.5 * (g.n - 1.0 / g.c0) * xi**2
    )


def coupling_form(z: float, xi: float, g: GainSet) -> float:
    """Quadratic form in (z, xi) whose definiteness yields the y2 bound."""
    return (
        (1.0 - 2.0 * g.rho**2 / 3.0) * z**2
        - g.c2 * g.n * abs(xi * z)
        + g.c2 / g.rho * (g.n - 1.0 / g.c0) * xi**2
    )


def decay_bound_y2(y2: float, xi: float, g: GainSet) -> float:
    """Lower bound on the (y2, xi) part of -V_dot, valid for |xi| < 2*rho."""
    _require_trapped(xi, g)
    sz = saturate(g.c2 * y2)
    return (
        0.5 * (g.n - 1.0 / g.c0) * xi**2
        - g.rho * g.n * abs(xi * sz)
        + (1.0 - 2.0 * g.rho**2 / 3.0) * g.rho * y2 * sz
    )


def decay_bound_y2_split(y2: float, xi: float, g: GainSet) -> tuple[float, float]:
    """Exact split of the y2 bound: nonnegative slack + quadratic part.

    The slack vanishes while the saturation is inactive; the quadratic part
    is a definite form in (sat(C2*y2), xi) whenever N lies inside the
    corrected coupling interval (see gains.n_interval_definite).
    """
    _require_trapped(xi, g)
    sz = saturate(g.c2 * y2)
    slack = (1.0 - 2.0 * g.rho**2 / 3.0) * g.rho * (y2 - sz / g.c2) * sz
    quad = (
        0.5 * (g.n - 1.0 / g.c0) * xi**2
        - g.rho * g.n * abs(xi * sz)
        + (1.0 - 2.0 * g.rho**2 / 3.0) * g.rho * sz**2 / g.c2
    )
    return slack, quad


def positivity_grid(
    g: GainSet, y_range: tuple[float, float] = (-10.0, 10.0), n_y: int = 401, n_xi: int = 401
) -> dict:
    """Sweep both decay bounds over a grid of (y, xi) with |xi| < 2*rho.

    Returns the grids, minima and their locations.  The xi grid excludes
    the open-interval endpoints.
    """
    ys = np.linspace(y_range[0], y_range[1], n_y)
    xis = np.linspace(-2.0 * g.rho, 2.0 * g.rho, n_xi + 2)[1:-1]
    a = np.empty((n_y, n_xi))
    b = np.empty((n_y, n_xi))
    for i, yv in enumerate(ys):
        for j, xv in enumerate(xis):
            a[i, j] = decay_bound_y1(yv, xv, g)
            b[i, j] = decay_bound_y2(yv, xv, g)
    return {
        "y": ys,
        "xi": xis,
        "a": a,
        "b": b,
        "a_min": float(a.min()),
        "b_min": float(b.min()),
    }


# consecutive in-band steps required before the trapping time is declared
T0_SUSTAIN_STEPS = 10


def detect_trap_time(t: np.ndarray, xi: np.ndarray, rho: float) -> float | None:
    """First time |xi| < 2*rho holds for T0_SUSTAIN_STEPS consecutive steps."""
    inside = np.abs(xi) < 2.0 * rho
    run = 0
    for k in range(len(t)):
        run = run + 1 if inside[k] else 0
        if run == T0_SUSTAIN_STEPS:
            return float(t[k - T0_SUSTAIN_STEPS + 1])
    return None


@dataclass(frozen=True)
class TraceReport:
    t0: float | None
    trapped_after_t0: bool
    monotone_after_t0: bool
    decrease_ok: bool
    max_fd_gap: float
    n_smooth: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return (
            self.t0 is not None
            and self.trapped_after_t0
            and self.monotone_after_t0
            and self.decrease_ok
        )


def check_trace(log, g: GainSet, decrease_tol: float = 1e-9) -> TraceReport:
    """Verify the predicted decrease properties on a simulation log.

    Checks, after the detected trapping time: |xi| stays inside the band,
    V is non-increasing, the analytic rate obeys
    V_dot <= -(y1 bound) - (y2 bound) + tol, and the analytic rate matches
    a centered finite difference of V (divided by v_d) on smooth segments.
    """
    t = np.asarray(log.t)
    xi = np.asarray(log.xi)
    violations: list[str] = []
    t0 = detect_trap_time(t, xi, g.rho)
    if t0 is None:
        return TraceReport(None, False, False, False, math.nan, 0, ["trapping time never reached"])
    k0 = int(np.searchsorted(t, t0))

    trapped = bool(np.all(np.abs(xi[k0:]) < 2.0 * g.rho))
    if not trapped:
        k_bad = k0 + int(np.argmax(np.abs(xi[k0:]) >= 2.0 * g.rho))
        violations.append(f"xi left the band at t={t[k_bad]:.6g}")

    V = np.asarray(log.V)
    dV = np.diff(V[k0:])
    mono = bool(np.all(dV <= 1e-14 * np.maximum(V[k0:-1], 1.0)))
    if not mono:
        k_bad = k0 + int(np.argmax(dV > 1e-14 * np.maximum(V[k0:-1], 1.0)))
        violations.append(f"V increased at t={t[k_bad]:.6g}")

    decrease_ok = True
    y1 = np.asarray(log.y1)
    y2 = np.asarray(log.y2)
    vdot = np.asarray(log.Vdot)
    for k in range(k0, len(t)):
        if abs(xi[k]) >= 2.0 * g.rho:
            continue
        bound = -decay_bound_y1(y1[k], xi[k], g) - decay_bound_y2(y2[k], xi[k], g)
        if vdot[k] > bound + decrease_tol:
            decrease_ok = False
            violations.append(f"V_dot above decrease bound at t={t[k]:.6g}")
            break

    # centered finite difference of V in rescaled time, on smooth segments
    dt = float(t[1] - t[0])
    v_d = np.asarray(log.v_d)
    inner = np.abs(g.c0 / g.beta * (xi + g.rho * np.clip(g.c2 * y2, -1.0, 1.0)))
    smooth = (
        (np.abs(g.m * y1) < 0.98) & (np.abs(g.c2 * y2) < 0.98) & (inner < 0.98)
    )
    max_gap = 0.0
    n_smooth = 0
    for k in range(max(k0, 1), len(t) - 1):
        if not (smooth[k - 1] and smooth[k] and smooth[k + 1]):
            continue
        fd = (V[k + 1] - V[k - 1]) / (2.0 * dt) / v_d[k]
        gap = abs(fd - vdot[k])
        n_smooth += 1
        if gap > max_gap:
            max_gap = gap
    return TraceReport(t0, trapped, mono, decrease_ok, max_gap, n_smooth, violations)
