"""Saturated steering laws and the curvature-state differential equation.

The controller commands two dimensionless inputs: u1 scales the reference
forward speed, u2 steers the target-point heading error.  Both are bounded
through the standard unit saturation.  The actual steering curvature v of
the vehicle is a state; its evolution recovers the commanded target-point
curvature omega.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, NamedTuple

if TYPE_CHECKING:
    from .gains import GainSet
    from .kinematics import ErrorCoords

SATURATED = "saturated"
UNSATURATED_U2 = "remark3"
VARIANTS = (SATURATED, UNSATURATED_U2)


class ControlSample(NamedTuple):
    u1: float
    u2: float
    u: float
    omega: float
    vdot: float


def saturate(x: float) -> float:
    """Unit saturation x / max(1, |x|)."""
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


def feedback(err: "ErrorCoords", gains: "GainSet", variant: str = SATURATED) -> tuple[float, float]:
    """Compute (u1, u2) from the rotated error coordinates.

    u1 = C1 * sat(M * y1); u2 opposes xi + rho * sat(C2 * y2), either
    saturated at +-beta or left unsaturated ("remark3").
    """
    u1 = gains.c1 * saturate(gains.m * err.y1)
    inner = err.xi + gains.rho * saturate(gains.c2 * err.y2)
    if variant == SATURATED:
        u2 = gains.beta * saturate(-(gains.c0 / gains.beta) * inner)
    elif variant == UNSATURATED_U2:
        u2 = -gains.c0 * inner
    else:
        raise ValueError(f"unknown controller variant {variant!r}")
    return u1, u2


def steering_budget(d: float, kappa_max: float) -> float:
    """Maximum admissible |u1|/d + |u2| keeping the curvature state bounded."""
    if d <= 0.0:
        raise ValueError("d must be positive")
    if d * kappa_max >= 1.0:
        raise ValueError("requires d * kappa_max < 1")
    return (1.0 - d * kappa_max) / d


def within_steering_budget(u1: float, u2: float, d: float, kappa_max: float) -> bool:
    """True iff |u1|/d + |u2| stays within the non-explosion budget."""
    return abs(u1) / d + abs(u2) <= steering_budget(d, kappa_max)


def curvature_ode_rhs(v: float, omega: float, d: float, Vx: float) -> float:
    """Rate of change of the steering curvature state v under command omega."""
    if d <= 0.0:
        raise ValueError("d must be positive")
    if Vx <= 0.0:
        raise ValueError("Vx must be positive")
    w = 1.0 + (v * d) ** 2
    return (w / d) * Vx * (math.sqrt(w) * omega - v)
