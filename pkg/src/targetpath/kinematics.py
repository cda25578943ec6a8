"""Vehicle, target-point and error kinematics, and the coupled closed loop.

The vehicle is a unicycle whose steering input is a geodesic curvature
state v.  The controlled entity is the target point rigidly attached a
distance d ahead of the vehicle; its pose (p, q, theta) is always derived
algebraically from the vehicle pose, never integrated separately (the
direct target dynamics exist only as a consistency oracle).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .gains import GainSet
from .path_model import PathSpec, ReferenceState, reference_derivative
from .steering import SATURATED, curvature_ode_rhs, feedback


class VehicleState(NamedTuple):
    x: float
    y: float
    psi: float
    v: float  # steering curvature state, 1/m


class TargetState(NamedTuple):
    p: float
    q: float
    theta: float
    v_d: float


class ErrorCoords(NamedTuple):
    e_p: float
    e_q: float
    xi: float
    y1: float
    y2: float


class WorldState(NamedTuple):
    """Full integrated state: reference unicycle + vehicle."""

    p_r: float
    q_r: float
    psi_r: float
    s: float
    x: float
    y: float
    psi: float
    v: float

    @property
    def reference(self) -> ReferenceState:
        return ReferenceState(self.p_r, self.q_r, self.psi_r, self.s)

    @property
    def vehicle(self) -> VehicleState:
        return VehicleState(self.x, self.y, self.psi, self.v)


@dataclass(frozen=True)
class SpeedProfile:
    """Vehicle forward speed V_x(t), bounded away from zero."""

    kind: str = "constant"
    v_base: float = 1.0
    amplitude: float = 0.0
    period: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "sinusoidal"):
            raise ValueError(f"unknown speed kind {self.kind!r}")
        if self.v_base <= 0.0:
            raise ValueError("base speed must be positive")
        if self.kind == "sinusoidal":
            if not (0.0 <= self.amplitude < self.v_base):
                raise ValueError("speed amplitude must satisfy 0 <= a < v_base")
            if self.period <= 0.0:
                raise ValueError("speed period must be positive")

    @property
    def v_min(self) -> float:
        return self.v_base - self.amplitude if self.kind == "sinusoidal" else self.v_base

    @property
    def v_max(self) -> float:
        return self.v_base + self.amplitude if self.kind == "sinusoidal" else self.v_base

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return self.v_base
        return self.v_base + self.amplitude * math.sin(2.0 * math.pi * t / self.period)


def target_from_vehicle(veh: VehicleState, d: float, Vx: float) -> TargetState:
    """Pose and speed of the point rigidly attached d ahead of the vehicle."""
    if d <= 0.0:
        raise ValueError("d must be positive")
    if Vx <= 0.0:
        raise ValueError("Vx must be positive")
    p = veh.x + d * math.cos(veh.psi)
    q = veh.y + d * math.sin(veh.psi)
    theta = veh.psi + math.atan(d * veh.v)
    v_d = Vx * math.sqrt(1.0 + (veh.v * d) ** 2)
    return TargetState(p, q, theta, v_d)


def target_derivative(veh: VehicleState, d: float, Vx: float, v: float) -> tuple[float, float, float]:
    """Direct (p_dot, q_dot, psi_dot) of the target point; oracle use only."""
    if d <= 0.0:
        raise ValueError("d must be positive")
    if Vx <= 0.0:
        raise ValueError("Vx must be positive")
    c, s = math.cos(veh.psi), math.sin(veh.psi)
    return (Vx * c - d * Vx * v * s, Vx * s + d * Vx * v * c, Vx * v)


def error_coords(target: TargetState, ref: ReferenceState) -> ErrorCoords:
    """Position/heading errors and their rotation into the reference frame."""
    e_p = target.p - ref.p_r
    e_q = target.q - ref.q_r
    xi = target.theta - ref.psi_r
    c, s = math.cos(ref.psi_r), math.sin(ref.psi_r)
    y1 = e_p * c + e_q * s
    y2 = -e_p * s + e_q * c
    return ErrorCoords(e_p, e_q, xi, y1, y2)


class PerturbationSample(NamedTuple):
    """Additive measurement offsets seen by the controller for one step."""

    d_kappa: float
    d_vx: float


NO_NOISE = PerturbationSample(0.0, 0.0)


class StepEval(NamedTuple):
    """Everything computed at one state: controls, errors, derivatives."""

    deriv: WorldState
    target: TargetState
    err: ErrorCoords
    u1: float
    u2: float
    u: float
    omega: float
    v_d: float
    kappa: float


def evaluate_closed_loop(
    world: WorldState,
    gains: GainSet,
    path: PathSpec,
    Vx: float,
    noise: PerturbationSample = NO_NOISE,
    variant: str = SATURATED,
) -> StepEval:
    """Evaluate controls and the full state derivative at one world state.

    Measurement noise offsets apply only to what the controller reads (the
    path curvature entering omega and the speed entering the commanded u);
    the plant always integrates the true quantities.
    """
    d = gains.d
    kappa = path.curvature_at(world.s)
    kappa_meas = kappa + noise.d_kappa
    vx_meas = Vx + noise.d_vx

    target = target_from_vehicle(world.vehicle, d, Vx)
    err = error_coords(target, world.reference)
    u1, u2 = feedback(err, gains, variant)

    stretch = math.sqrt(1.0 + (world.v * d) ** 2)
    u = vx_meas * stretch * (1.0 + u1)
    omega = kappa_meas * (1.0 + u1) + u2
    vdot = curvature_ode_rhs(world.v, omega, d, Vx)

    ref_dot = reference_derivative(world.reference, u, path)
    deriv = WorldState(
        ref_dot.p_r,
        ref_dot.q_r,
        ref_dot.psi_r,
        ref_dot.s,
        Vx * math.cos(world.psi),
        Vx * math.sin(world.psi),
        Vx * world.v,
        vdot,
    )
    return StepEval(deriv, target, err, u1, u2, u, omega, target.v_d, kappa)


def closed_loop_rhs(
    world: WorldState,
    gains: GainSet,
    path: PathSpec,
    Vx: float,
    noise: PerturbationSample = NO_NOISE,
    variant: str = SATURATED,
) -> WorldState:
    """Time derivative of the coupled reference + vehicle state."""
    return evaluate_closed_loop(world, gains, path, Vx, noise, variant).deriv
