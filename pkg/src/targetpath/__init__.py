"""Target-point path following for a unicycle vehicle: controller, gain
synthesis, energy-function verification, and a deterministic simulator."""

__version__ = "0.1.0"

from .gains import GainSet, check_conditions, synthesize_gains
from .kinematics import (
    ErrorCoords,
    SpeedProfile,
    TargetState,
    VehicleState,
    WorldState,
    closed_loop_rhs,
    error_coords,
    target_from_vehicle,
)
from .path_model import PathSpec, ReferenceState, curvature_at, reference_derivative
from .simulator import PerturbationSpec, Scenario, TrajectoryLog, run
from .steering import curvature_ode_rhs, feedback, saturate

__all__ = [
    "GainSet",
    "check_conditions",
    "synthesize_gains",
    "ErrorCoords",
    "SpeedProfile",
    "TargetState",
    "VehicleState",
    "WorldState",
    "closed_loop_rhs",
    "error_coords",
    "target_from_vehicle",
    "PathSpec",
    "ReferenceState",
    "curvature_at",
    "reference_derivative",
    "PerturbationSpec",
    "Scenario",
    "TrajectoryLog",
    "run",
    "curvature_ode_rhs",
    "feedback",
    "saturate",
]
