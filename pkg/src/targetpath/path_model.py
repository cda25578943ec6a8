"""Reference path as a virtual unicycle driven by a commanded forward speed.

The followed curve is described by its geodesic curvature as a function of
arclength.  Three profile families are supported: constant curvature,
piecewise-linear interpolation of (arclength, curvature) samples, and a
sinusoidal profile kappa(s) = kappa_max * sin(2*pi*s / period).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class ReferenceState(NamedTuple):
    """Pose of the virtual unicycle tracing the path, plus its arclength."""

    p_r: float
    q_r: float
    psi_r: float
    s: float


@dataclass(frozen=True)
class PathSpec:
    """Geodesic curvature profile with a declared bound.

    kind: one of "constant", "piecewise", "sinusoidal".
    samples: (s_i, kappa_i) pairs for the piecewise family; for "constant"
        the single curvature value is taken from `amplitude`.
    amplitude / period: sinusoidal parameters (amplitude defaults to
        kappa_max).
    s0: initial arclength offset.
    """

    kind: str
    kappa_max: float
    samples: Sequence[tuple[float, float]] = field(default_factory=tuple)
    amplitude: float = 0.0
    period: float = 0.0
    s0: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "piecewise", "sinusoidal"):
            raise ValueError(f"unknown path kind {self.kind!r}")
        if self.kappa_max < 0.0:
            raise ValueError("kappa_max must be >= 0")
        if self.kind == "constant":
            if abs(self.amplitude) > self.kappa_max:
                raise ValueError("constant curvature exceeds kappa_max")
        elif self.kind == "sinusoidal":
            if self.period <= 0.0:
                raise ValueError("sinusoidal profile needs period > 0")
            if abs(self.amplitude) > self.kappa_max:
                raise ValueError("sinusoidal amplitude exceeds kappa_max")
        else:
            pts = tuple(self.samples)
            if len(pts) < 2:
                raise ValueError("piecewise profile needs >= 2 samples")
            ss = [p[0] for p in pts]
            if any(b <= a for a, b in zip(ss, ss[1:])):
                raise ValueError("sample arclengths must be strictly increasing")
            if any(abs(p[1]) > self.kappa_max for p in pts):
                raise ValueError("sample curvature exceeds kappa_max")
            object.__setattr__(self, "samples", pts)

    def curvature_at(self, s: float) -> float:
        """Curvature at arclength s; out-of-range s clamps to the boundary."""
        if not math.isfinite(s):
            raise ValueError("arclength must be finite")
        if self.kind == "constant":
            return self.amplitude
        if self.kind == "sinusoidal":
            return self.amplitude * math.sin(2.0 * math.pi * s / self.period)
        pts = self.samples
        if s <= pts[0][0]:
            return pts[0][1]
        if s >= pts[-1][0]:
            return pts[-1][1]
        i = bisect.bisect_right([p[0] for p in pts], s) - 1
        s0, k0 = pts[i]
        s1, k1 = pts[i + 1]
        return k0 + (k1 - k0) * (s - s0) / (s1 - s0)


def curvature_at(path: PathSpec, s: float) -> float:
    return path.curvature_at(s)


def reference_derivative(ref: ReferenceState, u: float, path: PathSpec) -> ReferenceState:
    """Time derivative of the reference unicycle under forward speed u > 0."""
    if u <= 0.0:
        raise ValueError("reference forward speed must be strictly positive")
    kappa = path.curvature_at(ref.s)
    return ReferenceState(
        u * math.cos(ref.psi_r),
        u * math.sin(ref.psi_r),
        u * kappa,
        u,
    )
