"""Controller constants: feasibility checking and deterministic synthesis.

The stability argument imposes a chain of inequalities on the constants
(C0, C1, C2, M, N, beta, rho) given the geometry (d, kappa_max).  The
checker evaluates every inequality literally and reports per-condition
verdicts; the synthesizer follows the standard recipe (fix C0, C2; pick N;
shrink rho; then choose beta, C1, M) and returns a set that passes the
checker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .steering import steering_budget

# relative margin used for strict comparisons, to avoid boundary flapping
_MARGIN = 1e-12


@dataclass(frozen=True)
class GainSet:
    c0: float
    c1: float
    c2: float
    m: float
    n: float
    beta: float
    rho: float
    d: float
    kappa_max: float

    def __post_init__(self) -> None:
        for name in ("c0", "c1", "c2", "m", "n", "beta", "rho", "d"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"gain {name} must be strictly positive")
        if self.kappa_max < 0.0:
            raise ValueError("kappa_max must be >= 0")

    @property
    def budget(self) -> float:
        return steering_budget(self.d, self.kappa_max)


@dataclass(frozen=True)
class ConditionEntry:
    name: str
    lhs: float
    rhs: float
    ok: bool
    informational: bool = False
    note: str = ""


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple[ConditionEntry, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)

    def entry(self, name: str) -> ConditionEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries if not e.informational)

    def failures(self) -> list[str]:
        return [e.name for e in self.entries if not e.ok]

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            verdict = "pass" if e.ok else ("info-fail" if e.informational else "FAIL")
            line = f"{e.name:<24s} lhs={e.lhs:< 16.9g} rhs={e.rhs:< 16.9g} {verdict}"
            if e.note:
                line += f"  ({e.note})"
            out.append(line)
        out.append(f"overall: {'pass' if self.ok else 'FAIL'}")
        return out


def c1_floor(g: "GainSet") -> float:
    """Lower bound on C1 keeping the y1-decay term dominant."""
    denom = 1.0 - 2.0 * g.rho * g.kappa_max / g.c0
    if denom <= 0.0:
        return math.inf
    return (6.0 * g.kappa_max * g.rho / g.c0 + 2.0 * g.rho**2) / denom


def m_floor(g: "GainSet") -> float:
    """Lower bound on M making the unsaturated y1 quadratic form definite."""
    if g.n <= 1.0 / g.c0:
        return math.inf
    num = 2.0 * (g.kappa_max * (3.0 + g.c1) / (2.0 * g.c0) + g.rho) ** 2
    return num / (g.c1 * (g.n - 1.0 / g.c0))


def coupling_capacity(rho: float) -> float:
    """(1 - 2*rho^2/3) / rho, the budget side of the y2/xi coupling bound."""
    return (1.0 - 2.0 * rho**2 / 3.0) / rho


def n_interval(c0: float, c2: float, rho: float) -> tuple[float, float]:
    """Open interval of N values satisfying the y2/xi coupling condition.

    Solves c2*N^2 - 4*K*(N - 1/c0) < 0 with K = (1 - 2*rho^2/3)/rho.
    Returns (nan, nan) when the interval is empty.
    """
    k = coupling_capacity(rho)
    disc = (4.0 * k) ** 2 - 16.0 * k * c2 / c0
    if disc <= 0.0:
        return (math.nan, math.nan)
    r = math.sqrt(disc)
    return ((4.0 * k - r) / (2.0 * c2), (4.0 * k + r) / (2.0 * c2))


def n_interval_definite(c0: float, c2: float, rho: float) -> tuple[float, float]:
    """Open interval of N actually making the y2 decay form sign-definite.

    The decay bound carries (N - 1/c0)*xi^2/2, so definiteness of the
    (sat(c2*y2), xi) quadratic needs c2*N^2 - 2*K*(N - 1/c0) < 0 with
    K = (1 - 2*rho^2/3)/rho: a factor 2 tighter than `n_interval`, and any
    N inside it also satisfies the looser version.  Returns (nan, nan)
    when empty.
    """
    k = coupling_capacity(rho)
    disc = (2.0 * k) ** 2 - 8.0 * k * c2 / c0
    if disc <= 0.0:
        return (math.nan, math.nan)
    r = math.sqrt(disc)
    return ((2.0 * k - r) / (2.0 * c2), (2.0 * k + r) / (2.0 * c2))


def check_conditions(g: GainSet) -> ConditionReport:
    """Evaluate every gain inequality and report per-condition verdicts.

    The curvature-ratio lower bound (9*rho < kappa_max/C0) is reported as
    informational: it is inconsistent with the rest of the derivation (the
    bound actually used downstream is 2*kappa_max*rho/C0 < 1, reported
    separately), so it does not affect the overall verdict.
    """
    entries: list[ConditionEntry] = []
    notes: list[str] = []
    bm = (1.0 - g.d * g.kappa_max) / g.d

    entries.append(ConditionEntry("geometry", g.d * g.kappa_max, 1.0, g.d * g.kappa_max < 1.0))
    entries.append(ConditionEntry("rho_half", g.rho, 0.5, g.rho <= 0.5 * (1.0 + _MARGIN)))
    entries.append(
        ConditionEntry("forward_gain_budget", g.c1, g.d * bm / 2.0, g.c1 <= g.d * bm / 2.0 * (1.0 + _MARGIN))
    )
    entries.append(ConditionEntry("turn_gain_budget", g.beta, bm / 2.0, g.beta <= bm / 2.0 * (1.0 + _MARGIN)))
    entries.append(
        ConditionEntry("heading_margin", 3.0 * g.rho * g.c0, g.beta, 3.0 * g.rho * g.c0 <= g.beta * (1.0 + _MARGIN))
    )

    ratio = g.kappa_max / g.c0
    left_ok = 9.0 * g.rho < ratio
    note = ""
    if g.kappa_max == 0.0:
        note = "degenerate kappa_max=0: ratio bound holds vacuously"
    entries.append(
        ConditionEntry(
            "curvature_ratio_lower",
            9.0 * g.rho,
            ratio,
            left_ok,
            informational=True,
            note=note or "informational: evaluated literally, see ratio_product",
        )
    )
    entries.append(ConditionEntry("curvature_ratio_upper", ratio, 1.0 / (2.0 * g.rho), ratio < 1.0 / (2.0 * g.rho)))
    entries.append(
        ConditionEntry("ratio_product", 2.0 * g.kappa_max * g.rho / g.c0, 1.0, 2.0 * g.kappa_max * g.rho / g.c0 < 1.0)
    )
    entries.append(ConditionEntry("c1_floor", c1_floor(g), g.c1, g.c1 > c1_floor(g) * (1.0 - _MARGIN)))
    entries.append(ConditionEntry("energy_positive", 1.0 / g.c0, g.n, g.n > (1.0 / g.c0) * (1.0 + _MARGIN)))
    entries.append(ConditionEntry("m_floor", m_floor(g), g.m, g.m > m_floor(g) * (1.0 - _MARGIN)))
    lhs5 = coupling_capacity(g.rho)
    rhs5 = g.c2 * g.n**2 / (4.0 * (g.n - 1.0 / g.c0)) if g.n > 1.0 / g.c0 else math.inf
    entries.append(ConditionEntry("coupling_budget", lhs5, rhs5, lhs5 > rhs5 * (1.0 + _MARGIN)))

    return ConditionReport(tuple(entries), tuple(notes))


def synthesize_gains(d: float, kappa_max: float, c0: float, c2: float) -> GainSet:
    """Construct a fully compliant gain set for the given geometry.

    Deterministic: rho is shrunk by the golden ratio from 1/2 until every
    rho-dependent condition is satisfiable, N is the midpoint of its
    feasible interval, beta and C1 take their budget values, and M is 1.5x
    its floor.  Raises ValueError when the geometry admits no solution.
    """
    if d <= 0.0 or c0 <= 0.0 or c2 <= 0.0:
        raise ValueError("d, c0, c2 must be strictly positive")
    if d * kappa_max >= 1.0:
        raise ValueError(f"infeasible geometry: d*kappa_max = {d * kappa_max:g} >= 1")
    bm = (1.0 - d * kappa_max) / d
    beta_cap = bm / 2.0
    c1 = min(d * bm / 2.0, 0.99)

    rho = 0.5
    shrink = 2.0 / (1.0 + math.sqrt(5.0))  # inverse golden ratio
    for _ in range(200):
        lo, hi = n_interval_definite(c0, c2, rho)
        feasible = (
            not math.isnan(lo)
            and 3.0 * rho * c0 <= beta_cap
            and 2.0 * kappa_max * rho / c0 < 1.0
            and c1 > c1_floor(GainSet(c0, c1, c2, 1.0, 2.0 / c0, beta_cap, rho, d, kappa_max))
        )
        if feasible:
            n = 0.5 * (lo + hi)
            candidate = GainSet(c0, c1, c2, 1.0, n, beta_cap, rho, d, kappa_max)
            m = 1.5 * m_floor(candidate)
            g = GainSet(c0, c1, c2, m, n, beta_cap, rho, d, kappa_max)
            report = check_conditions(g)
            if report.ok:
                return g
        rho *= shrink
    raise ValueError(
        f"gain synthesis failed for d={d:g}, kappa_max={kappa_max:g}, c0={c0:g}, c2={c2:g}: "
        "no admissible rho found"
    )
