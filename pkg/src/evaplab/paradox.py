"""Contradiction conditions for the evaporation firewall arguments.

Every evaluation returns a :class:`ParadoxReport` with a left-hand side, a
right-hand side and a signed ``margin``; a negative margin (or, for the
interior-saturation argument, a non-positive one) marks a contradiction.

Strict dominance ``x >> y`` is scored as ``y / x <= theta``; "well
approximated" means within a factor ``1 +/- theta`` (strictly). ``theta``
defaults to 0.01 and is carried on every report.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Any

from .page_curve import EvaporationParams, analytic_mutual_information, page_times, split_mutual_information

DEFAULT_THETA = 0.01

A1 = "1.a"
B1_EXT = "1.b(i)"
B1_INT = "1.b(ii)"
C1 = "1.c"
A2 = "2.a"
B2 = "2.b"
C2 = "2.c"


class Theorem(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T1_HOLOGRAPHIC = "T1-holographic"
    T1_MATTER = "T1-matter"
    T2_MATTER = "T2-matter"
    PAGETIME_MINIMAL = "pagetime-minimal"

    @classmethod
    def parse(cls, name: str) -> "Theorem":
        key = name.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown theorem {name!r}; choose from {[m.value for m in cls]}")


SWEEPABLE = (Theorem.T1, Theorem.T2, Theorem.T1_HOLOGRAPHIC)


def dominates(big: float, small: float, theta: float = DEFAULT_THETA) -> bool:
    """``big >> small`` under the ratio threshold."""
    if big <= 0:
        return small <= 0
    return small / big <= theta


# --------------------------------------------------------------------------
# 't Hooft atmosphere bound
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AtmosphereParams:
    mu: float
    s_bh: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.s_bh > 0:
            raise ValueError(f"s_bh must be positive, got {self.s_bh}")


@dataclass(frozen=True)
class ThooftBound:
    prefactor: float
    bound: float

    def negligible(self, theta: float = DEFAULT_THETA) -> bool:
        """Whether the prefactor is << 1."""
        return dominates(1.0, self.prefactor, theta)


def thooft_bound(a: AtmosphereParams) -> ThooftBound:
    """Entropy ceiling (4 mu S_BH)^(3/4) of a non-collapsing neighborhood.

    Returned as ``prefactor * s_bh`` with prefactor ``2 sqrt2 (mu^3/S_BH)^(1/4)``;
    evaluated in log space so astrophysical magnitudes do not overflow.
    """
    log_pref = 1.5 * math.log(2.0) + 0.75 * math.log(a.mu) - 0.25 * math.log(a.s_bh)
    prefactor = math.exp(log_pref)
    return ThooftBound(prefactor, prefactor * a.s_bh)


def stretched_horizon_allowance(mu: float, s_bh: float) -> float:
    """O(A^(1/2)) entropy between causal and stretched horizons, as sqrt(4 mu S_BH)."""
    return math.sqrt(4.0 * mu * s_bh)


# --------------------------------------------------------------------------
# Parameters and reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremParams:
    s_bh: float
    s_matter: float = 0.0
    mu: float = 1.0
    epsilon: float = 0.05
    eta: float = 0.05
    log_dim_b: float | None = None
    theta: float = DEFAULT_THETA
    stretched_horizon: bool = False

    def __post_init__(self):
        if not self.s_bh > 0:
            raise ValueError(f"s_bh must be positive, got {self.s_bh}")
        if not 0 <= self.s_matter <= self.s_bh:
            raise ValueError(f"s_matter must lie in [0, s_bh], got {self.s_matter}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        for name in ("epsilon", "eta"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise ValueError(f"{name} must lie in [0, 1), got {v}")
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.log_dim_b is not None and self.log_dim_b < 0:
            raise ValueError(f"log_dim_b must be non-negative, got {self.log_dim_b}")

    def check_r(self, r: float) -> None:
        if not 0 <= r <= self.s_bh:
            raise ValueError(f"r must lie in [0, s_bh={self.s_bh}], got {r}")

    def interior_log_dim(self, r: float) -> float:
        """log|B|: caller override, else the remaining Bekenstein-Hawking entropy."""
        return self.s_bh - r if self.log_dim_b is None else self.log_dim_b

    def atmosphere_allowance(self) -> float:
        return stretched_horizon_allowance(self.mu, self.s_bh) if self.stretched_horizon else 0.0

    @property
    def sweep_end(self) -> float:
        """Sweeps stop while the hole keeps an epsilon/2 fraction of its entropy."""
        return (1.0 - 0.5 * self.epsilon) * self.s_bh

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ParadoxReport:
    theorem: Theorem
    r: float
    lhs: float
    rhs: float
    margin: float
    contradiction: bool
    violated_assumption_options: tuple[str, ...]
    theta: float
    mi: float | None = None
    notes: tuple[str, ...] = ()
    extras: dict[str, float] = field(default_factory=dict, compare=False, hash=False)

    def point_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "contradiction": self.contradiction,
            "assumptions": list(self.violated_assumption_options),
        }


def _options(contradiction: bool, tags: tuple[str, ...]) -> tuple[str, ...]:
    return tags if contradiction else ()


def _mi(p: TheoremParams, r: float) -> float:
    return analytic_mutual_information(EvaporationParams(p.s_bh, p.s_matter, r))


def matter_held_inside(p: TheoremParams, r: float) -> float:
    """Matter-reference entanglement still inside the hole.

    All of it before the initial Page time, none after the final one,
    released linearly across the plateau.
    """
    final = page_times(EvaporationParams(p.s_bh, p.s_matter)).final
    return min(p.s_matter, max(0.0, final - r))


# --------------------------------------------------------------------------
# Theorem 1 and its variants
# --------------------------------------------------------------------------


def theorem1_report(p: TheoremParams, r: float) -> ParadoxReport:
    """Interior saturation check.

    The interior must hold at least half the early/late radiation mutual
    information (plus any matter entanglement it still holds). Once that
    fills its whole capacity log|B| there is nowhere inside left in a
    low-entropy state.
    """
    p.check_r(r)
    mi = _mi(p, r)
    capacity = p.interior_log_dim(r)
    required = 0.5 * mi + matter_held_inside(p, r)
    margin = capacity - required
    if abs(margin) <= 1e-12 * p.s_bh:
        margin = 0.0
    contradiction = margin <= 0.0
    notes = []
    if p.log_dim_b is not None and not _well_approximated(capacity, p.s_bh - r, p.theta):
        notes.append("log_dim_b override departs from the remaining entropy (1.c not assumed)")
    if margin < 0:
        notes.append("required entropy exceeds interior capacity")
    elif contradiction:
        notes.append("interior saturated: half of a maximally entangled state")
    return ParadoxReport(
        Theorem.T1, r, capacity, required, margin, contradiction,
        _options(contradiction, (A1, B1_EXT, B1_INT, C1)), p.theta, mi, tuple(notes),
    )


def holographic_variant(p: TheoremParams, r: float) -> ParadoxReport:
    """Theorem 1 without the interior-dimension assumption.

    The minimal area enclosing half S(B:R) is 4 * (half S(B:R)); it must sit
    well within the horizon, i.e. log|R'| >> A_min / 4.
    """
    p.check_r(r)
    mi = _mi(p, r)
    horizon = p.s_bh - r
    quarter_area = 0.5 * mi
    margin = p.theta * horizon - quarter_area
    contradiction = margin < 0.0
    return ParadoxReport(
        Theorem.T1_HOLOGRAPHIC, r, horizon, quarter_area, margin, contradiction,
        _options(contradiction, (A1, B1_EXT, B1_INT)), p.theta, mi,
        extras={"a_min": 4.0 * quarter_area, "strict_gap": horizon - quarter_area},
    )


def _well_approximated(value: float, target: float, theta: float) -> bool:
    if target == 0:
        return value == 0
    return abs(value / target - 1.0) < theta


def theorem1_matter_report(p: TheoremParams) -> ParadoxReport:
    """Generalized Theorem 1 at the initial Page time.

    Free fall (1.b) needs log dim(B) >> (S_BH + S_matter)/2 while 1.c puts
    log dim(B) close to that same value. A contradiction is reported when
    the supplied log_dim_b is compatible with 1.c yet fails the dominance.
    """
    initial = page_times(EvaporationParams(p.s_bh, p.s_matter)).initial
    mi = _mi(p, initial)
    threshold = 0.5 * (p.s_bh + p.s_matter)
    log_dim_b = p.interior_log_dim(initial)
    c_gap = abs(log_dim_b - threshold) - p.theta * threshold
    dom_gap = p.theta * log_dim_b - threshold
    margin = max(c_gap, dom_gap)
    contradiction = margin < 0.0
    notes = ()
    if not contradiction and c_gap >= 0:
        notes = ("1.c rejected: log_dim_b is not close to the remaining entropy",)
    return ParadoxReport(
        Theorem.T1_MATTER, initial, log_dim_b, threshold, margin, contradiction,
        _options(contradiction, (A1, B1_INT, C1)), p.theta, mi, notes,
        extras={"c_gap": c_gap, "dominance_gap": dom_gap},
    )


def pagetime_minimal_report(
    s_bh: float, mu: float, theta: float = DEFAULT_THETA, stretched_horizon: bool = False
) -> ParadoxReport:
    """Onset argument at the Page time.

    Half of S(B,N:R) equals half of S_BH; the atmosphere can carry at most
    its 't Hooft ceiling of S(N:R), so the interior must hold the rest
    against a capacity of half S_BH. A contradiction is reported when the
    room left inside is a negligible (theta) fraction of the capacity.
    """
    a = AtmosphereParams(mu, s_bh)
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    tb = thooft_bound(a)
    ceiling = tb.bound + (stretched_horizon_allowance(mu, s_bh) if stretched_horizon else 0.0)
    capacity = 0.5 * s_bh
    room = 0.5 * min(ceiling, s_bh)
    required = capacity - room
    margin = room - theta * capacity
    contradiction = margin < 0.0
    notes = []
    if ceiling >= capacity:
        notes.append("outside large-black-hole regime: atmosphere ceiling exceeds S_BH/2")
    return ParadoxReport(
        Theorem.PAGETIME_MINIMAL, 0.5 * s_bh, capacity, required, margin, contradiction,
        _options(contradiction, (A1, B1_EXT, B1_INT, C1)), theta, s_bh, tuple(notes),
        extras={"prefactor": tb.prefactor, "ceiling": ceiling, "capacity_ratio": required / capacity},
    )


# --------------------------------------------------------------------------
# Theorem 2 and its generalization
# --------------------------------------------------------------------------


def theorem2_report(p: TheoremParams, r: float) -> ParadoxReport:
    """Locality bound against the non-exotic atmosphere.

    S(N:R) >= S(R':R) for any non-signaling evaporation, while a
    non-exotic atmosphere caps S(N:R) at eta * S_BH.
    """
    p.check_r(r)
    mi = _mi(p, r)
    ceiling = p.eta * p.s_bh + p.atmosphere_allowance()
    margin = ceiling - mi
    contradiction = margin < 0.0
    return ParadoxReport(
        Theorem.T2, r, ceiling, mi, margin, contradiction,
        _options(contradiction, (A2, B2, C2)), p.theta, mi,
    )


def theorem2_matter_report(p: TheoremParams) -> ParadoxReport:
    """1 - S_matter/S_BH <= epsilon + eta, evaluated once at the end of the sweep.

    R is the radiation up to the initial Page time and R' the radiation from
    then until only an epsilon/2 fraction of the hole remains.
    """
    initial = page_times(EvaporationParams(p.s_bh, p.s_matter)).initial
    late = p.sweep_end - initial
    mi = split_mutual_information(initial, late, p.s_bh, p.s_matter)
    lhs = p.epsilon + p.eta + p.atmosphere_allowance() / p.s_bh
    rhs = 1.0 - p.s_matter / p.s_bh
    margin = lhs - rhs
    contradiction = margin < 0.0
    notes = ()
    if not contradiction:
        notes = ("matter entropy comparable to S_BH: inequality vacuous",)
    return ParadoxReport(
        Theorem.T2_MATTER, p.sweep_end, lhs, rhs, margin, contradiction,
        _options(contradiction, (A2, B2, C2)), p.theta, mi, notes,
    )


# --------------------------------------------------------------------------
# Sweeps
# --------------------------------------------------------------------------

_EVALUATORS = {
    Theorem.T1: theorem1_report,
    Theorem.T2: theorem2_report,
    Theorem.T1_HOLOGRAPHIC: holographic_variant,
}


def evaluate(p: TheoremParams, theorem: Theorem, r: float | None = None) -> ParadoxReport:
    """Single evaluation; ``r`` is required for the sweepable theorems."""
    theorem = Theorem(theorem)
    if theorem in _EVALUATORS:
        if r is None:
            raise ValueError(f"{theorem.value} needs an evaluation point r")
        return _EVALUATORS[theorem](p, r)
    if theorem is Theorem.T1_MATTER:
        return theorem1_matter_report(p)
    if theorem is Theorem.T2_MATTER:
        return theorem2_matter_report(p)
    return pagetime_minimal_report(p.s_bh, p.mu, p.theta, p.stretched_horizon)


def sweep_grid(p: TheoremParams, steps: int) -> list[float]:
    """Points i * s_bh / steps, truncated at the epsilon/2 endpoint."""
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    end = p.sweep_end * (1 + 1e-12)
    return [p.s_bh * i / steps for i in range(steps + 1) if p.s_bh * i / steps <= end]


def predicted_onset(p: TheoremParams, theorem: Theorem) -> tuple[float | None, bool]:
    """Closed-form onset threshold and whether it is inclusive.

    Returns ``(None, False)`` when no contradiction is predicted or the
    closed form does not cover the parameter regime.
    """
    pt = page_times(EvaporationParams(p.s_bh, p.s_matter))
    if theorem is Theorem.T1:
        if p.log_dim_b is None:
            return pt.initial, True
        onset = max(0.0, p.log_dim_b - p.s_matter)
        return (onset, True) if onset <= pt.initial else (None, False)
    if theorem is Theorem.T2:
        ceiling = p.eta * p.s_bh + p.atmosphere_allowance()
        if ceiling >= p.s_bh - p.s_matter:
            return None, False
        return 0.5 * ceiling, False
    if theorem is Theorem.T1_HOLOGRAPHIC:
        onset = p.theta * p.s_bh / (1.0 + p.theta)
        return (onset, False) if onset < pt.initial else (None, False)
    raise ValueError(f"{theorem.value} has no sweep onset")


@dataclass(frozen=True)
class SweepResult:
    theorem: Theorem
    params: TheoremParams
    steps: int
    reports: list[ParadoxReport]
    onset_r: float | None
    predicted_onset_r: float | None
    onset_matches: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem.value,
            "params": self.params.as_dict(),
            "theta": self.params.theta,
            "steps": self.steps,
            "points": [rep.point_dict() for rep in self.reports],
            "onset_r": self.onset_r,
            "predicted_onset_r": self.predicted_onset_r,
            "onset_matches": self.onset_matches,
        }


def evaporation_sweep(p: TheoremParams, theorem: Theorem, steps: int) -> SweepResult:
    """Evaluate ``theorem`` across the lifetime and locate the contradiction onset."""
    theorem = Theorem(theorem)
    if theorem not in _EVALUATORS:
        raise ValueError(f"{theorem.value} is evaluated at a fixed epoch and cannot be swept")
    grid = sweep_grid(p, steps)
    reports = [_EVALUATORS[theorem](p, r) for r in grid]
    onset = next((rep.r for rep in reports if rep.contradiction), None)

    threshold, inclusive = predicted_onset(p, theorem)
    tol = 1e-12 * p.s_bh
    expected = None
    if threshold is not None:
        if inclusive:
            expected = next((r for r in grid if r >= threshold - tol), None)
        else:
            expected = next((r for r in grid if r > threshold + tol), None)
    matches = onset == expected if threshold is not None else True
    return SweepResult(theorem, p, steps, reports, onset, threshold, matches)


def report_document(p: TheoremParams, report: ParadoxReport) -> dict[str, Any]:
    """Single-report JSON document in the sweep schema."""
    return {
        "theorem": report.theorem.value,
        "params": p.as_dict(),
        "theta": report.theta,
        "points": [report.point_dict()],
        "onset_r": report.r if report.contradiction else None,
        "notes": list(report.notes),
    }
