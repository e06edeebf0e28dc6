"""Entropy trajectories of a unitarily, completely evaporating black hole.

The analytic model is piecewise linear in the radiated amount ``r`` (qunats).
With infallen-matter entropy ``s_matter`` the radiation entropy rises with
unit slope up to ``(s_bh + s_matter)/2`` and then falls to ``s_matter``; the
early/late mutual information rises with slope 2, plateaus at
``s_bh - s_matter`` between the initial and final Page times, and falls back
to zero.

The Monte-Carlo side samples Haar-random evaporating subsystems, optionally
maximally entangled with matter reference qubits, and measures the same
quantities at whole-qubit cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qstate import check_capacity, entropy_from_spectrum, haar_isometry, make_rng

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EvaporationParams:
    s_bh: float
    s_matter: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if not self.s_bh > 0:
            raise ValueError(f"s_bh must be positive, got {self.s_bh}")
        if not 0 <= self.s_matter <= self.s_bh:
            raise ValueError(f"s_matter must lie in [0, s_bh], got {self.s_matter}")
        if not 0 <= self.r <= self.s_bh:
            raise ValueError(f"r must lie in [0, s_bh={self.s_bh}], got {self.r}")

    def at(self, r: float) -> "EvaporationParams":
        return EvaporationParams(self.s_bh, self.s_matter, r)


@dataclass(frozen=True)
class CurvePoint:
    r: float
    s_r: float
    mi: float
    s_r_stderr: float | None = None
    mi_stderr: float | None = None


@dataclass(frozen=True)
class PageTimes:
    initial: float
    final: float


def analytic_radiation_entropy(p: EvaporationParams) -> float:
    """S(R) after ``p.r`` qunats have been radiated."""
    turn = 0.5 * (p.s_bh + p.s_matter)
    if p.r <= turn:
        return p.r
    return p.s_bh + p.s_matter - p.r


def analytic_mutual_information(p: EvaporationParams) -> float:
    """S(R':R) between the radiation so far and the radiation still to come."""
    return min(2.0 * p.r, p.s_bh - p.s_matter, 2.0 * (p.s_bh - p.r))


def page_times(p: EvaporationParams) -> PageTimes:
    return PageTimes(0.5 * (p.s_bh - p.s_matter), 0.5 * (p.s_bh + p.s_matter))


def analytic_curve(
    s_bh: float, s_matter: float = 0.0, step: float | None = None, rs: Sequence[float] | None = None
) -> list[CurvePoint]:
    """Analytic curve on ``rs`` or on a uniform grid (default step s_bh/200)."""
    base = EvaporationParams(s_bh, s_matter)
    if rs is None:
        if step is None:
            step = s_bh / 200
        if step <= 0:
            raise ValueError("step must be positive")
        n = int(math.floor(s_bh / step + 1e-9))
        rs = [min(s_bh, i * step) for i in range(n + 1)]
        if rs[-1] < s_bh:
            rs.append(s_bh)
    points = []
    for r in rs:
        q = base.at(float(r))
        points.append(CurvePoint(q.r, analytic_radiation_entropy(q), analytic_mutual_information(q)))
    return points


def _cut_entropies(psi: np.ndarray, n_evap: int, n_ref: int, cut: int) -> tuple[float, float, float]:
    """S(R), S(R'), S(R, R') for a state psi[evap, ref] with R the first ``cut`` evap qubits."""
    d_r, d_rp, d_ref = 2**cut, 2 ** (n_evap - cut), 2**n_ref
    t = psi.reshape(d_r, d_rp, d_ref)
    s_r = entropy_from_spectrum(np.linalg.svd(t.reshape(d_r, -1), compute_uv=False) ** 2)
    s_rp = entropy_from_spectrum(
        np.linalg.svd(np.moveaxis(t, 1, 0).reshape(d_rp, -1), compute_uv=False) ** 2
    )
    if n_ref == 0:
        s_joint = 0.0
    else:
        s_joint = entropy_from_spectrum(np.linalg.svd(psi, compute_uv=False) ** 2)
    return s_r, s_rp, s_joint


def monte_carlo_curve(
    n_evap_qubits: int,
    n_matter_ref_qubits: int,
    trials: int,
    seed: int,
    cuts: Sequence[int] | None = None,
) -> list[CurvePoint]:
    """Sample means and standard errors of S(R) and S(R':R) at whole-qubit cuts.

    Each trial applies a Haar-random unitary to the evaporating qubits, the
    first ``n_matter_ref_qubits`` of which start maximally entangled with a
    reference. Only the isometry's action on that input subspace is needed,
    so it is sampled directly (first 2**m columns of a Haar unitary).
    """
    n, m = int(n_evap_qubits), int(n_matter_ref_qubits)
    if n < 1 or m < 0:
        raise ValueError("need n_evap_qubits >= 1 and n_matter_ref_qubits >= 0")
    if m > n:
        raise ValueError("matter reference cannot exceed the evaporating subsystem")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_capacity(2 ** (n + m))
    cuts = list(range(n + 1)) if cuts is None else [int(c) for c in cuts]
    if any(c < 0 or c > n for c in cuts):
        raise ValueError(f"cuts must lie in [0, {n}]")

    s_r = np.empty((trials, len(cuts)))
    mi = np.empty((trials, len(cuts)))
    norm = 1.0 / math.sqrt(2**m)
    for t in range(trials):
        rng = make_rng(seed, "mc", t)
        psi = haar_isometry(2**n, 2**m, rng) * norm
        for j, c in enumerate(cuts):
            a, b, ab = _cut_entropies(psi, n, m, c)
            s_r[t, j] = a
            mi[t, j] = a + b - ab

    points = []
    for j, c in enumerate(cuts):
        if trials > 1:
            se_s = float(np.std(s_r[:, j], ddof=1) / math.sqrt(trials))
            se_mi = float(np.std(mi[:, j], ddof=1) / math.sqrt(trials))
        else:
            se_s = se_mi = 0.0
        points.append(
            CurvePoint(c * LN2, float(np.mean(s_r[:, j])), float(np.mean(mi[:, j])), se_s, se_mi)
        )
    return points


@dataclass(frozen=True)
class CurveComparison:
    max_deviation: float
    table: list[tuple[float, float, float, float]]  # (r, analytic, mc, |diff|)


def compare_curves(
    analytic: Sequence[CurvePoint], mc: Sequence[CurvePoint], quantity: str = "s_r"
) -> CurveComparison:
    if quantity not in ("s_r", "mi"):
        raise ValueError("quantity must be 's_r' or 'mi'")
    if len(analytic) != len(mc):
        raise ValueError(f"grid mismatch: {len(analytic)} vs {len(mc)} points")
    table = []
    for a, b in zip(analytic, mc):
        if abs(a.r - b.r) > 1e-9 * max(1.0, abs(a.r)):
            raise ValueError(f"grid mismatch at r={a.r} vs r={b.r}")
        va, vb = getattr(a, quantity), getattr(b, quantity)
        table.append((a.r, va, vb, abs(va - vb)))
    worst = max((row[3] for row in table), default=0.0)
    return CurveComparison(worst, table)


def split_mutual_information(early: float, late: float, s_bh: float, s_matter: float = 0.0) -> float:
    """S(R':R) for disjoint radiation blocks of ``early`` and ``late`` qunats.

    Generic subsystem entropies depend only on subsystem size, so the union
    of the blocks behaves like a single block of ``early + late`` qunats.
    """
    if early < 0 or late < 0 or early + late > s_bh * (1 + 1e-12):
        raise ValueError("blocks must be non-negative and fit inside s_bh")
    base = EvaporationParams(s_bh, s_matter)

    def s(size: float) -> float:
        return analytic_radiation_entropy(base.at(min(size, s_bh)))

    return s(early) + s(late) - s(early + late)
