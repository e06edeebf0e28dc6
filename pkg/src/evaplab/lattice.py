"""Gaussian vacuum entanglement on a 1D harmonic chain.

H = sum_i p_i^2 / (2m) + (1/2) m w0^2 x_i^2 + (1/2) k sum_<ij> (x_i - x_j)^2

Open chains have fixed (Dirichlet) ends, so every site couples to two
neighbours or a wall and the dynamical matrix stays positive definite even
at ``self_freq = 0``. Periodic chains need ``self_freq > 0`` (zero mode).
Units: hbar = 1; the vacuum has <x x> = (mK)^(-1/2) / 2 and
<p p> = (mK)^(1/2) / 2, so a single uncoupled site has symplectic
eigenvalue exactly 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .errors import InsufficientDataError, RegulatorError, UncertaintyViolationError

UNCERTAINTY_TOL = 1e-10
FIT_FLOOR = 1e-12


@dataclass(frozen=True)
class HarmonicChain:
    n_sites: int
    mass: float = 1.0
    self_freq: float = 1.0
    coupling: float = 1.0
    boundary: str = "open"

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.self_freq < 0:
            raise ValueError(f"self_freq must be non-negative, got {self.self_freq}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")

    def dynamical_matrix(self) -> np.ndarray:
        """Potential-energy matrix K with V = x^T K x / 2."""
        n, k = self.n_sites, self.coupling
        K = np.diag(np.full(n, self.mass * self.self_freq**2 + 2.0 * k))
        for i in range(n - 1):
            K[i, i + 1] -= k
            K[i + 1, i] -= k
        if self.boundary == "periodic":
            K[0, n - 1] -= k
            K[n - 1, 0] -= k
        return K


@dataclass(frozen=True)
class LatticeCovariance:
    chain: HarmonicChain
    position_block: np.ndarray
    momentum_block: np.ndarray


def ground_state_covariance(chain: HarmonicChain) -> LatticeCovariance:
    K = chain.dynamical_matrix()
    lam, Q = np.linalg.eigh(K)
    if lam.min() <= 1e-12 * max(1.0, lam.max()):
        raise RegulatorError(
            f"dynamical matrix is singular (min eigenvalue {lam.min():.3e}); "
            f"raise self_freq above {chain.self_freq}"
        )
    root = np.sqrt(chain.mass * lam)
    X = 0.5 * (Q / root) @ Q.T
    P = 0.5 * (Q * root) @ Q.T
    X = 0.5 * (X + X.T)
    P = 0.5 * (P + P.T)
    X.setflags(write=False)
    P.setflags(write=False)
    return LatticeCovariance(chain, X, P)


def _sites(cov: LatticeCovariance, sites: Iterable[int]) -> np.ndarray:
    idx = sorted(set(int(s) for s in sites))
    if not idx:
        raise ValueError("site set must be non-empty")
    if idx[0] < 0 or idx[-1] >= cov.chain.n_sites:
        raise ValueError(f"site indices must lie in [0, {cov.chain.n_sites})")
    return np.array(idx)


def symplectic_eigenvalues(cov: LatticeCovariance, sites: Iterable[int]) -> np.ndarray:
    """nu_k = sqrt(eig(X_A P_A)) of the reduced block, via a symmetric form."""
    idx = _sites(cov, sites)
    xa = cov.position_block[np.ix_(idx, idx)]
    pa = cov.momentum_block[np.ix_(idx, idx)]
    w, v = np.linalg.eigh(xa)
    xs = (v * np.sqrt(w)) @ v.T
    nu2 = np.linalg.eigvalsh(xs @ pa @ xs)
    nu = np.sqrt(np.clip(nu2, 0.0, None))
    if nu.min() < 0.5 - UNCERTAINTY_TOL:
        raise UncertaintyViolationError(f"symplectic eigenvalue {nu.min():.12f} < 1/2")
    return np.maximum(nu, 0.5)


def _entropy_of_nu(nu: np.ndarray) -> float:
    plus = nu + 0.5
    minus = nu - 0.5
    s = plus * np.log(plus)
    pos = minus > 0
    s[pos] -= minus[pos] * np.log(minus[pos])
    return float(np.sum(s))


def block_entropy(cov: LatticeCovariance, sites: Iterable[int]) -> float:
    return _entropy_of_nu(symplectic_eigenvalues(cov, sites))


def cross_block_mutual_information(
    cov: LatticeCovariance, block_a: Iterable[int], block_b: Iterable[int]
) -> float:
    a, b = set(block_a), set(block_b)
    if a & b:
        raise ValueError(f"blocks overlap at sites {sorted(a & b)}")
    return block_entropy(cov, a) + block_entropy(cov, b) - block_entropy(cov, a | b)


def entanglement_vs_separation(
    chain: HarmonicChain, block_size: int, d_max: int, start: int | None = None
) -> list[tuple[int, float]]:
    """MI between two blocks separated by d traced-out sites, d = 0 .. d_max.

    The first block stays fixed (centred for the widest separation unless
    ``start`` is given); the second moves away from it.
    """
    if block_size < 1 or d_max < 0:
        raise ValueError("block_size must be >= 1 and d_max >= 0")
    span = 2 * block_size + d_max
    if span > chain.n_sites:
        raise ValueError(f"2*block_size + d_max = {span} exceeds n_sites = {chain.n_sites}")
    if start is None:
        start = (chain.n_sites - span) // 2
    if start < 0 or start + span > chain.n_sites:
        raise ValueError("blocks do not fit at the requested start")
    cov = ground_state_covariance(chain)
    a = list(range(start, start + block_size))
    out = []
    for d in range(d_max + 1):
        b0 = start + block_size + d
        out.append((d, cross_block_mutual_information(cov, a, range(b0, b0 + block_size))))
    return out


@dataclass(frozen=True)
class DecayFit:
    rate: float
    r_squared: float
    floor: float
    points_used: int

    def to_dict(self) -> dict:
        return {"rate": self.rate, "r_squared": self.r_squared, "floor": self.floor, "points_used": self.points_used}


def fit_decay(series: Sequence[tuple[float, float]], floor: float = FIT_FLOOR) -> DecayFit:
    """Least-squares fit of ln(mi) against d over points above ``floor``."""
    pts = [(float(d), float(mi)) for d, mi in series if mi > floor]
    if len(pts) < 3:
        raise InsufficientDataError(f"need >= 3 points above {floor:g}, got {len(pts)}")
    d, mi = np.array(pts).T
    fit = stats.linregress(d, np.log(mi))
    return DecayFit(float(-fit.slope), float(fit.rvalue**2), floor, len(pts))
