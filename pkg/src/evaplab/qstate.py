"""Dense state-vector and density-matrix mechanics on labeled tensor registers.

All entropies are in qunats (natural logarithm). States, density matrices and
unitaries are immutable: their arrays are copied on construction and marked
read-only.
"""

from __future__ import annotations

import math
import os
import zlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, NumericalValidityError

DEFAULT_CAPACITY = 2**12
CAPACITY_ENV = "EVAPLAB_CAPACITY"

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
UNITARY_TOL = 1e-10
NEGATIVE_EIG_TOL = 1e-10
EIG_CLIP = 1e-12


def capacity() -> int:
    """Maximum number of amplitudes a sampled register may hold."""
    raw = os.environ.get(CAPACITY_ENV)
    if raw is None:
        return DEFAULT_CAPACITY
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAPACITY_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{CAPACITY_ENV} must be positive, got {value}")
    return value


def check_capacity(total_dim: int) -> None:
    if total_dim < 1:
        raise CapacityError(f"register dimension must be positive, got {total_dim}")
    budget = capacity()
    if total_dim > budget:
        raise CapacityError(
            f"register dimension {total_dim} exceeds amplitude budget {budget} "
            f"(set {CAPACITY_ENV} to raise it)"
        )


def _stream_key(part: Union[int, str]) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode())
    if part < 0:
        raise ValueError(f"stream keys must be non-negative, got {part}")
    return int(part)


def make_rng(seed: int, *stream: Union[int, str]) -> np.random.Generator:
    """Counter-based generator keyed by ``seed`` and a stream path.

    Distinct stream paths give independent Philox streams, so per-trial
    generators can be built in any order without changing results.
    """
    if not isinstance(seed, (int, np.integer)) or seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(_stream_key(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


# --------------------------------------------------------------------------
# Registers and value types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TensorRegister:
    """Ordered tensor factors, each a ``(label, dim)`` pair."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(label), int(dim)) for label, dim in self.factors)
        object.__setattr__(self, "factors", factors)
        labels = [label for label, _ in factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"register labels must be unique: {labels}")
        for label, dim in factors:
            if dim < 1:
                raise ValueError(f"factor {label!r} has non-positive dimension {dim}")

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> "TensorRegister":
        return cls(tuple(factors))

    @classmethod
    def qubits(cls, *labels: str) -> "TensorRegister":
        return cls(tuple((label, 2) for label in labels))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown label {label!r}; register has {self.labels}") from None

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def dim_of(self, labels: Iterable[str]) -> int:
        return math.prod(self.dim(label) for label in labels)

    def ordered(self, labels: Iterable[str]) -> tuple[str, ...]:
        """``labels`` validated and sorted into register order."""
        wanted = set(labels)
        for label in wanted:
            self.index(label)
        return tuple(label for label in self.labels if label in wanted)

    def subset(self, labels: Iterable[str]) -> "TensorRegister":
        keep = self.ordered(labels)
        return TensorRegister(tuple(f for f in self.factors if f[0] in keep))

    def __add__(self, other: "TensorRegister") -> "TensorRegister":
        return TensorRegister(self.factors + other.factors)


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    register: TensorRegister
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape != (self.register.total_dim,):
            raise ValueError(
                f"amplitude vector has length {amps.size}, register needs {self.register.total_dim}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NumericalValidityError(f"state is not normalized: |psi|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.register.labels

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.register.dims)


@dataclass(frozen=True)
class DensityMatrix:
    register: TensorRegister
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = _frozen(self.matrix)
        d = self.register.total_dim
        if mat.shape != (d, d):
            raise ValueError(f"density matrix shape {mat.shape} does not match register dim {d}")
        herm = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
        if herm > HERMITIAN_TOL:
            raise NumericalValidityError(f"density matrix not Hermitian (max deviation {herm:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise NumericalValidityError(f"density matrix trace is {tr!r}, expected 1")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        psi = state.amplitudes
        return cls(state.register, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, register: TensorRegister) -> "DensityMatrix":
        d = register.total_dim
        return cls(register, np.eye(d) / d)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.register.labels


@dataclass(frozen=True)
class Unitary:
    """Unitary map from ``register`` onto ``out_register``.

    ``out_register`` defaults to ``register``. A different output factoring
    (same total dimension) models circuits whose wires are regrouped, e.g.
    ``(N, ancilla) -> (N', R', C)``.
    """

    register: TensorRegister
    matrix: np.ndarray = field(repr=False)
    out_register: TensorRegister | None = None

    def __post_init__(self):
        mat = _frozen(self.matrix)
        d = self.register.total_dim
        out = self.out_register if self.out_register is not None else self.register
        if out.total_dim != d:
            raise ValueError(f"output register dim {out.total_dim} differs from input dim {d}")
        if mat.shape != (d, d):
            raise ValueError(f"unitary shape {mat.shape} does not match register dim {d}")
        dev = float(np.max(np.abs(mat.conj().T @ mat - np.eye(d))))
        if dev > UNITARY_TOL:
            raise NumericalValidityError(f"matrix is not unitary (max |U^dag U - I| = {dev:.3e})")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.register.total_dim

    @property
    def outputs(self) -> TensorRegister:
        return self.out_register if self.out_register is not None else self.register

    @classmethod
    def identity(cls, register: TensorRegister) -> "Unitary":
        return cls(register, np.eye(register.total_dim))


State = Union[PureState, DensityMatrix]


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------


def basis_state(register: TensorRegister, indices: Sequence[int]) -> PureState:
    if len(indices) != len(register.factors):
        raise ValueError("one basis index per factor is required")
    amps = np.zeros(register.dims, dtype=complex)
    amps[tuple(indices)] = 1.0
    return PureState(register, amps.ravel())


def bell_pair(label_a: str, label_b: str, dim: int = 2) -> PureState:
    """Maximally entangled state sum_i |ii>/sqrt(dim)."""
    reg = TensorRegister.of((label_a, dim), (label_b, dim))
    return PureState(reg, np.eye(dim).ravel() / math.sqrt(dim))


def tensor_product(*states: PureState) -> PureState:
    if not states:
        raise ValueError("at least one state is required")
    reg = states[0].register
    amps = states[0].amplitudes
    for st in states[1:]:
        reg = reg + st.register
        amps = np.kron(amps, st.amplitudes)
    return PureState(reg, amps)


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def haar_vectors(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random unit vectors of length ``dim``, as rows."""
    z = _ginibre(rng, (count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> np.ndarray:
    """First ``d_in`` columns of a Haar unitary on ``d_out`` dimensions."""
    if d_in > d_out:
        raise ValueError("isometry needs d_in <= d_out")
    q, r = np.linalg.qr(_ginibre(rng, (d_out, d_in)))
    diag = np.diagonal(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases


def haar_random_pure(register: TensorRegister, seed: int, stream: Sequence[int | str] = ()) -> PureState:
    """Haar-uniform pure state on ``register``; deterministic in (seed, stream)."""
    d = register.total_dim
    check_capacity(d)
    if d < 2:
        raise ValueError("a Haar-random state needs total_dim >= 2")
    rng = make_rng(seed, "pure", *stream)
    return PureState(register, haar_vectors(d, 1, rng)[0])


def haar_random_unitary(
    dim: int,
    seed: int,
    stream: Sequence[int | str] = (),
    register: TensorRegister | None = None,
) -> Unitary:
    """Haar-random unitary via QR of a Ginibre matrix with phase-fixed R."""
    check_capacity(dim)
    if register is None:
        register = TensorRegister.of(("U", dim))
    elif register.total_dim != dim:
        raise ValueError("register dimension does not match dim")
    rng = make_rng(seed, "unitary", *stream)
    return Unitary(register, haar_isometry(dim, dim, rng))


# --------------------------------------------------------------------------
# Reductions and entropies
# --------------------------------------------------------------------------


def _bipartite_matrix(state: PureState, keep: tuple[str, ...]) -> np.ndarray:
    reg = state.register
    idx = [reg.index(label) for label in keep]
    t = np.moveaxis(state.tensor(), idx, list(range(len(idx))))
    return t.reshape(reg.dim_of(keep), -1)


def partial_trace(state: State, keep: Iterable[str]) -> DensityMatrix:
    """Reduced density matrix on ``keep`` (factors kept in register order)."""
    reg = state.register
    kept = reg.ordered(keep)
    if not kept:
        raise ValueError("keep must name at least one factor")
    sub = reg.subset(kept)
    if isinstance(state, PureState):
        m = _bipartite_matrix(state, kept)
        rho = m @ m.conj().T
    else:
        n = len(reg.factors)
        idx = [reg.index(label) for label in kept]
        traced = [i for i in range(n) if i not in idx]
        t = state.matrix.reshape(reg.dims + reg.dims)
        perm = idx + traced + [n + i for i in idx] + [n + i for i in traced]
        dk, dt = sub.total_dim, reg.total_dim // sub.total_dim
        t = np.transpose(t, perm).reshape(dk, dt, dk, dt)
        rho = np.einsum("iaja->ij", t)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(sub, rho)


def entropy_from_spectrum(eigenvalues: np.ndarray) -> float:
    """-sum p ln p with the package's eigenvalue hygiene."""
    p = np.asarray(eigenvalues, dtype=float)
    if p.size and p.min() < -NEGATIVE_EIG_TOL:
        raise NumericalValidityError(f"negative eigenvalue {p.min():.3e} beyond tolerance")
    p = p[p > EIG_CLIP]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return entropy_from_spectrum(np.linalg.eigvalsh(rho.matrix))


def subsystem_entropy(state: State, labels: Iterable[str]) -> float:
    """S(labels). Pure states use the Schmidt spectrum, so cost scales with the smaller side."""
    reg = state.register
    kept = reg.ordered(labels)
    if not kept:
        return 0.0
    if isinstance(state, PureState):
        if len(kept) == len(reg.factors):
            return 0.0
        s = np.linalg.svd(_bipartite_matrix(state, kept), compute_uv=False)
        return entropy_from_spectrum(s**2)
    if len(kept) == len(reg.factors):
        return von_neumann_entropy(state)
    return von_neumann_entropy(partial_trace(state, kept))


def _disjoint(*groups: Iterable[str]) -> list[set[str]]:
    sets = [set(g) for g in groups]
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a & b:
                raise ValueError(f"label sets overlap: {sorted(a & b)}")
    return sets


def mutual_information(state: State, x: Iterable[str], y: Iterable[str]) -> float:
    """S(x:y) = S(x) + S(y) - S(x, y)."""
    xs, ys = _disjoint(x, y)
    if not xs or not ys:
        raise ValueError("mutual information needs two non-empty label sets")
    return (
        subsystem_entropy(state, xs)
        + subsystem_entropy(state, ys)
        - subsystem_entropy(state, xs | ys)
    )


def ssa_margin(state: State, w: Iterable[str], x: Iterable[str], y: Iterable[str]) -> float:
    """S(w, x : y) - S(x : y); non-negative by strong subadditivity."""
    ws, xs, ys = _disjoint(w, x, y)
    if not ws:
        raise ValueError("w must be non-empty")
    joint = mutual_information(state, ws | xs, ys)
    if not xs:
        return joint
    return joint - mutual_information(state, xs, ys)


# --------------------------------------------------------------------------
# Dynamics
# --------------------------------------------------------------------------


def _apply_matrix(
    amps: np.ndarray,
    register: TensorRegister,
    matrix: np.ndarray,
    targets: tuple[str, ...],
    out_factors: tuple[tuple[str, int], ...],
) -> tuple[np.ndarray, TensorRegister]:
    """Apply ``matrix`` to the ``targets`` axes of ``amps`` (shape (D,) or (D, k))."""
    dims = register.dims
    n = len(dims)
    idx = [register.index(t) for t in targets]
    rest = [i for i in range(n) if i not in idx]
    batch = amps.shape[1:]
    t = np.moveaxis(amps.reshape(dims + batch), idx, list(range(len(idx))))
    t = matrix @ t.reshape(register.dim_of(targets), -1)

    # outputs go back to the target slots when the factor count matches,
    # otherwise they are inserted where the first target was
    if len(out_factors) == len(idx):
        slots = idx
        new_factors = list(register.factors)
        for slot, f in zip(slots, out_factors):
            new_factors[slot] = f
        t = t.reshape(tuple(d for _, d in out_factors) + tuple(dims[i] for i in rest) + batch)
        t = np.moveaxis(t, list(range(len(idx))), slots)
    else:
        first = min(idx)
        before = [i for i in rest if i < first]
        after = [i for i in rest if i > first]
        new_factors = (
            [register.factors[i] for i in before] + list(out_factors) + [register.factors[i] for i in after]
        )
        t = t.reshape(tuple(d for _, d in out_factors) + tuple(dims[i] for i in rest) + batch)
        k = len(out_factors)
        order = list(range(k, k + len(before))) + list(range(k)) + list(range(k + len(before), k + len(rest)))
        t = np.transpose(t, order + list(range(k + len(rest), t.ndim)))
    new_reg = TensorRegister(tuple(new_factors))
    return t.reshape((new_reg.total_dim,) + batch), new_reg


def apply_unitary(state: PureState, u: Unitary, targets: Sequence[str] | None = None) -> PureState:
    """Apply ``u`` to the ``targets`` factors (default: ``u``'s own input labels).

    If ``u`` carries an explicit ``out_register`` its labels replace the
    targets; otherwise the targets keep their labels.
    """
    targets = tuple(u.register.labels if targets is None else targets)
    reg = state.register
    for t in targets:
        reg.index(t)
    if len(set(targets)) != len(targets):
        raise ValueError("targets must be distinct")
    if reg.dim_of(targets) != u.dim:
        raise ValueError(
            f"targets {targets} span dimension {reg.dim_of(targets)}, unitary acts on {u.dim}"
        )
    if u.out_register is None:
        out_factors = tuple((t, reg.dim(t)) for t in targets)
    else:
        out_factors = u.out_register.factors
        clash = set(u.out_register.labels) & (set(reg.labels) - set(targets))
        if clash:
            raise ValueError(f"output labels collide with untouched factors: {sorted(clash)}")
    amps, new_reg = _apply_matrix(state.amplitudes, reg, u.matrix, targets, out_factors)
    return PureState(new_reg, amps)


def reorder(state: PureState, labels: Sequence[str]) -> PureState:
    """Permute factors into the given label order."""
    reg = state.register
    if sorted(labels) != sorted(reg.labels):
        raise ValueError(f"reorder needs a permutation of {reg.labels}")
    perm = [reg.index(label) for label in labels]
    t = np.transpose(state.tensor(), perm)
    return PureState(TensorRegister(tuple(reg.factors[i] for i in perm)), t.ravel())


# --------------------------------------------------------------------------
# Sampled strong-subadditivity check
# --------------------------------------------------------------------------


def sampled_ssa_min_margin(
    dims: dict[str, int],
    w: Sequence[str],
    x: Sequence[str],
    y: Sequence[str],
    samples: int,
    seed: int,
) -> float:
    """Minimum ssa_margin over ``samples`` Haar-random pure states on ``dims``.

    Labels not in w, x or y act as the purifying environment.
    """
    reg = TensorRegister(tuple(dims.items()))
    worst = math.inf
    for i in range(samples):
        state = haar_random_pure(reg, seed, stream=(i,))
        worst = min(worst, ssa_margin(state, w, x, y))
    return worst
