"""Non-signaling circuits, signaling detection and the SSA chains behind both theorems.

A non-signaling evaporation is built as two unitaries joined by a reverse
channel ``C``: the exterior process ``W`` acts first on the exterior inputs
(plus ancillas) and emits the exterior outputs together with ``C``; the
interior process ``V`` then consumes the interior inputs and ``C``. Nothing
that enters ``V`` can reach an exterior output.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .qstate import (
    PureState,
    TensorRegister,
    Unitary,
    _apply_matrix,
    apply_unitary,
    basis_state,
    bell_pair,
    check_capacity,
    haar_random_pure,
    haar_random_unitary,
    haar_vectors,
    make_rng,
    mutual_information,
    reorder,
    tensor_product,
)

SIGNALING_THRESHOLD = 1e-8
MARGIN_TOL = 1e-9
LN2 = math.log(2.0)


@dataclass(frozen=True)
class NoCommCircuit:
    v: Unitary
    w: Unitary
    channel: str
    total: Unitary = field(repr=False)

    @property
    def interior_inputs(self) -> tuple[str, ...]:
        return tuple(label for label in self.v.register.labels if label != self.channel)

    @property
    def interior_outputs(self) -> tuple[str, ...]:
        return self.v.outputs.labels

    @property
    def exterior_inputs(self) -> tuple[str, ...]:
        return self.w.register.labels

    @property
    def exterior_outputs(self) -> tuple[str, ...]:
        return tuple(label for label in self.w.outputs.labels if label != self.channel)

    @property
    def dims(self) -> dict[str, int]:
        regs = (self.v.register, self.v.outputs, self.w.register, self.w.outputs)
        return {label: dim for reg in regs for label, dim in reg.factors}


@dataclass(frozen=True)
class SignalingVerdict:
    signaling: bool
    magnitude: float
    probes: int


def build_nonsignaling(v: Unitary, w: Unitary, channel: str = "C") -> NoCommCircuit:
    """Compose ``w`` (exterior, emits ``channel``) then ``v`` (interior, consumes it)."""
    if channel not in w.outputs.labels:
        raise ValueError(f"w must emit the channel {channel!r}; its outputs are {w.outputs.labels}")
    if channel not in v.register.labels:
        raise ValueError(f"v must consume the channel {channel!r}; its inputs are {v.register.labels}")
    if channel in w.register.labels or channel in v.outputs.labels:
        raise ValueError("the channel must run from w's outputs to v's inputs only")
    if w.outputs.dim(channel) != v.register.dim(channel):
        raise ValueError(
            f"channel dimension mismatch: w emits {w.outputs.dim(channel)}, v expects {v.register.dim(channel)}"
        )
    v_in = [f for f in v.register.factors if f[0] != channel]
    clash = {label for label, _ in v_in} & set(w.register.labels)
    if clash:
        raise ValueError(f"interior and exterior inputs share labels {sorted(clash)}")
    w_out = [f for f in w.outputs.factors if f[0] != channel]
    clash = set(v.outputs.labels) & {label for label, _ in w_out}
    if clash:
        raise ValueError(f"interior and exterior outputs share labels {sorted(clash)}")

    in_reg = TensorRegister(tuple(v_in) + w.register.factors)
    check_capacity(in_reg.total_dim)
    amps = np.eye(in_reg.total_dim, dtype=complex)
    amps, reg = _apply_matrix(amps, in_reg, w.matrix, w.register.labels, w.outputs.factors)
    amps, reg = _apply_matrix(amps, reg, v.matrix, v.register.labels, v.outputs.factors)
    out_reg = TensorRegister(v.outputs.factors + tuple(w_out))
    perm = [reg.index(label) for label in out_reg.labels]
    t = amps.reshape(reg.dims + (in_reg.total_dim,))
    t = np.transpose(t, perm + [len(perm)])
    total = Unitary(in_reg, t.reshape(in_reg.total_dim, in_reg.total_dim), out_register=out_reg)
    return NoCommCircuit(v, w, channel, total)


# --------------------------------------------------------------------------
# Signaling detection
# --------------------------------------------------------------------------


def tomographic_states(dim: int) -> np.ndarray:
    """dim**2 pure states whose projectors span all dim x dim operators (rows)."""
    rows = []
    eye = np.eye(dim, dtype=complex)
    for i in range(dim):
        rows.append(eye[i])
    for i, j in itertools.combinations(range(dim), 2):
        rows.append((eye[i] + eye[j]) / math.sqrt(2))
        rows.append((eye[i] + 1j * eye[j]) / math.sqrt(2))
    return np.array(rows)


def _trace_distance_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ev = np.linalg.eigvalsh(a - b)
    return 0.5 * np.sum(np.abs(ev), axis=-1)


def detect_signaling(
    u: Unitary,
    input_a: Sequence[str],
    output_b: Sequence[str],
    probes: int = 64,
    seed: int = 0,
    mode: str = "exact",
    threshold: float = SIGNALING_THRESHOLD,
) -> SignalingVerdict:
    """Decide whether ``u`` can carry information from ``input_a`` to ``output_b``.

    Exact mode prepares every state of a tomographically complete family on
    the A inputs against every member of such a family on the remaining
    inputs, and reports the largest trace distance between the B-output
    reductions for two A preparations. By linearity this spans every joint
    input, so it is a complete test in finite dimension. Sampled mode uses
    ``probes`` random product triples instead.
    """
    in_reg, out_reg = u.register, u.outputs
    a = in_reg.ordered(input_a)
    b = out_reg.ordered(output_b)
    if not a or not b:
        raise ValueError("input_a and output_b must be non-empty")
    c = tuple(label for label in in_reg.labels if label not in a)
    bc = tuple(label for label in out_reg.labels if label not in b)
    d_a, d_c = in_reg.dim_of(a), in_reg.dim_of(c)
    d_b, d_bc = out_reg.dim_of(b), out_reg.dim_of(bc)
    check_capacity(in_reg.total_dim)

    t = u.matrix.reshape(out_reg.dims + in_reg.dims)
    n_out = len(out_reg.dims)
    perm = (
        [out_reg.index(x) for x in b]
        + [out_reg.index(x) for x in bc]
        + [n_out + in_reg.index(x) for x in a]
        + [n_out + in_reg.index(x) for x in c]
    )
    u4 = np.transpose(t, perm).reshape(d_b, d_bc, d_a, d_c)

    if mode == "exact":
        psi_a = tomographic_states(d_a)
        psi_c = tomographic_states(d_c)
        m = np.einsum("xyac,pa,qc->pqxy", u4, psi_a, psi_c)
        rho = m @ np.conj(np.swapaxes(m, -1, -2))
        dist = _trace_distance_batch(rho, rho[:1])
        n_probes = psi_a.shape[0] * psi_c.shape[0]
    elif mode == "sampled":
        if probes < 1:
            raise ValueError("sampled mode needs probes >= 1")
        rng = make_rng(seed, "signaling")
        psi_1 = haar_vectors(d_a, probes, rng)
        psi_2 = haar_vectors(d_a, probes, rng)
        psi_c = haar_vectors(d_c, probes, rng)
        m1 = np.einsum("xyac,pa,pc->pxy", u4, psi_1, psi_c)
        m2 = np.einsum("xyac,pa,pc->pxy", u4, psi_2, psi_c)
        rho1 = m1 @ np.conj(np.swapaxes(m1, -1, -2))
        rho2 = m2 @ np.conj(np.swapaxes(m2, -1, -2))
        dist = _trace_distance_batch(rho1, rho2)
        n_probes = probes
    else:
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    magnitude = float(np.max(dist))
    return SignalingVerdict(magnitude > threshold, magnitude, int(n_probes))


# --------------------------------------------------------------------------
# Figure-3 style evaporation circuits
# --------------------------------------------------------------------------


def simulate_fig3(
    circuit: NoCommCircuit, initial: PureState, return_intermediate: bool = False
) -> PureState | tuple[PureState, PureState]:
    """Run ``initial`` through W then V.

    Circuit inputs absent from ``initial`` are ancillas prepared in |0>.
    Factors of ``initial`` the circuit does not touch (the early radiation R)
    pass through unchanged and stay last. With ``return_intermediate`` the
    state between W and V (which still carries C) is returned as well.
    """
    inputs = circuit.total.register
    missing = [f for f in inputs.factors if f[0] not in initial.register.labels]
    for label in inputs.labels:
        if label in initial.register.labels and initial.register.dim(label) != inputs.dim(label):
            raise ValueError(f"factor {label!r} has dimension {initial.register.dim(label)}, circuit expects {inputs.dim(label)}")
    state = initial
    if missing:
        anc = basis_state(TensorRegister(tuple(missing)), [0] * len(missing))
        state = tensor_product(initial, anc)
    spectators = [label for label in initial.register.labels if label not in inputs.labels]
    mid = apply_unitary(state, circuit.w)
    final = apply_unitary(mid, circuit.v)
    order = list(circuit.interior_outputs) + list(circuit.exterior_outputs) + spectators
    final = reorder(final, order)
    if return_intermediate:
        return final, mid
    return final


def random_fig3_circuit(
    n_b: int, n_n: int, n_rp: int = 1, n_c: int = 1, seed: int = 0, stream: Sequence[Any] = ()
) -> NoCommCircuit:
    """Haar-random local-horizon circuit on qubit factors.

    W: (N, W0) -> (N', R', C) with W0 an ancilla of n_rp + n_c qubits;
    V: (B, C) -> B'.
    """
    n_anc = n_rp + n_c
    w_in = TensorRegister.of(("N", 2**n_n), ("W0", 2**n_anc))
    w_out = TensorRegister.of(("N'", 2**n_n), ("R'", 2**n_rp), ("C", 2**n_c))
    v_in = TensorRegister.of(("B", 2**n_b), ("C", 2**n_c))
    v_out = TensorRegister.of(("B'", 2 ** (n_b + n_c)))
    w = haar_random_unitary(w_in.total_dim, seed, stream=("fig3-w", *stream))
    v = haar_random_unitary(v_in.total_dim, seed, stream=("fig3-v", *stream))
    return build_nonsignaling(
        Unitary(v_in, v.matrix, out_register=v_out),
        Unitary(w_in, w.matrix, out_register=w_out),
        channel="C",
    )


def random_nonsignaling_pair(
    n_a: int, n_b: int, n_c: int = 1, seed: int = 0, stream: Sequence[Any] = ()
) -> NoCommCircuit:
    """Generic A/B circuit: W: (B, X) -> (B', C), V: (A, C) -> (A', Y)."""
    w_in = TensorRegister.of(("B", 2**n_b), ("X", 2**n_c))
    w_out = TensorRegister.of(("B'", 2**n_b), ("C", 2**n_c))
    v_in = TensorRegister.of(("A", 2**n_a), ("C", 2**n_c))
    v_out = TensorRegister.of(("A'", 2**n_a), ("Y", 2**n_c))
    w = haar_random_unitary(w_in.total_dim, seed, stream=("pair-w", *stream))
    v = haar_random_unitary(v_in.total_dim, seed, stream=("pair-v", *stream))
    return build_nonsignaling(
        Unitary(v_in, v.matrix, out_register=v_out),
        Unitary(w_in, w.matrix, out_register=w_out),
        channel="C",
    )


# --------------------------------------------------------------------------
# Inequality verification
# --------------------------------------------------------------------------


@dataclass
class VerificationResult:
    check: str
    samples: int
    shape: dict[str, int]
    min_margin: float
    threshold: float
    failures: list[dict[str, Any]] = field(default_factory=list)
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        out = {
            "check": self.check,
            "samples": self.samples,
            "shape": dict(self.shape),
            "min_margin": self.min_margin,
            "threshold": self.threshold,
            "failures": list(self.failures),
        }
        out.update(self.extras)
        return out


def verify_eq2(samples: int, shape: Sequence[int] = (2, 2, 2), seed: int = 0) -> VerificationResult:
    """min over samples of S(B,N:R) - S(R':R) for unconstrained unitaries on (B, N).

    ``shape`` gives qubit counts of (B, N, R). Every split of the unitary's
    output into (rest, R') with R' of 1 .. n_b+n_n-1 qubits is checked.
    """
    n_b, n_n, n_r = (int(x) for x in shape)
    reg = TensorRegister.of(("B", 2**n_b), ("N", 2**n_n), ("R", 2**n_r))
    check_capacity(reg.total_dim)
    n_bn = n_b + n_n
    worst = math.inf
    failures = []
    for i in range(samples):
        state = haar_random_pure(reg, seed, stream=("eq2-state", i))
        u = haar_random_unitary(2**n_bn, seed, stream=("eq2-u", i))
        before = mutual_information(state, {"B", "N"}, {"R"})
        for k in range(1, n_bn):
            out = TensorRegister.of(("B'N'", 2 ** (n_bn - k)), ("R'", 2**k))
            after = apply_unitary(state, Unitary(reg.subset({"B", "N"}), u.matrix, out_register=out))
            margin = before - mutual_information(after, {"R'"}, {"R"})
            worst = min(worst, margin)
            if margin < -MARGIN_TOL:
                failures.append({"sample": i, "r_prime_qubits": k, "margin": margin})
    return VerificationResult(
        "eq2", samples, {"B": n_b, "N": n_n, "R": n_r}, worst, -MARGIN_TOL, failures
    )


def swap_counterexample() -> dict[str, Any]:
    """Signaling circuit violating S(N:R) >= S(R':R).

    B is maximally entangled with R and N starts in |0>; a SWAP hands B's
    content to the outgoing radiation R'.
    """
    initial = tensor_product(bell_pair("B", "R"), basis_state(TensorRegister.qubits("N"), [0]))
    initial = reorder(initial, ["B", "N", "R"])
    swap = np.eye(4)[[0, 2, 1, 3]]
    u = Unitary(
        TensorRegister.qubits("B", "N"), swap, out_register=TensorRegister.qubits("B'", "R'")
    )
    final = apply_unitary(initial, u)
    s_nr = mutual_information(initial, {"N"}, {"R"})
    s_rpr = mutual_information(final, {"R'"}, {"R"})
    verdict = detect_signaling(u, ["B"], ["R'"])
    return {
        "s_n_r": s_nr,
        "s_rprime_r": s_rpr,
        "margin": s_nr - s_rpr,
        "signaling": verdict.signaling,
        "signaling_magnitude": verdict.magnitude,
    }


def verify_eq6(
    samples: int,
    shape: Sequence[int] = (2, 2, 2),
    seed: int = 0,
    n_rp: int = 1,
    n_c: int = 1,
    check_soundness: bool = True,
) -> VerificationResult:
    """min over samples of S(N:R) - S(R':R) for circuits from build_nonsignaling.

    ``shape`` gives qubit counts of (B, N, R). Each circuit is also passed
    through exact signaling detection (interior input -> exterior outputs)
    when ``check_soundness`` is set. The result carries the SWAP
    counterexample showing the bound needs non-signaling.
    """
    n_b, n_n, n_r = (int(x) for x in shape)
    reg = TensorRegister.of(("B", 2**n_b), ("N", 2**n_n), ("R", 2**n_r))
    check_capacity(reg.total_dim * 2 ** (n_rp + n_c))
    worst = math.inf
    worst_signal = 0.0
    failures = []
    for i in range(samples):
        circuit = random_fig3_circuit(n_b, n_n, n_rp, n_c, seed, stream=(i,))
        state = haar_random_pure(reg, seed, stream=("eq6-state", i))
        final = simulate_fig3(circuit, state)
        margin = mutual_information(state, {"N"}, {"R"}) - mutual_information(final, {"R'"}, {"R"})
        worst = min(worst, margin)
        if margin < -MARGIN_TOL:
            failures.append({"sample": i, "margin": margin})
        if check_soundness:
            verdict = detect_signaling(circuit.total, circuit.interior_inputs, circuit.exterior_outputs)
            worst_signal = max(worst_signal, verdict.magnitude)
            if verdict.signaling:
                failures.append({"sample": i, "signaling_magnitude": verdict.magnitude})
    extras = {
        "counterexample": swap_counterexample(),
        "dims": {"R'": n_rp, "C": n_c},
    }
    if check_soundness:
        extras["max_signaling_magnitude"] = worst_signal
    return VerificationResult(
        "eq6", samples, {"B": n_b, "N": n_n, "R": n_r}, worst, -MARGIN_TOL, failures, extras
    )
