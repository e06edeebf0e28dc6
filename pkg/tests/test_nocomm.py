import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evaplab.nocomm import (
    build_nonsignaling,
    detect_signaling,
    random_fig3_circuit,
    random_nonsignaling_pair,
    simulate_fig3,
    swap_counterexample,
    tomographic_states,
    verify_eq2,
    verify_eq6,
)
from evaplab.qstate import (
    PureState,
    TensorRegister,
    Unitary,
    apply_unitary,
    basis_state,
    bell_pair,
    haar_random_pure,
    haar_random_unitary,
    mutual_information,
    partial_trace,
    tensor_product,
)

LN2 = math.log(2)
AB = TensorRegister.qubits("A", "B")

CNOT_AB = np.eye(4)[[0, 1, 3, 2]]  # control A (first), target B
CNOT_BA = np.eye(4)[[0, 3, 2, 1]]  # control B, target A
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.eye(4)[[0, 2, 1, 3]]


def gate(matrix):
    return Unitary(AB, matrix)


# -- construction ----------------------------------------------------------


def interior(matrix):
    return Unitary(
        TensorRegister.qubits("A", "C"), matrix, out_register=TensorRegister.qubits("A'", "Y")
    )


def identity_pair():
    v = interior(np.eye(4))
    w = Unitary(
        TensorRegister.qubits("B", "X"), np.eye(4), out_register=TensorRegister.qubits("B'", "C")
    )
    return v, w


def test_identity_pieces_give_identity_total():
    v, w = identity_pair()
    circ = build_nonsignaling(v, w)
    # inputs (A, B, X) land on outputs (A', Y, B') as (A, X, B)
    ref = np.eye(8).reshape(2, 2, 2, 2, 2, 2).transpose(0, 2, 1, 3, 4, 5).reshape(8, 8)
    assert np.allclose(circ.total.matrix, ref)
    assert not detect_signaling(circ.total, ["A"], ["B'"]).signaling


def test_cnot_into_channel_is_non_signaling():
    v = interior(CNOT_AB)
    _, w = identity_pair()
    circ = build_nonsignaling(v, w)
    verdict = detect_signaling(circ.total, ["A"], ["B'"])
    assert not verdict.signaling and verdict.magnitude < 1e-9


def test_total_is_unitary():
    circ = random_nonsignaling_pair(2, 2, seed=3)
    u = circ.total.matrix
    assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-10


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_random_constructed_circuits_never_signal(i):
    circ = random_nonsignaling_pair(2, 2, seed=1, stream=(i,))
    verdict = detect_signaling(circ.total, ["A"], ["B'"])
    assert verdict.magnitude < 1e-9


def test_channel_validation():
    v, w = identity_pair()
    with pytest.raises(ValueError):
        build_nonsignaling(v, w, channel="Z")
    bad_v = Unitary(
        TensorRegister.of(("A", 2), ("C", 4)), np.eye(8), out_register=TensorRegister.of(("A'", 8))
    )
    with pytest.raises(ValueError):
        build_nonsignaling(bad_v, w)


def test_horizon_circuit_exposes_register_labels():
    circ = random_fig3_circuit(2, 2, seed=0)
    assert circ.interior_inputs == ("B",)
    assert circ.exterior_outputs == ("N'", "R'")
    assert circ.dims["C"] == 2


# -- detection -------------------------------------------------------------


def test_tomographic_family_spans_operators():
    for d in (2, 3, 4):
        psi = tomographic_states(d)
        projectors = np.array([np.outer(p, p.conj()).ravel() for p in psi])
        assert np.linalg.matrix_rank(projectors) == d * d


def test_swap_signals_fully():
    verdict = detect_signaling(gate(SWAP), ["A"], ["B"])
    assert verdict.signaling and verdict.magnitude == pytest.approx(1.0)


def test_identity_does_not_signal():
    verdict = detect_signaling(gate(np.eye(4)), ["A"], ["B"])
    assert not verdict.signaling and verdict.magnitude < 1e-12


def test_local_unitaries_do_not_signal():
    u = np.kron(haar_random_unitary(2, 1).matrix, haar_random_unitary(2, 2).matrix)
    assert detect_signaling(gate(u), ["A"], ["B"]).magnitude < 1e-9


@pytest.mark.parametrize("matrix", [CNOT_AB, CNOT_BA, CZ], ids=["cnot-a-b", "cnot-b-a", "cz"])
def test_entangling_gates_signal(matrix):
    verdict = detect_signaling(gate(matrix), ["A"], ["B"])
    assert verdict.signaling and verdict.magnitude > 0.4


def test_cnot_hidden_from_basis_marginals():
    # with B prepared in |+> the computational-basis preparations of A leave
    # B's marginal untouched; superposed A probes still expose the coupling
    u = gate(CNOT_AB)
    plus = PureState(TensorRegister.qubits("B"), np.array([1, 1]) / math.sqrt(2))
    for a in (0, 1):
        psi = tensor_product(basis_state(TensorRegister.qubits("A"), [a]), plus)
        rho = partial_trace(apply_unitary(psi, u), {"B"}).matrix
        assert np.allclose(rho, np.full((2, 2), 0.5))
    assert detect_signaling(u, ["A"], ["B"]).signaling


def test_sampled_mode_agrees_on_clear_cases():
    assert detect_signaling(gate(SWAP), ["A"], ["B"], mode="sampled", probes=32).signaling
    assert not detect_signaling(gate(np.eye(4)), ["A"], ["B"], mode="sampled", probes=32).signaling
    with pytest.raises(ValueError):
        detect_signaling(gate(SWAP), ["A"], ["B"], mode="sampled", probes=0)
    with pytest.raises(ValueError):
        detect_signaling(gate(SWAP), ["A"], ["B"], mode="bogus")


# -- local-horizon circuits ------------------------------------------------


def horizon_initial(seed):
    return haar_random_pure(TensorRegister.qubits("B", "N", "R"), seed)


def test_spectator_reduced_state_unchanged():
    circ = random_fig3_circuit(1, 1, seed=5)
    psi = horizon_initial(5)
    out = simulate_fig3(circ, psi)
    assert np.max(np.abs(partial_trace(out, {"R"}).matrix - partial_trace(psi, {"R"}).matrix)) < 1e-12
    assert out.register.labels == ("B'", "N'", "R'", "R")


def test_product_initial_state_stays_uncorrelated():
    circ = random_fig3_circuit(1, 1, seed=2)
    psi = basis_state(TensorRegister.qubits("B", "N", "R"), [0, 1, 0])
    out = simulate_fig3(circ, psi)
    assert abs(mutual_information(out, {"N'", "R'"}, {"R"})) < 1e-9


def test_interior_radiation_margin_on_two_hundred_circuits():
    worst = math.inf
    for i in range(200):
        circ = random_fig3_circuit(1, 1, seed=9, stream=(i,))
        # (B, N) maximally entangled with R = (Rb, Rn), scrambled on the R side
        psi = tensor_product(bell_pair("B", "Rb"), bell_pair("N", "Rn"))
        r_side = haar_random_unitary(4, 9, stream=(i,), register=TensorRegister.qubits("Rb", "Rn"))
        psi = apply_unitary(psi, r_side)
        out = simulate_fig3(circ, psi)
        margin = mutual_information(psi, {"N"}, {"Rb", "Rn"}) - mutual_information(out, {"R'"}, {"Rb", "Rn"})
        worst = min(worst, margin)
    assert worst >= -1e-9


def test_independent_infallen_matter_drops_out():
    psi = tensor_product(horizon_initial(3), haar_random_pure(TensorRegister.qubits("I"), 4))
    assert abs(mutual_information(psi, {"N", "I"}, {"R"}) - mutual_information(psi, {"N"}, {"R"})) < 1e-9


def test_intermediate_state_carries_channel():
    circ = random_fig3_circuit(1, 1, seed=1)
    _, mid = simulate_fig3(circ, horizon_initial(1), return_intermediate=True)
    assert "C" in mid.register.labels


# -- inequality suites -----------------------------------------------------


def test_unconstrained_suite_small_run():
    res = verify_eq2(30, seed=2)
    assert res.passed and res.min_margin >= -1e-9
    doc = res.to_dict()
    assert {"check", "samples", "shape", "min_margin", "threshold", "failures"} <= set(doc)


def test_unconstrained_product_state_both_sides_zero():
    psi = basis_state(TensorRegister.qubits("B", "N", "R"), [0, 0, 0])
    u = Unitary(
        TensorRegister.qubits("B", "N"),
        haar_random_unitary(4, 1).matrix,
        out_register=TensorRegister.qubits("B'", "R'"),
    )
    out = apply_unitary(psi, u)
    assert abs(mutual_information(psi, {"B", "N"}, {"R"})) < 1e-12
    assert abs(mutual_information(out, {"R'"}, {"R"})) < 1e-12


def test_fresh_ancilla_carries_nothing():
    psi = horizon_initial(6)
    fresh = tensor_product(psi, basis_state(TensorRegister.qubits("R'"), [0]))
    assert mutual_information(fresh, {"R'"}, {"R"}) == pytest.approx(0, abs=1e-12)
    assert mutual_information(psi, {"B", "N"}, {"R"}) >= 0


def test_nonsignaling_suite_small_run_and_counterexample():
    res = verify_eq6(20, seed=4)
    assert res.passed
    assert res.extras["max_signaling_magnitude"] < 1e-9
    ce = res.extras["counterexample"]
    assert ce["margin"] == pytest.approx(-2 * LN2, abs=1e-9)
    assert ce["signaling"]


def test_swap_counterexample_values():
    ce = swap_counterexample()
    assert ce["s_n_r"] == pytest.approx(0, abs=1e-12)
    assert ce["s_rprime_r"] == pytest.approx(2 * LN2, abs=1e-12)
    assert ce["signaling_magnitude"] == pytest.approx(1.0)


def test_verification_is_deterministic():
    assert verify_eq6(5, seed=7).to_dict() == verify_eq6(5, seed=7).to_dict()
