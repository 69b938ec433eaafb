import numpy as np
import pytest

from diaggates.ensembles import RandomStream, sample_diagonal_gate, sample_haar_state, sample_haar_unitary
from diaggates.epower import (diag_ensemble_epower_mc, diag_gate_avg_purity, entangling_power_mc,
                              linear_entanglement, mean_epower_diag, mean_epower_haar, product_states)
from diaggates.errors import InvalidInputError
from diaggates.moments import ue_moment

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def test_linear_entanglement(stream):
    a, b = sample_haar_state(3, stream), sample_haar_state(3, stream)
    assert abs(linear_entanglement(np.kron(a, b))) < 1e-12
    for N in (2, 3, 4):
        bell = np.eye(N).ravel() / np.sqrt(N)
        assert np.isclose(linear_entanglement(bell), 1 - 1 / N)
    psi = sample_haar_state(4, stream)
    s = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
    assert np.isclose(linear_entanglement(psi), 1 - np.sum(s**4))
    with pytest.raises(InvalidInputError):
        linear_entanglement(2 * psi)


def test_product_states_normalised_and_chunk_free():
    p1, p2 = product_states(3, 5, 0, 10)
    assert np.allclose(np.linalg.norm(p1, axis=1), 1) and np.allclose(np.linalg.norm(p2, axis=1), 1)
    q1, q2 = product_states(3, 5, 4, 3)
    assert np.array_equal(q1, p1[4:7]) and np.array_equal(q2, p2[4:7])


def test_local_and_identity_gates_have_zero_power(stream):
    U = np.kron(sample_haar_unitary(2, stream), sample_haar_unitary(2, stream))
    r = entangling_power_mc(U, 500, 1)
    assert abs(r.estimate) < 1e-12 and r.stderr < 1e-12
    r = entangling_power_mc(np.eye(9), 500, 1)
    assert abs(r.estimate) < 1e-12 and r.reference == 0


def test_diag_gate_avg_purity(stream):
    assert np.isclose(diag_gate_avg_purity(np.eye(4)), 1)
    U = sample_diagonal_gate(2, stream)
    p = diag_gate_avg_purity(U)
    assert 0 < p <= 1
    r = entangling_power_mc(U, 100_000, 2)
    assert np.isclose(r.reference, 1 - p)
    assert abs(r.z_score) < 4


def test_phase_average_of_purity():
    N = 2
    avg = (N**2 + 2 * N**3 + N**4 * float(ue_moment(2, N))) / (N**2 * (N + 1) ** 2)
    assert np.isclose(avg, 8 / 9)
    assert np.isclose(1 - avg, mean_epower_diag(2))


def test_mean_epower_closed_forms():
    assert np.isclose(mean_epower_diag(2), 1 / 9)
    assert mean_epower_diag(1) == 0
    assert np.isclose(mean_epower_haar(2), 1 / 5)
    assert mean_epower_haar(1) == 0
    assert all(mean_epower_haar(N) > mean_epower_diag(N) for N in range(2, 51))
    assert mean_epower_diag(10**6) > 0.9999
    # purity of the diagonal-gate outputs is about 4/N, twice the random-state value 2/N
    N = 10**4
    assert np.isclose((1 - mean_epower_diag(N)) * N, 4, rtol=1e-3)


def test_epower_local_invariance(stream):
    # e_p is invariant under local unitaries on either side; compare two
    # independent MC estimates of CNOT and a locally dressed CNOT
    L = [np.kron(sample_haar_unitary(2, stream), sample_haar_unitary(2, stream)) for _ in range(2)]
    a = entangling_power_mc(CNOT, 100_000, 3)
    b = entangling_power_mc(L[0] @ CNOT @ L[1], 100_000, 4)
    z = (a.estimate - b.estimate) / np.hypot(a.stderr, b.stderr)
    assert abs(z) < 4
    assert abs(a.estimate - 2 / 9) < 4 * a.stderr


def test_ensemble_epower_small():
    r = diag_ensemble_epower_mc(2, 2000, 50, 1)
    assert r.reference == pytest.approx(1 / 9)
    assert abs(r.z_score) < 4
    # batch chunking does not change the estimate
    assert diag_ensemble_epower_mc(2, 300, 10, 2, chunk_gates=64).estimate == pytest.approx(
        diag_ensemble_epower_mc(2, 300, 10, 2).estimate, rel=1e-12)
