import numpy as np
import pytest
from scipy import stats

from diaggates.ensembles import (TAG_PROBES, EnsembleConfig, RandomStream, diagonal_gate_to_unimodular,
                                 sample, sample_diagonal_gate, sample_ginibre, sample_haar_state,
                                 sample_haar_unitary, sample_hs_state, sample_unimodular,
                                 states_from_unimodular, uniform_batch, unimodular_to_state)
from diaggates.errors import InvalidInputError
from diaggates.linalg_core import singular_values
from diaggates.schmidt import schmidt_spectrum


def test_stream_determinism():
    a = RandomStream(7).uniform(10)
    b = RandomStream(7).uniform(10)
    c = RandomStream(8).uniform(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((a >= 0) & (a < 1))
    assert not np.array_equal(RandomStream(7, tag=0).uniform(4), RandomStream(7, tag=1).uniform(4))


def test_batch_matches_per_sample_and_chunking():
    for kind in ("unimodular", "ginibre", "hilbert_schmidt_state", "diagonal_gate", "haar_pure_state"):
        cfg = EnsembleConfig(kind, 3, 25, seed=11)
        full = cfg.batch(0, 25)
        for i in (0, 7, 24):
            assert np.array_equal(sample(cfg, i), full[i])
        pieces = np.concatenate([b for _, b in cfg.chunks(4)])
        assert np.array_equal(pieces, full)


def test_sample_unimodular_uses_config_stream():
    cfg = EnsembleConfig("unimodular", 4, 10, seed=5)
    for i in range(3):
        assert np.array_equal(sample_unimodular(4, cfg.stream(i)), cfg.batch(i, 1)[0])


def test_uniform_batch_offsets():
    u = uniform_batch(3, 0, 10, 6)
    assert np.array_equal(uniform_batch(3, 4, 3, 6), u[4:7])


def test_invalid_inputs():
    with pytest.raises(InvalidInputError):
        EnsembleConfig("unimodular", 0, 10, 0)
    with pytest.raises(InvalidInputError):
        EnsembleConfig("unimodular", 2, 0, 0)
    with pytest.raises(InvalidInputError):
        EnsembleConfig("nonsense", 2, 10, 0)
    with pytest.raises(InvalidInputError):
        RandomStream(-1)


def test_unimodular_examples(stream):
    A = sample_unimodular(1, stream)
    assert A.shape == (1, 1) and np.isclose(abs(A[0, 0]), 1)
    A = sample_unimodular(2, RandomStream(42))
    assert np.max(np.abs(np.abs(A) - 1)) < 1e-15
    assert np.allclose(unimodular_to_state(sample_unimodular(1, stream)), [[1]])
    rho = unimodular_to_state(sample_unimodular(2, stream))
    assert np.isclose(rho[0, 0], 0.5) and np.isclose(rho[1, 1], 0.5)
    rho = unimodular_to_state(sample_unimodular(4, stream))
    assert np.max(np.abs(np.diag(rho) - 0.25)) < 1e-14
    with pytest.raises(InvalidInputError):
        unimodular_to_state(2 * np.ones((2, 2)))


def test_unimodular_entry_mean():
    A = EnsembleConfig("unimodular", 2, 100_000, 3).batch(0, 100_000)[:, 0, 1]
    bound = 3 / np.sqrt(100_000)
    assert abs(A.real.mean()) < bound and abs(A.imag.mean()) < bound


def test_ginibre_moments_and_exponential_law():
    G = EnsembleConfig("ginibre", 2, 100_000, 4).batch(0, 100_000)
    g = G[:, 1, 0]
    assert abs(g.mean()) < 3 * np.sqrt(1 / 100_000) * np.sqrt(2)
    p = np.abs(g) ** 2
    assert abs(p.mean() - 1) < 3 * p.std() / np.sqrt(p.size)
    g1 = np.abs(EnsembleConfig("ginibre", 1, 20_000, 5).batch(0, 20_000)[:, 0, 0]) ** 2
    assert stats.kstest(g1, "expon").pvalue > 0.01


def test_hs_state_examples(stream):
    assert np.allclose(sample_hs_state(1, stream), [[1]])
    rho = EnsembleConfig("hilbert_schmidt_state", 2, 100_000, 6).batch(0, 100_000)
    lam = np.linalg.eigvalsh(rho)
    for n, ref in ((2, 4 / 5), (3, 7 / 10)):
        v = np.sum(lam**n, axis=1)
        assert abs(v.mean() - ref) < 3 * v.std() / np.sqrt(v.size)


def test_diagonal_gate_examples(stream):
    U = sample_diagonal_gate(1, stream)
    assert U.shape == (1, 1)
    U = sample_diagonal_gate(2, stream)
    assert U.shape == (4, 4) and np.count_nonzero(U - np.diag(np.diag(U))) == 0
    assert np.allclose(np.abs(np.diag(U)), 1)
    assert np.max(np.abs(U.conj().T @ U - np.eye(4))) < 1e-15
    u = np.diag(U)
    assert np.array_equal(diagonal_gate_to_unimodular(U), [[u[0], u[1]], [u[2], u[3]]])
    assert np.array_equal(diagonal_gate_to_unimodular(np.eye(9)), np.ones((3, 3)))
    with pytest.raises(InvalidInputError):
        diagonal_gate_to_unimodular(np.eye(3))
    with pytest.raises(InvalidInputError):
        diagonal_gate_to_unimodular(np.ones((4, 4)))


def test_diagonal_gate_schmidt_round_trip(stream):
    for N in (2, 3, 4):
        U = sample_diagonal_gate(N, stream)
        sv = singular_values(diagonal_gate_to_unimodular(U)) ** 2
        assert np.allclose(schmidt_spectrum(U), np.concatenate([sv, np.zeros(N * N - N)]), atol=1e-12)


def test_haar_state_intensities():
    N = 3
    psi = EnsembleConfig("haar_pure_state", N, 100_000, 7).batch(0, 100_000)
    assert np.allclose(np.linalg.norm(psi, axis=1), 1)
    a = np.abs(psi[:, 0]) ** 2
    b = np.abs(psi[:, 1]) ** 2
    assert abs(a.mean() - 1 / N) < 3 * a.std() / np.sqrt(a.size)
    ab = a * b
    assert abs(ab.mean() - 1 / (N * (N + 1))) < 3 * ab.std() / np.sqrt(ab.size)


def test_haar_state_and_unitary_basic(stream):
    assert np.isclose(abs(sample_haar_state(1, stream)[0]), 1)
    V = sample_haar_unitary(5, stream)
    assert np.allclose(V.conj().T @ V, np.eye(5), atol=1e-12)


def test_states_from_unimodular_batched():
    A = EnsembleConfig("unimodular", 3, 4, 0).batch(0, 4)
    rho = states_from_unimodular(A)
    for a, r in zip(A, rho):
        assert np.allclose(r, unimodular_to_state(a))


def test_default_chunks_bound_memory():
    cfg = EnsembleConfig("diagonal_gate", 8, 100, 0)
    sizes = [b.shape[0] for _, b in cfg.chunks()]
    assert sum(sizes) == 100 and max(sizes) * 8**4 <= 2**22
    ref = cfg.batch(0, 100)
    assert np.array_equal(np.concatenate([b for _, b in cfg.chunks()]), ref)
