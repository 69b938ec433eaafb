import itertools
import math

import numpy as np
import pytest

from diaggates.contradiag import (check_hadamard, contradiagonalize, copied_information, enphase,
                                  fourier_matrix, majorization_chain_check, max_offdiag_weight,
                                  max_orbit_distance, measurement_entropy, offdiag_weight, orbit_distance,
                                  prescribe_diagonal, sylvester_hadamard)
from diaggates.ensembles import sample_haar_unitary, sample_unimodular, unimodular_to_state
from diaggates.errors import InfeasibleTargetError, InvalidInputError
from diaggates.linalg_core import eig_hermitian, majorizes, shannon_entropy

from conftest import random_hermitian, random_spectrum


def test_fourier_matrix():
    assert np.allclose(fourier_matrix(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    F3 = fourier_matrix(3)
    assert np.max(np.abs(F3.conj().T @ F3 - np.eye(3))) < 1e-14
    assert np.allclose(np.abs(fourier_matrix(4)), 0.5)
    assert np.allclose(sylvester_hadamard(4) @ sylvester_hadamard(4).T, np.eye(4))
    with pytest.raises(InvalidInputError):
        sylvester_hadamard(6)


def test_enphase(stream):
    F = fourier_matrix(3)
    assert np.array_equal(enphase(F, np.zeros(3), np.zeros(3), [0, 1, 2], [0, 1, 2]), F)
    phi = 0.7
    F2p = enphase(fourier_matrix(2), left_phases=[phi, 0])
    assert np.allclose(F2p, np.array([[np.exp(1j * phi), np.exp(1j * phi)], [1, -1]]) / np.sqrt(2))
    sigma = F2p @ np.diag([1.0, 0.0]) @ F2p.conj().T
    assert np.allclose(sigma, np.array([[1, np.exp(1j * phi)], [np.exp(-1j * phi), 1]]) / 2)
    G = enphase(F, stream.phases(3), stream.phases(3), [2, 0, 1], [1, 2, 0])
    check_hadamard(G)


def test_offdiag_weight(stream):
    assert offdiag_weight(np.diag([1.0, 2.0, 3.0])) == 0
    assert np.isclose(offdiag_weight(np.full((2, 2), 0.5)), 0.5)
    G = random_hermitian(5, stream)
    assert np.isclose(offdiag_weight(G), np.trace(G @ G).real - np.sum(np.diag(G).real ** 2))


def test_contradiagonalize_examples():
    r = contradiagonalize(np.diag([1.0, 0.0]), fourier_matrix(2))
    assert np.allclose(r.A, np.full((2, 2), 0.5))
    assert np.isclose(r.f, 0.5) and np.isclose(r.f_max, 0.5)
    r = contradiagonalize(2.5 * np.eye(3))
    assert np.allclose(r.A, 2.5 * np.eye(3)) and abs(r.f) < 1e-12
    for N in (3, 5, 8):
        H = np.zeros((N, N))
        H[0, 0] = 1
        assert np.allclose(contradiagonalize(H).A, 1.0 / N)


def test_contradiagonalize_random(stream):
    for N in range(2, 10):
        H = random_hermitian(N, stream)
        for F in (None, enphase(fourier_matrix(N), stream.phases(N), stream.phases(N))):
            r = contradiagonalize(H, F)
            assert abs(r.f - r.f_max) < 1e-8
            assert np.allclose(np.diag(r.A), np.trace(H) / N, atol=1e-9)
            assert np.isclose(r.trace_constant, np.trace(H).real / N)
            assert np.allclose(r.U_max @ H @ r.U_max.conj().T, r.A, atol=1e-10)
        for _ in range(20):
            V = sample_haar_unitary(N, stream)
            assert offdiag_weight(V @ H @ V.conj().T) <= max_offdiag_weight(H) + 1e-8


def test_contradiagonalize_validation():
    with pytest.raises(InvalidInputError):
        contradiagonalize(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidInputError):
        contradiagonalize(np.eye(2), fourier_matrix(3))


def test_orbit_distance():
    assert np.isclose(max_orbit_distance(np.diag([1.0, 0.0])), 1)
    assert max_orbit_distance(3 * np.eye(4)) == 0
    D = np.diag([3.0, 1.0])
    assert np.isclose(orbit_distance(D, fourier_matrix(2)), 4)
    assert np.isclose(max_orbit_distance(D), 4)


def test_orbit_distance_never_exceeds_max(stream):
    for N in (2, 3, 4):
        D = np.diag(np.sort(stream.uniform(N))[::-1])
        for _ in range(10):
            assert orbit_distance(D, sample_haar_unitary(N, stream)) <= max_orbit_distance(D) + 1e-9


def test_majorization_chain(stream):
    sigma = unimodular_to_state(sample_unimodular(4, stream))
    assert majorization_chain_check(sigma, np.eye(4))
    _, V = eig_hermitian(sigma)
    assert majorization_chain_check(sigma, V.conj().T)
    for _ in range(1000):
        U = sample_haar_unitary(4, stream)
        sigma = unimodular_to_state(sample_unimodular(4, stream))
        assert majorization_chain_check(sigma, U)
    with pytest.raises(InvalidInputError):
        majorization_chain_check(np.diag([0.7, 0.3]), np.eye(2))


def test_prescribe_diagonal_flat(stream):
    H = random_hermitian(5, stream)
    V = prescribe_diagonal(H, np.full(5, np.trace(H).real / 5))
    G = V @ H @ V.conj().T
    assert np.allclose(np.diag(G), np.diag(contradiagonalize(H).A), atol=1e-9)


def test_prescribe_diagonal_top(stream):
    H = random_hermitian(4, stream)
    y, _ = eig_hermitian(H)
    V = prescribe_diagonal(H, y)
    G = V @ H @ V.conj().T
    assert np.allclose(G, np.diag(y), atol=1e-9)


def test_prescribe_diagonal_robin_hood_targets(stream):
    for N in (2, 3, 4, 6):
        for _ in range(10):
            H = random_hermitian(N, stream)
            y, _ = eig_hermitian(H)
            x = y.copy()
            for _ in range(3 * N):
                i, j = (stream.uniform(2) * N).astype(int)
                t = stream.uniform(1)[0]
                x[i], x[j] = t * x[i] + (1 - t) * x[j], (1 - t) * x[i] + t * x[j]
            stream_perm = np.argsort(stream.uniform(N))
            x = x[stream_perm]
            assert majorizes(y, x, tol=1e-9)
            V = prescribe_diagonal(H, x)
            G = V @ H @ V.conj().T
            assert np.max(np.abs(np.diag(G).real - x)) < 1e-8
            assert np.allclose(np.linalg.eigvalsh(G)[::-1], y, atol=1e-9)
            assert np.allclose(V.conj().T @ V, np.eye(N), atol=1e-10)


def test_prescribe_diagonal_infeasible(stream):
    H = np.diag([0.6, 0.4])
    with pytest.raises(InfeasibleTargetError):
        prescribe_diagonal(H, [0.9, 0.1])
    with pytest.raises(InvalidInputError):
        prescribe_diagonal(H, [0.5, 0.5, 0.0])


def test_measurement_entropy(stream):
    p = random_spectrum(4, stream)
    W = sample_haar_unitary(4, stream)
    rho = W @ np.diag(p) @ W.conj().T
    assert np.isclose(measurement_entropy(rho, W.conj().T), shannon_entropy(p))
    r = contradiagonalize(rho)
    assert np.isclose(measurement_entropy(rho, r.U_max), math.log(4))
    assert np.isclose(copied_information(rho), math.log(4) - shannon_entropy(p))
    assert np.isclose(measurement_entropy(rho, r.U_max) - shannon_entropy(p), copied_information(rho))
