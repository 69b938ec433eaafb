"""Reshuffling, operator Schmidt decomposition and gate entanglement entropies.

Composite indices are lexicographic: row ``<m n>`` of an operator on
``C^N (x) C^N`` is ``m*N + n`` (0-based), matching ``numpy.kron``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidInputError
from .linalg_core import as_square_matrix, renyi_entropy

DEFAULT_RANK_TOL = 1e-10


def factor_dims(X, dims=None) -> tuple[int, int]:
    """Validate/infer the factor dimensions ``(N, N)`` of a bipartite operator."""
    L = np.shape(X)[0]
    if dims is None:
        N = math.isqrt(L)
        if N * N != L:
            raise InvalidInputError(f"operator order {L} is not a perfect square; pass dims")
        return N, N
    M, N = (int(d) for d in dims)
    if M != N:
        raise InvalidInputError(f"only equal factor dimensions are supported, got {dims}")
    if M * N != L:
        raise InvalidInputError(f"factor dims {dims} do not match operator order {L}")
    return M, N


def reshuffle(X, dims=None) -> np.ndarray:
    r"""Realignment ``X^R`` with ``X^R[<m mu>, <n nu>] = X[<m n>, <mu nu>]``.

    Each row of ``X`` is reshaped into an N x N block, blocks placed in
    lexicographic order. The map is an involution.
    """
    X = as_square_matrix(X, "X")
    M, N = factor_dims(X, dims)
    return X.reshape(M, N, M, N).transpose(0, 2, 1, 3).reshape(M * M, N * N)


def schmidt_spectrum(U, dims=None) -> np.ndarray:
    """Operator Schmidt coefficients ``Lambda_k`` (squared singular values of ``U^R``).

    Returns all ``N^2`` values, nonincreasing, zeros included. They sum to
    ``||U||_HS^2`` (``N^2`` for a unitary); divide by that to get the
    probability vector used by the entropies.
    """
    s = np.linalg.svd(reshuffle(U, dims), compute_uv=False)
    return s**2


def operator_schmidt_decomposition(U, rank_tol: float = DEFAULT_RANK_TOL, dims=None):
    """Operator Schmidt form ``U = sum_k sqrt(Lambda_k) B'_k (x) B''_k``.

    Parameters
    ----------
    U : (N^2, N^2) array_like
    rank_tol : float
        Terms with ``Lambda_k <= rank_tol * Lambda_max`` are dropped.

    Returns
    -------
    list of (weight, B1, B2)
        ``weight = sqrt(Lambda_k)``; ``B1``, ``B2`` are N x N and orthonormal
        in the Hilbert-Schmidt inner product.
    """
    if not rank_tol > 0:
        raise InvalidInputError(f"rank_tol must be positive, got {rank_tol!r}")
    M, N = factor_dims(np.asarray(U), dims)
    R = reshuffle(U, dims)
    W, s, Vh = np.linalg.svd(R)
    lam = s**2
    if lam[0] == 0:
        return []
    terms = []
    for k in np.flatnonzero(lam > rank_tol * lam[0]):
        # R = sum_k s_k w_k v_k^T with vec(B') = w_k and vec(B'') = Vh[k]
        terms.append((float(s[k]), W[:, k].reshape(M, M), Vh[k].reshape(N, N)))
    return terms


def gate_entanglement_entropy(U, q: float = 1.0, dims=None) -> float:
    """Renyi-``q`` entropy of the normalised Schmidt vector of a gate (q=1: Schmidt strength)."""
    if not q >= 0:
        raise InvalidInputError(f"Renyi order must be >= 0, got {q!r}")
    lam = schmidt_spectrum(U, dims)
    return renyi_entropy(lam / lam.sum(), q)


def fourier_gate(L: int) -> np.ndarray:
    """Fourier unitary of order ``L = N^2``: ``F[k, l] = exp(2 pi i k l / L) / sqrt(L)``."""
    L = int(L)
    N = math.isqrt(L) if L > 0 else 0
    if L < 1 or N * N != L:
        raise InvalidInputError(f"Fourier gate order must be a perfect square, got {L}")
    k = np.arange(L)
    return np.exp(2j * np.pi * np.outer(k, k) / L) / np.sqrt(L)
