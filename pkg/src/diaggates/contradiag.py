"""Contra-diagonalization of Hermitian matrices.

A Hermitian matrix is brought to contradiagonal form (all diagonal entries
equal to ``Tr H / N``) by diagonalizing it and then rotating with a complex
Hadamard matrix. The same orbit also contains every diagonal majorized by the
spectrum; :func:`prescribe_diagonal` builds the rotation for such a target
from a chain of planar rotations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleTargetError, InvalidInputError
from .linalg_core import (RANK_TOL, as_square_matrix, check_density_matrix, check_hermitian,
                          check_unitary, eig_hermitian, majorizes, shannon_entropy)

HADAMARD_TOL = 1e-10


def fourier_matrix(N: int) -> np.ndarray:
    """Fourier matrix ``F[j, k] = exp(2 pi i j k / N) / sqrt(N)``.

    The ``2 pi`` is required for unitarity; ``exp(pi i j k / N)`` is not a
    Hadamard matrix for N > 1.
    """
    if int(N) != N or N < 1:
        raise InvalidInputError(f"order must be a positive integer, got {N!r}")
    k = np.arange(int(N))
    return np.exp(2j * np.pi * np.outer(k, k) / N) / np.sqrt(N)


def sylvester_hadamard(N: int) -> np.ndarray:
    """Real Hadamard matrix of order ``N = 2^m`` (Kronecker powers of F_2), normalised to be unitary."""
    if int(N) != N or N < 1 or (int(N) & (int(N) - 1)):
        raise InvalidInputError(f"Sylvester construction needs a power of two, got {N!r}")
    H = np.ones((1, 1))
    H2 = np.array([[1.0, 1.0], [1.0, -1.0]])
    while H.shape[0] < N:
        H = np.kron(H, H2)
    return H.astype(complex) / np.sqrt(N)


def check_hadamard(F, name="F", tol=HADAMARD_TOL) -> np.ndarray:
    """Validate a (unitary-normalised) complex Hadamard matrix."""
    F = as_square_matrix(F, name)
    N = F.shape[0]
    if np.max(np.abs(np.abs(F) - 1 / np.sqrt(N))) > tol:
        raise InvalidInputError(f"{name} entries do not all have modulus 1/sqrt({N})")
    return check_unitary(F, name, tol)


def enphase(F, left_phases=None, right_phases=None, left_perm=None, right_perm=None) -> np.ndarray:
    """Equivalent Hadamard matrix ``P1 E1 F E2 P2``.

    Phases are angles in radians (diagonals of ``E1``, ``E2``). A permutation
    ``p`` acts as ``(P1 X)[i] = X[p[i]]`` on rows and ``(X P2)[:, j] = X[:, p[j]]``
    on columns.
    """
    F = check_hadamard(F)
    N = F.shape[0]
    out = F.copy()
    if left_phases is not None:
        out = np.exp(1j * _vec(left_phases, N, "left_phases"))[:, None] * out
    if right_phases is not None:
        out = out * np.exp(1j * _vec(right_phases, N, "right_phases"))[None, :]
    if left_perm is not None:
        out = out[_perm(left_perm, N), :]
    if right_perm is not None:
        out = out[:, _perm(right_perm, N)]
    return out


def _vec(v, N, name):
    v = np.asarray(v, dtype=float).ravel()
    if v.size != N:
        raise InvalidInputError(f"{name} must have length {N}")
    return v


def _perm(p, N):
    p = np.asarray(p).ravel()
    if p.size != N or sorted(p.tolist()) != list(range(N)):
        raise InvalidInputError(f"{p.tolist()} is not a permutation of 0..{N - 1}")
    return p.astype(int)


def offdiag_weight(G) -> float:
    """``sum_{i != j} |G_ij|^2`` of a Hermitian matrix."""
    G = check_hermitian(G, "G")
    return float(np.sum(np.abs(G) ** 2) - np.sum(np.abs(np.diag(G)) ** 2))


@dataclass
class ContradiagResult:
    """Contradiagonal form ``A = U_max H U_max^dag``.

    Attributes
    ----------
    A : ndarray
        Matrix with every diagonal entry equal to ``Tr H / N``.
    U_max : ndarray
        The contra-diagonalizing unitary ``F @ U_min``.
    f : float
        Off-diagonal weight achieved by ``A``.
    f_max : float
        Analytic maximum ``Tr H^2 - (Tr H)^2 / N`` over the unitary orbit.
    """

    A: np.ndarray
    U_max: np.ndarray
    f: float
    f_max: float

    @property
    def trace_constant(self) -> float:
        return float(np.trace(self.A).real / self.A.shape[0])


def max_offdiag_weight(H) -> float:
    """``Tr H^2 - (Tr H)^2 / N``."""
    H = check_hermitian(H)
    tr = np.trace(H).real
    return float(np.trace(H @ H).real - tr**2 / H.shape[0])


def contradiagonalize(H, F=None) -> ContradiagResult:
    """Rotate a Hermitian matrix into a basis where its diagonal is flat.

    ``U_min`` maps ``H`` to its eigenbasis (``U_min H U_min^dag`` diagonal), so
    ``U_max = F U_min`` for any complex Hadamard ``F`` (Fourier by default).
    """
    H = check_hermitian(H)
    N = H.shape[0]
    F = fourier_matrix(N) if F is None else check_hadamard(F)
    if F.shape != H.shape:
        raise InvalidInputError(f"Hadamard order {F.shape[0]} does not match H order {N}")
    _, V = eig_hermitian(H)
    U_max = F @ V.conj().T
    A = U_max @ H @ U_max.conj().T
    A = (A + A.conj().T) / 2
    return ContradiagResult(A=A, U_max=U_max, f=offdiag_weight(A), f_max=max_offdiag_weight(H))


def max_orbit_distance(D) -> float:
    """``max_V min_P ||D - P V D V^dag P^T||_HS^2 = 2 (Tr D^2 - (Tr D)^2 / N)`` for diagonal D."""
    D = as_square_matrix(D, "D")
    d = np.diag(D)
    if np.max(np.abs(D - np.diag(d))) > 0 or np.max(np.abs(d.imag)) > 0:
        raise InvalidInputError("D must be a real diagonal matrix")
    d = d.real
    return float(2 * (np.sum(d**2) - d.sum() ** 2 / d.size))


def orbit_distance(D, V) -> float:
    """``min_P ||D - P V D V^dag P^T||_HS^2`` by enumerating all permutations (N <= 8)."""
    D = as_square_matrix(D, "D")
    V = check_unitary(V, "V")
    N = D.shape[0]
    if N > 8:
        raise InvalidInputError("permutation enumeration limited to N <= 8")
    G = V @ D @ V.conj().T
    best = np.inf
    for p in itertools.permutations(range(N)):
        p = list(p)
        best = min(best, float(np.sum(np.abs(D - G[np.ix_(p, p)]) ** 2)))
    return best


def majorization_chain_check(sigma, U) -> bool:
    """Check ``diag(sigma) < diag(U sigma U^dag) < eig(sigma)`` for a contradiagonal state."""
    sigma = check_density_matrix(sigma, "sigma")
    U = check_unitary(U)
    N = sigma.shape[0]
    d0 = np.diag(sigma).real
    if np.max(np.abs(d0 - 1.0 / N)) > 1e-9:
        raise InvalidInputError("sigma is not contradiagonal (diagonal entries differ from 1/N)")
    d1 = np.diag(U @ sigma @ U.conj().T).real
    spec = np.linalg.eigvalsh(sigma)
    return majorizes(d1, d0) and majorizes(spec, d1)


def _robin_hood_rotations(y, x, tol):
    """Orthogonal W with ``diag(W diag(y) W^T) = x``; ``y``, ``x`` sorted nonincreasing.

    Each step moves mass between the last index j with ``d_j > x_j`` and the first
    later index k with ``d_k < x_k`` until one of them hits its target. The pair
    always lies in different rotation-connected blocks, so ``M_jk = 0`` and the
    rotation acts on the diagonal as a two-entry average with weight cos^2.
    """
    N = y.size
    d = y.astype(float).copy()
    W = np.eye(N)
    for _ in range(N):
        over = np.flatnonzero(d - x > tol)
        if over.size == 0:
            break
        j = over[-1]
        under = np.flatnonzero((x - d > tol) & (np.arange(N) > j))
        if under.size == 0:
            break
        k = under[0]
        delta = min(d[j] - x[j], x[k] - d[k])
        new_j = d[j] - delta
        c2 = (new_j - d[k]) / (d[j] - d[k])
        c = np.sqrt(np.clip(c2, 0.0, 1.0))
        s = np.sqrt(np.clip(1.0 - c2, 0.0, 1.0))
        G = np.eye(N)
        G[j, j] = G[k, k] = c
        G[j, k] = s
        G[k, j] = -s
        W = G @ W
        d[j], d[k] = new_j, d[k] + delta
        # pin the coordinate that reached its target
        if abs(d[j] - x[j]) <= abs(d[k] - x[k]):
            d[j] = x[j]
        else:
            d[k] = x[k]
    return W


def prescribe_diagonal(H, x) -> np.ndarray:
    """Unitary ``V`` such that ``diag(V H V^dag) = x``.

    Parameters
    ----------
    H : (N, N) array_like
        Hermitian.
    x : (N,) array_like
        Target diagonal; must be majorized by the spectrum of ``H``.

    Raises
    ------
    InfeasibleTargetError
        If ``x`` is not majorized by the spectrum.
    """
    H = check_hermitian(H)
    N = H.shape[0]
    x = np.asarray(x, dtype=float).ravel()
    if x.size != N:
        raise InvalidInputError(f"target has length {x.size}, expected {N}")
    y, U = eig_hermitian(H)
    if not majorizes(y, x):
        raise InfeasibleTargetError("target diagonal is not majorized by the spectrum of H")
    order = np.argsort(-x, kind="stable")
    scale = max(1.0, float(np.max(np.abs(y))))
    W = _robin_hood_rotations(y, x[order], tol=1e-13 * scale)
    # row r of W carries target x[order[r]]; move it to position order[r]
    P = np.zeros((N, N))
    P[order, np.arange(N)] = 1.0
    return P @ W @ U.conj().T


def measurement_entropy(rho, basis) -> float:
    """Shannon entropy of the outcome distribution ``diag(B rho B^dag)``."""
    rho = check_density_matrix(rho)
    B = check_unitary(basis, "basis")
    p = np.diag(B @ rho @ B.conj().T).real
    return shannon_entropy(p / p.sum())


def copied_information(rho) -> float:
    """``ln N - S(rho)``: information sent to the environment by dephasing in a contradiagonal basis."""
    rho = check_density_matrix(rho)
    return float(np.log(rho.shape[0]) - shannon_entropy(np.linalg.eigvalsh(rho)))
