"""Dense complex linear algebra, majorization and entropy functionals.

Every spectrum-like output is sorted nonincreasingly and every entropy is in
nats.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

#: absolute tolerance for positivity, rank and normalisation checks
RANK_TOL = 1e-10
#: tolerance used when checking hermiticity of an input
HERMITIAN_TOL = 1e-10


def as_square_matrix(A, name="A") -> np.ndarray:
    """Return ``A`` as a finite complex square ndarray or raise."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidInputError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return A.astype(complex, copy=False)


def hermiticity_residual(H) -> float:
    H = np.asarray(H)
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0


def check_hermitian(H, name="H", tol=HERMITIAN_TOL) -> np.ndarray:
    H = as_square_matrix(H, name)
    res = hermiticity_residual(H)
    if res > tol:
        raise InvalidInputError(f"{name} is not Hermitian (max |H - H^dag| = {res:.3g})")
    return H


def check_unitary(U, name="U", tol=1e-9) -> np.ndarray:
    U = as_square_matrix(U, name)
    res = float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
    if res > tol:
        raise InvalidInputError(f"{name} is not unitary (max |U^dag U - I| = {res:.3g})")
    return U


def check_density_matrix(rho, name="rho") -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD and unit trace to ``RANK_TOL``."""
    rho = check_hermitian(rho, name)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > RANK_TOL:
        raise InvalidInputError(f"{name} has trace {tr!r}, expected 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -RANK_TOL:
        raise InvalidInputError(f"{name} has negative eigenvalue {lo:.3g}")
    return rho


def as_probability_vector(p, name="p") -> np.ndarray:
    """Validate ``p`` as a probability vector and return it sorted nonincreasingly.

    Entries in ``[-RANK_TOL, 0)`` are treated as rounding noise and clipped.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0:
        raise InvalidInputError(f"{name} is empty")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError(f"{name} has non-finite entries")
    if p.min() < -RANK_TOL:
        raise InvalidInputError(f"{name} has negative entry {p.min():.3g}")
    if abs(p.sum() - 1.0) > RANK_TOL:
        raise InvalidInputError(f"{name} sums to {p.sum()!r}, expected 1")
    return np.sort(np.clip(p, 0.0, None), kind="stable")[::-1]


def singular_values(A) -> np.ndarray:
    """Singular values of ``A`` in nonincreasing order."""
    A = as_square_matrix(A)
    return np.linalg.svd(A, compute_uv=False)


def eig_hermitian(H):
    """Spectral decomposition of a Hermitian matrix.

    Parameters
    ----------
    H : (N, N) array_like
        Hermitian to within ``HERMITIAN_TOL``.

    Returns
    -------
    spectrum : (N,) ndarray
        Real eigenvalues, nonincreasing. Ties keep LAPACK's order.
    U : (N, N) ndarray
        Unitary whose columns are the matching eigenvectors, so that
        ``H = U @ diag(spectrum) @ U^dag``.
    """
    H = check_hermitian(H)
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def majorizes(y, x, tol=RANK_TOL) -> bool:
    """True if ``y`` majorizes ``x`` (``x`` is majorized by ``y``).

    Both vectors are sorted nonincreasingly first. Partial sums of ``x`` may
    exceed those of ``y`` by at most ``tol``; totals must agree within ``tol``.
    """
    y = np.asarray(y, dtype=float).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != y.shape:
        raise InvalidInputError(f"length mismatch: {y.size} vs {x.size}")
    cy = np.cumsum(np.sort(y)[::-1])
    cx = np.cumsum(np.sort(x)[::-1])
    if abs(cy[-1] - cx[-1]) > tol:
        return False
    return bool(np.all(cx[:-1] <= cy[:-1] + tol))


def shannon_entropy(p) -> float:
    """Shannon entropy ``-sum p ln p`` of a probability vector, with 0 ln 0 = 0."""
    p = as_probability_vector(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def renyi_entropy(p, q: float) -> float:
    """Renyi entropy of order ``q >= 0`` in nats.

    ``q = 1`` is the Shannon entropy and ``q = 0`` the Hartley entropy
    ``ln K``, K counting entries above ``RANK_TOL``.
    """
    if not q >= 0:
        raise InvalidInputError(f"Renyi order must be >= 0, got {q!r}")
    p = as_probability_vector(p)
    if q == 1:
        return shannon_entropy(p)
    if q == 0:
        return float(np.log(np.count_nonzero(p > RANK_TOL)))
    nz = p[p > 0]
    t = q - 1.0
    if abs(t) < 0.5:
        # ln sum p^q = log1p(sum p (p^t - 1)), accurate as q -> 1
        return float(-np.log1p(np.sum(nz * np.expm1(t * np.log(nz)))) / t)
    return float(np.log(np.sum(nz**q)) / (1.0 - q))


def von_neumann_entropy(rho) -> float:
    """Shannon entropy of the spectrum of a density matrix."""
    rho = check_density_matrix(rho)
    return shannon_entropy(np.linalg.eigvalsh(rho))


def batch_entropy(spectra) -> np.ndarray:
    """Row-wise Shannon entropy of a stack of nonnegative spectra (no validation)."""
    p = np.clip(np.asarray(spectra, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)
