"""Entangling power of bipartite gates (linear-entropy version).

``e_p(U)`` is the mean linear entropy ``1 - Tr mu^2`` of ``U (psi1 (x) psi2)``
over Haar-random product states. For diagonal gates the product-state average
has a closed form in the purity of ``rho = A A^dag / N^2`` built from the
reshaped diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensembles import (TAG_ENSEMBLE, TAG_PRODUCT_STATES, _box_muller, _check_dim,
                        diagonal_gate_to_unimodular, uniform_batch, unimodular_to_state)
from .errors import InvalidInputError
from .linalg_core import as_square_matrix, check_unitary
from .schmidt import factor_dims

DEFAULT_SAMPLES = 100_000


@dataclass
class EpowerReport:
    """Monte Carlo estimate of ``e_p`` with its standard error and an analytic reference."""

    estimate: float
    stderr: float
    samples: int
    reference: float | None = None
    gate: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def z_score(self) -> float:
        if self.reference is None:
            return float("nan")
        if self.stderr == 0:
            return 0.0 if self.estimate == self.reference else float("inf")
        return (self.estimate - self.reference) / self.stderr


def _purities(psi: np.ndarray, N: int) -> np.ndarray:
    # Tr mu^2 = sum_k s_k^4 over Schmidt values of the reshaped amplitudes
    s = np.linalg.svd(psi.reshape(-1, N, N), compute_uv=False)
    return np.sum(s**4, axis=-1)


def linear_entanglement(psi, dims=None) -> float:
    """Linear entropy ``1 - Tr mu^2`` of a pure state on ``C^N (x) C^N``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    N, _ = factor_dims(psi, dims)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise InvalidInputError("state vector is not normalised")
    return float(1.0 - _purities(psi, N)[0])


def product_states(N: int, seed: int, start: int, count: int, tag: int = TAG_PRODUCT_STATES):
    """Haar pairs ``(psi1, psi2)`` for samples ``start..start+count-1``; each is ``(count, N)``."""
    u = uniform_batch(seed, start, count, 4 * N, tag=tag)
    z = _box_muller(u[:, 0::2], u[:, 1::2])
    z1, z2 = z[:, :N], z[:, N:]
    return (z1 / np.linalg.norm(z1, axis=1, keepdims=True),
            z2 / np.linalg.norm(z2, axis=1, keepdims=True))


def _linear_entropies(U, N, seed, start, count):
    p1, p2 = product_states(N, seed, start, count)
    psi = np.einsum("bi,bj->bij", p1, p2).reshape(count, N * N) @ U.T
    return 1.0 - _purities(psi, N)


def entangling_power_mc(U, samples: int = DEFAULT_SAMPLES, seed: int = 0, *, start: int = 0,
                        chunk: int = 50_000, dims=None) -> EpowerReport:
    """Monte Carlo entangling power over Haar-random product states.

    Product state ``i`` uses sample ``start + i`` of the product-state stream
    of ``seed``. The reference value is filled in for diagonal gates.
    """
    U = check_unitary(U)
    N, _ = factor_dims(U, dims)
    if int(samples) != samples or samples < 1:
        raise InvalidInputError(f"samples must be a positive integer, got {samples!r}")
    total = total2 = 0.0
    for s0 in range(0, samples, chunk):
        e = _linear_entropies(U, N, seed, start + s0, min(chunk, samples - s0))
        total += e.sum()
        total2 += np.sum(e * e)
    mean = total / samples
    var = max(total2 / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    ref = None
    if np.count_nonzero(U - np.diag(np.diag(U))) == 0:
        ref = 1.0 - diag_gate_avg_purity(U)
    return EpowerReport(estimate=float(mean), stderr=float(np.sqrt(var / samples)),
                        samples=int(samples), reference=ref)


def diag_gate_avg_purity(U) -> float:
    """Product-state average of ``Tr mu^2`` for a diagonal gate.

    ``(N^2 + 2 N^3 + N^4 Tr rho^2) / (N^2 (N+1)^2)`` with ``rho`` from the reshaped diagonal.
    """
    A = diagonal_gate_to_unimodular(as_square_matrix(U, "U"))
    N = A.shape[0]
    rho = unimodular_to_state(A)
    p2 = float(np.sum(np.abs(rho) ** 2))
    return (N**2 + 2 * N**3 + N**4 * p2) / (N**2 * (N + 1) ** 2)


def mean_epower_diag(N: int) -> float:
    """Phase-averaged entangling power of random diagonal gates, ``((N-1)/(N+1))^2``."""
    N = _check_dim(N)
    return ((N - 1) / (N + 1)) ** 2


def mean_epower_haar(N: int) -> float:
    """Haar-averaged entangling power of generic gates, ``(N-1)^2 / (N^2 + 1)``."""
    N = _check_dim(N)
    return (N - 1) ** 2 / (N * N + 1)


def diag_ensemble_epower_mc(N: int, gates: int, states_per_gate: int, seed: int = 0,
                            chunk_gates: int = 2000) -> EpowerReport:
    """Two-level Monte Carlo of ``<e_p>`` over random diagonal gates.

    Gate ``g`` takes its phases from ensemble sample ``g``; its product states
    are samples ``g*states_per_gate ...`` of the product-state stream. The
    standard error is computed from the per-gate means, which are independent.
    """
    N = _check_dim(N)
    L = N * N
    per_gate = np.empty(gates)
    for g0 in range(0, gates, chunk_gates):
        ng = min(chunk_gates, gates - g0)
        phases = np.exp(2j * np.pi * uniform_batch(seed, g0, ng, L, tag=TAG_ENSEMBLE))
        p1, p2 = product_states(N, seed, g0 * states_per_gate, ng * states_per_gate)
        prod = np.einsum("bi,bj->bij", p1, p2).reshape(ng, states_per_gate, L)
        psi = prod * phases[:, None, :]
        e = 1.0 - _purities(psi.reshape(-1, L), N)
        per_gate[g0:g0 + ng] = e.reshape(ng, states_per_gate).mean(axis=1)
    mean = float(per_gate.mean())
    stderr = float(per_gate.std(ddof=1) / np.sqrt(gates)) if gates > 1 else 0.0
    return EpowerReport(estimate=mean, stderr=stderr, samples=gates * states_per_gate,
                        reference=mean_epower_diag(N), gate=f"random diagonal, N={N}",
                        extra={"gates": gates, "states_per_gate": states_per_gate})
