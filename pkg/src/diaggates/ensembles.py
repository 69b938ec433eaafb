"""Seeded samplers for unimodular matrices, Ginibre matrices, random states and
random diagonal gates.

Reproducibility
---------------
All randomness comes from a Philox-4x64 counter-based generator keyed by
``(seed, tag)``. Sample ``i`` of a kind that needs ``m`` uniforms per sample
reads the stream starting at counter ``i * ceil(m / 4)``, so a sample depends
only on ``(seed, tag, i)``. Batched draws (``*_batch``) read the same counters
and therefore agree bit-for-bit with one-at-a-time draws, whatever the batch
size or chunking.

Uniforms are ``(raw >> 11) * 2**-53`` in ``[0, 1)``. Phases are ``2 pi u``.
Complex normals use the polar Box-Muller map on one uniform pair,
``sqrt(-ln(1 - u1)) * exp(2 pi i u2)``, which gives unit variance per complex
entry (1/2 per real part).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Philox

from .errors import InvalidInputError

MASK64 = (1 << 64) - 1
_DRAWS_PER_COUNTER = 4

KINDS = ("unimodular", "ginibre", "hilbert_schmidt_state", "diagonal_gate", "haar_pure_state")

# stream tags keep independent purposes (e.g. gates vs. probe states) apart
TAG_ENSEMBLE = 0
TAG_PRODUCT_STATES = 1
TAG_PROBES = 2
CHUNK_ENTRIES = 2**22


def _check_dim(N) -> int:
    if int(N) != N or N < 1:
        raise InvalidInputError(f"dimension must be a positive integer, got {N!r}")
    return int(N)


def _check_seed(seed) -> int:
    if int(seed) != seed or not 0 <= seed <= MASK64:
        raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return int(seed)


def _blocks(per_sample: int) -> int:
    return -(-per_sample // _DRAWS_PER_COUNTER)


class RandomStream:
    """Sequential uniform draws from the keyed Philox stream.

    Parameters
    ----------
    seed : int
        64-bit unsigned seed.
    offset : int
        Starting counter (each counter yields four raw 64-bit draws).
    tag : int
        Stream purpose; different tags give independent streams.
    """

    def __init__(self, seed: int, offset: int = 0, tag: int = TAG_ENSEMBLE):
        self.seed = _check_seed(seed)
        self.tag = int(tag)
        self.offset = int(offset)
        self._bitgen = Philox(key=[self.seed, self.tag],
                              counter=[self.offset & MASK64, self.offset >> 64, 0, 0])

    @classmethod
    def for_sample(cls, seed: int, index: int, per_sample: int, tag: int = TAG_ENSEMBLE):
        """Stream positioned at sample ``index`` of a kind using ``per_sample`` uniforms."""
        return cls(seed, offset=index * _blocks(per_sample), tag=tag)

    def uniform(self, size: int) -> np.ndarray:
        raw = self._bitgen.random_raw(int(size))
        return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def phases(self, size: int) -> np.ndarray:
        return 2.0 * np.pi * self.uniform(size)

    def complex_normal(self, size: int) -> np.ndarray:
        u = self.uniform(2 * size).reshape(size, 2)
        return _box_muller(u[:, 0], u[:, 1])


def _box_muller(u1, u2):
    return np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2)


def uniform_batch(seed: int, start: int, count: int, per_sample: int,
                  tag: int = TAG_ENSEMBLE) -> np.ndarray:
    """Uniforms for samples ``start .. start+count-1``, shape ``(count, per_sample)``.

    Row ``k`` equals ``RandomStream.for_sample(seed, start+k, per_sample).uniform(per_sample)``.
    """
    b = _blocks(per_sample)
    stream = RandomStream(seed, offset=start * b, tag=tag)
    u = stream.uniform(count * b * _DRAWS_PER_COUNTER)
    return u.reshape(count, b * _DRAWS_PER_COUNTER)[:, :per_sample]


@dataclass(frozen=True)
class EnsembleConfig:
    """Ensemble kind, matrix dimension, sample count and seed of a Monte Carlo run."""

    kind: str
    dimension: int
    samples: int
    seed: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        _check_dim(self.dimension)
        if int(self.samples) != self.samples or self.samples < 1:
            raise InvalidInputError(f"samples must be a positive integer, got {self.samples!r}")
        _check_seed(self.seed)

    @property
    def uniforms_per_sample(self) -> int:
        N = self.dimension
        return {
            "unimodular": N * N,
            "diagonal_gate": N * N,
            "ginibre": 2 * N * N,
            "hilbert_schmidt_state": 2 * N * N,
            "haar_pure_state": 2 * N,
        }[self.kind]

    def stream(self, index: int) -> RandomStream:
        return RandomStream.for_sample(self.seed, index, self.uniforms_per_sample)

    def batch(self, start: int, count: int) -> np.ndarray:
        """Samples ``start .. start+count-1`` stacked along axis 0."""
        u = uniform_batch(self.seed, start, count, self.uniforms_per_sample)
        return _from_uniforms(self.kind, self.dimension, u)

    def entries_per_sample(self) -> int:
        N = self.dimension
        return {"diagonal_gate": N**4, "haar_pure_state": N}.get(self.kind, N * N)

    def chunks(self, chunk: int | None = None):
        """Yield ``(start, batch)`` pairs covering all samples.

        The default chunk keeps each batch near ``CHUNK_ENTRIES`` complex
        entries; the chunk size never changes the samples.
        """
        if chunk is None:
            chunk = max(1, min(20000, CHUNK_ENTRIES // self.entries_per_sample()))
        for start in range(0, self.samples, chunk):
            count = min(chunk, self.samples - start)
            yield start, self.batch(start, count)


def _from_uniforms(kind: str, N: int, u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    if kind == "unimodular":
        return np.exp(2j * np.pi * u).reshape(n, N, N)
    if kind == "diagonal_gate":
        d = np.exp(2j * np.pi * u)
        out = np.zeros((n, N * N, N * N), dtype=complex)
        idx = np.arange(N * N)
        out[:, idx, idx] = d
        return out
    if kind in ("ginibre", "hilbert_schmidt_state"):
        G = _box_muller(u[:, 0::2], u[:, 1::2]).reshape(n, N, N)
        if kind == "ginibre":
            return G
        W = G @ G.conj().transpose(0, 2, 1)
        return W / np.trace(W, axis1=1, axis2=2).real[:, None, None]
    if kind == "haar_pure_state":
        z = _box_muller(u[:, 0::2], u[:, 1::2])
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    raise InvalidInputError(f"unknown ensemble kind {kind!r}")


def sample_unimodular(N: int, stream: RandomStream) -> np.ndarray:
    """N x N matrix of independent uniformly random unit-modulus entries."""
    N = _check_dim(N)
    return np.exp(1j * stream.phases(N * N)).reshape(N, N)


def unimodular_to_state(A) -> np.ndarray:
    """Density matrix ``A A^dag / N^2`` of a unimodular matrix.

    Its diagonal is flat (every entry ``1/N``), i.e. the state is contradiagonal.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(np.abs(A), 1.0, rtol=0, atol=1e-12):
        raise InvalidInputError("matrix is not unimodular (some |A_jk| != 1)")
    N = A.shape[0]
    rho = A @ A.conj().T / N**2
    return (rho + rho.conj().T) / 2


def states_from_unimodular(A: np.ndarray) -> np.ndarray:
    """Batched ``A A^dag / N^2`` for a stack of unimodular matrices (no validation)."""
    N = A.shape[-1]
    return A @ A.conj().swapaxes(-1, -2) / N**2


def sample_ginibre(N: int, stream: RandomStream) -> np.ndarray:
    """Complex Ginibre matrix, unit variance per entry."""
    N = _check_dim(N)
    return stream.complex_normal(N * N).reshape(N, N)


def sample_hs_state(N: int, stream: RandomStream) -> np.ndarray:
    """Random density matrix distributed by the Hilbert-Schmidt measure."""
    G = sample_ginibre(N, stream)
    W = G @ G.conj().T
    W = (W + W.conj().T) / 2
    return W / np.trace(W).real


def sample_diagonal_gate(N: int, stream: RandomStream) -> np.ndarray:
    """Diagonal unitary of order N^2 with independent uniform phases."""
    N = _check_dim(N)
    return np.diag(np.exp(1j * stream.phases(N * N)))


def diagonal_gate_to_unimodular(U) -> np.ndarray:
    """Reshape the diagonal of a gate of order N^2 into an N x N matrix.

    Entry ``(j, k)`` (0-based) is ``U[j*N + k, j*N + k]``.
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {U.shape}")
    L = U.shape[0]
    N = math.isqrt(L)
    if N * N != L:
        raise InvalidInputError(f"gate order {L} is not a perfect square")
    d = np.diag(U)
    if np.max(np.abs(U - np.diag(d)), initial=0.0) > 0:
        raise InvalidInputError("gate is not diagonal")
    return d.reshape(N, N)


def sample_haar_state(N: int, stream: RandomStream) -> np.ndarray:
    """Haar-random unit vector in C^N."""
    N = _check_dim(N)
    z = stream.complex_normal(N)
    return z / np.linalg.norm(z)


def sample_haar_unitary(N: int, stream: RandomStream) -> np.ndarray:
    """Haar-random unitary of order N (QR of a Ginibre matrix with phase fix)."""
    Q, R = np.linalg.qr(sample_ginibre(N, stream))
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def sample(config: EnsembleConfig, index: int) -> np.ndarray:
    """Single sample ``index`` of ``config``; equals ``config.batch(index, 1)[0]``."""
    return config.batch(index, 1)[0]
