"""Monte Carlo estimators over the seeded ensembles.

Spectra are computed in chunks; because sample ``i`` depends only on
``(seed, i)`` the chunk size never changes which samples are drawn.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ensembles import EnsembleConfig, states_from_unimodular
from .linalg_core import batch_entropy



@dataclass
class MomentReport:
    """Analytic and sampled value of one spectral moment.

    ``analytic`` and ``estimate`` refer to the scaled moment
    ``M_n = N^{n-1} <Tr rho^n>`` when ``scaled`` is true.
    """

    order: int
    dimension: int
    analytic: Fraction | float | None
    estimate: float
    stderr: float
    samples: int
    scaled: bool = True

    @property
    def z_score(self) -> float:
        if self.analytic is None or self.stderr == 0:
            return float("nan")
        return (self.estimate - float(self.analytic)) / self.stderr


def _mean_stderr(total: float, total2: float, n: int) -> tuple[float, float]:
    mean = total / n
    if n < 2:
        return mean, 0.0
    var = max(total2 / n - mean * mean, 0.0) * n / (n - 1)
    return mean, float(np.sqrt(var / n))


def state_spectra(kind: str, N: int, samples: int, seed: int, chunk: int | None = None):
    """Yield ``(start, eigenvalues)`` chunks of the random density matrices of ``kind``.

    ``kind`` is ``"unimodular"`` (``A A^dag / N^2``), ``"diagonal_gate"`` (the
    normalised Schmidt vector of the gate, zeros dropped: identical to the
    unimodular case for the same sample) or ``"hilbert_schmidt_state"``.
    Eigenvalues are sorted nonincreasingly along the last axis.
    """
    if kind == "diagonal_gate":
        kind = "unimodular"
    cfg = EnsembleConfig(kind, N, samples, seed)
    for start, batch in cfg.chunks(chunk):
        rho = states_from_unimodular(batch) if kind == "unimodular" else batch
        lam = np.linalg.eigvalsh(rho)[:, ::-1]
        yield start, np.clip(lam, 0.0, None)


def scaled_eigenvalues(N: int, samples: int, seed: int, kind: str = "unimodular") -> np.ndarray:
    """All rescaled eigenvalues ``x = N lambda``, shape ``(samples, N)``."""
    out = np.empty((samples, N))
    for start, lam in state_spectra(kind, N, samples, seed):
        out[start:start + lam.shape[0]] = N * lam
    return out


def mc_power_sums(N: int, powers, samples: int, seed: int, kind: str = "unimodular",
                  scaled: bool = True) -> dict:
    """Sample mean and standard error of ``sum_i lambda_i^x`` for each power ``x``.

    With ``scaled`` the value is multiplied by ``N^{x-1}`` (moment of ``N lambda``).
    Returns ``{x: (mean, stderr)}``.
    """
    powers = list(powers)
    acc = {x: [0.0, 0.0] for x in powers}
    for _, lam in state_spectra(kind, N, samples, seed):
        for x in powers:
            v = np.sum(lam**x, axis=1)
            if scaled:
                v = v * float(N) ** (x - 1)
            acc[x][0] += v.sum()
            acc[x][1] += np.sum(v * v)
    return {x: _mean_stderr(t, t2, samples) for x, (t, t2) in acc.items()}


def mc_moment_reports(N: int, n_max: int, samples: int, seed: int) -> list[MomentReport]:
    """Scaled unimodular moments ``M_n`` for ``n = 1..n_max`` with their conjectured values."""
    from .moments import scaled_ue_moment

    est = mc_power_sums(N, range(1, n_max + 1), samples, seed)
    return [MomentReport(order=n, dimension=N, analytic=scaled_ue_moment(n, N),
                         estimate=float(est[n][0]), stderr=float(est[n][1]), samples=samples)
            for n in range(1, n_max + 1)]


def mc_mean_entropy(N: int, samples: int, seed: int, kind: str = "unimodular",
                    q: float = 1.0) -> tuple[float, float]:
    """Mean and standard error of the Renyi-``q`` entropy of the random spectra."""
    total = total2 = 0.0
    for _, lam in state_spectra(kind, N, samples, seed):
        if q == 1:
            s = batch_entropy(lam)
        elif q == 0:
            s = np.log(np.count_nonzero(lam > 1e-10, axis=1))
        else:
            s = np.log(np.sum(lam**q, axis=1)) / (1.0 - q)
        total += s.sum()
        total2 += np.sum(s * s)
    return _mean_stderr(total, total2, samples)
