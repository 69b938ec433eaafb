"""Self-checks behind ``diaggates verify``.

Every check reports a *margin*: tolerance minus observed error for exact
checks, ``4 - |z|`` for Monte Carlo checks. A check passes when its margin is
nonnegative. Sample sizes are smaller than the test suite's so that ``all``
runs in well under a minute.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import contradiag as cd
from . import ensembles as ens
from . import epower, moments, montecarlo, schmidt
from .linalg_core import eig_hermitian

SUITES = ("combinatorics", "moments", "entropy", "schmidt", "contradiag", "epower")
Z_MAX = 4.0


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    margin: float
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.margin = float(self.margin)

    def as_record(self) -> dict:
        return asdict(self)


def _exact(suite, name, ok, detail=""):
    return Check(suite, name, bool(ok), 0.0 if ok else -1.0, detail)


def _tol(suite, name, err, tol, detail=""):
    err = float(err)
    return Check(suite, name, err <= tol, tol - err, detail or f"error={err:.3g} tol={tol:g}")


def _z(suite, name, est, ref, se, detail=""):
    z = (est - float(ref)) / se if se > 0 else (0.0 if est == ref else math.inf)
    return Check(suite, name, abs(z) <= Z_MAX, Z_MAX - abs(z),
                 detail or f"estimate={est:.6g} reference={float(ref):.6g} stderr={se:.3g} z={z:.2f}")


def suite_combinatorics(seed: int, samples: int) -> list[Check]:
    s = "combinatorics"
    out = []
    pairs = [(n, k) for n in range(21) for k in range(n + 1)]
    out.append(_exact(s, "borel sum form == closed form, n<=20",
                      all(moments.borel_triangle(n, k) == moments.borel_triangle(n, k, method="sum")
                          for n, k in pairs)))
    out.append(_exact(s, "catalan triangle recursion == closed form, n<=20",
                      all(moments.catalan_triangle(n, k) == moments.catalan_triangle(n, k, method="recursive")
                          for n, k in pairs)))
    out.append(_exact(s, "borel edges are Catalan numbers, n<=20",
                      all(moments.borel_triangle(n, 0) == moments.catalan_number(n + 1)
                          and moments.borel_triangle(n, n) == moments.catalan_number(n) for n in range(21))))
    out.append(_exact(s, "borel row 7 = 429 2002 4004 4368 2730 924 132",
                      [moments.borel_triangle(6, k) for k in range(7)]
                      == [429, 2002, 4004, 4368, 2730, 924, 132]))
    cases = [(N, n) for N in (1, 2, 3) for n in (1, 2, 3)] + [(2, 4)]
    out.append(_exact(s, "doublet word counts == N^(2(n-1)) <Tr rho^n>",
                      all(moments.count_doublet_words(N, n) == N ** (2 * (n - 1)) * moments.ue_moment(n, N)
                          for N, n in cases)))
    return out


def suite_moments(seed: int, samples: int) -> list[Check]:
    s = "moments"
    out = []
    F = Fraction
    closed = {
        2: lambda N: F(2 * N - 1, N**2),
        3: lambda N: F(5 * N**2 - 6 * N + 2, N**4),
        4: lambda N: F(14 * N**3 - 28 * N**2 + 20 * N - 5, N**6),
        5: lambda N: F(42 * N**4 - 120 * N**3 + 135 * N**2 - 70 * N + 14, N**8),
    }
    for n, f in closed.items():
        out.append(_exact(s, f"ue_moment n={n} matches hand-derived polynomial, N=1..50",
                          all(moments.ue_moment(n, N) == f(N) for N in range(1, 51))))
    out.append(_tol(s, "continued moment agrees at integer x",
                    max(abs(moments.ue_moment_continued(n, N) / float(moments.ue_moment(n, N)) - 1)
                        for n in range(1, 8) for N in range(1, 9)), 1e-12))
    for N in (2, 4, 8):
        for r in montecarlo.mc_moment_reports(N, 7, samples, seed)[1:]:
            out.append(_z(s, f"MC scaled moment N={N} n={r.order}", r.estimate, r.analytic, r.stderr))
    est = montecarlo.mc_power_sums(2, (2, 3), samples, seed, kind="hilbert_schmidt_state", scaled=False)
    for n in (2, 3):
        out.append(_z(s, f"MC Hilbert-Schmidt <Tr rho^{n}> N=2", est[n][0], moments.hs_moment(n, 2), est[n][1]))
    return out


def suite_entropy(seed: int, samples: int) -> list[Check]:
    s = "entropy"
    out = [_tol(s, "ue_mean_entropy(2) = ln 4 - 1", abs(moments.ue_mean_entropy(2) - (math.log(4) - 1)), 1e-15),
           _exact(s, "hs_mean_entropy(2) = 1/3", moments.hs_mean_entropy(2) == 1 / 3),
           _exact(s, "hs_mean_entropy < ue_mean_entropy, N=2..50",
                  all(moments.hs_mean_entropy(N) < moments.ue_mean_entropy(N) for N in range(2, 51)))]
    h = 1e-5
    err = max(abs(-(moments.ue_moment_continued(1 + h, N) - moments.ue_moment_continued(1 - h, N)) / (2 * h)
                  - moments.ue_mean_entropy(N)) for N in range(2, 11))
    out.append(_tol(s, "mean entropy = -f'(1) by central difference", err, 1e-6))
    out.append(_tol(s, "arcsine entropy integral = ln 4 - 1",
                    abs(moments.arcsine_entropy_integral() - (math.log(4) - 1)), 1e-6))
    out.append(_tol(s, "MP entropy integral = -1/2", abs(moments.mp_entropy_integral() + 0.5), 1e-6))
    for N in (2, 3, 4):
        m, se = montecarlo.mc_mean_entropy(N, samples, seed)
        out.append(_z(s, f"MC mean entropy N={N}", m, moments.ue_mean_entropy(N), se))
    return out


def suite_schmidt(seed: int, samples: int) -> list[Check]:
    s = "schmidt"
    out = []
    err = 0.0
    for N in range(2, 9):
        X = ens.sample_ginibre(N * N, ens.RandomStream(seed, tag=ens.TAG_PROBES, offset=N * 10**6))
        err = max(err, np.max(np.abs(schmidt.reshuffle(schmidt.reshuffle(X)) - X)))
    out.append(_tol(s, "reshuffle is an involution, N=2..8", err, 0.0))
    for N in (2, 3, 4):
        F = schmidt.fourier_gate(N * N)
        err = max(abs(schmidt.gate_entanglement_entropy(F, q) - 2 * math.log(N)) for q in (0, 0.5, 1, 2, 3))
        out.append(_tol(s, f"Fourier gate S_q = 2 ln N, N={N}", err, 1e-10))
    st = ens.RandomStream(seed, tag=ens.TAG_PROBES)
    for N in (2, 3, 4):
        U = np.kron(ens.sample_haar_unitary(N, st), ens.sample_haar_unitary(N, st))
        out.append(_tol(s, f"product gate S = 0, N={N}", abs(schmidt.gate_entanglement_entropy(U)), 1e-10))
    err = 0.0
    for N in (2, 3, 4, 5):
        cfg = ens.EnsembleConfig("diagonal_gate", N, 20, seed)
        for U in cfg.batch(0, 20):
            lam = schmidt.schmidt_spectrum(U)
            sv = np.linalg.svd(ens.diagonal_gate_to_unimodular(U), compute_uv=False) ** 2
            err = max(err, np.max(np.abs(lam[:N] - sv)), np.max(np.abs(lam[N:]), initial=0.0))
    out.append(_tol(s, "diagonal gate Schmidt spectrum = reshaped singular values", err, 1e-10))
    return out


def suite_contradiag(seed: int, samples: int) -> list[Check]:
    s = "contradiag"
    st = ens.RandomStream(seed, tag=ens.TAG_PROBES)
    f_err = flat_err = 0.0
    exceed = -np.inf
    for N in range(2, 17):
        for _ in range(10):
            G = ens.sample_ginibre(N, st)
            H = (G + G.conj().T) / 2
            r = cd.contradiagonalize(H)
            f_err = max(f_err, abs(r.f - r.f_max))
            flat_err = max(flat_err, np.max(np.abs(np.diag(r.A) - np.trace(H) / N)))
            for _ in range(5):
                V = ens.sample_haar_unitary(N, st)
                exceed = max(exceed, cd.offdiag_weight(V @ H @ V.conj().T) - r.f_max)
    out = [_tol(s, "achieved f = Tr H^2 - (Tr H)^2/N", f_err, 1e-8),
           _tol(s, "contradiagonal form has flat diagonal", flat_err, 1e-9),
           Check(s, "random unitaries never exceed f_max", exceed <= 1e-8, 1e-8 - exceed,
                 f"max excess {exceed:.3g}")]
    err = 0.0
    for N in range(2, 7):
        D = np.diag(np.sort(np.abs(st.complex_normal(N)))[::-1]).astype(complex)
        err = max(err, abs(cd.orbit_distance(D, cd.fourier_matrix(N)) - cd.max_orbit_distance(D)))
    out.append(_tol(s, "orbit distance at V=F equals the maximum, N<=6", err, 1e-8))
    ok = True
    for N in (2, 4, 8):
        for _ in range(30):
            sigma = ens.unimodular_to_state(ens.sample_unimodular(N, st))
            ok &= cd.majorization_chain_check(sigma, ens.sample_haar_unitary(N, st))
    out.append(_exact(s, "majorization chain for unimodular states", ok))
    diag_err = spec_err = 0.0
    for N in (2, 3, 5, 8):
        for _ in range(10):
            G = ens.sample_ginibre(N, st)
            H = (G + G.conj().T) / 2
            y, _ = eig_hermitian(H)
            x = y.copy()
            for _ in range(2 * N):
                i, j = (st.uniform(2) * N).astype(int)
                t = st.uniform(1)[0]
                x[i], x[j] = t * x[i] + (1 - t) * x[j], (1 - t) * x[i] + t * x[j]
            V = cd.prescribe_diagonal(H, x)
            G2 = V @ H @ V.conj().T
            diag_err = max(diag_err, np.max(np.abs(np.diag(G2).real - x)))
            spec_err = max(spec_err, np.max(np.abs(np.linalg.eigvalsh(G2)[::-1] - y)))
    out.append(_tol(s, "prescribe_diagonal hits target diagonal", diag_err, 1e-8))
    out.append(_tol(s, "prescribe_diagonal preserves spectrum", spec_err, 1e-9))
    return out


def suite_epower(seed: int, samples: int) -> list[Check]:
    s = "epower"
    gates = max(samples // 50, 100)
    r = epower.diag_ensemble_epower_mc(2, gates, 50, seed)
    out = [_z(s, "MC <e_p> of random diagonal gates, N=2, vs 1/9", r.estimate, r.reference, r.stderr)]
    U = ens.sample_diagonal_gate(2, ens.RandomStream(seed, tag=ens.TAG_PROBES))
    r = epower.entangling_power_mc(U, samples, seed)
    out.append(_z(s, "per-gate MC vs closed-form product-state average", r.estimate, r.reference, r.stderr))
    out.append(_exact(s, "mean_epower_haar > mean_epower_diag, N=2..50",
                      all(epower.mean_epower_haar(N) > epower.mean_epower_diag(N) for N in range(2, 51))))
    return out


_RUNNERS = {
    "combinatorics": suite_combinatorics,
    "moments": suite_moments,
    "entropy": suite_entropy,
    "schmidt": suite_schmidt,
    "contradiag": suite_contradiag,
    "epower": suite_epower,
}


def run_suite(name: str, seed: int = 0, samples: int = 20_000) -> list[Check]:
    """Run one suite (or ``"all"``) and return its checks."""
    if name == "all":
        return [c for n in SUITES for c in _RUNNERS[n](seed, samples)]
    if name not in _RUNNERS:
        raise KeyError(name)
    return _RUNNERS[name](seed, samples)
