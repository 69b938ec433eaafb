"""Exact combinatorics and closed-form statistics of the unimodular ensemble.

Moments of ``rho = A A^dag / N^2`` for unimodular ``A`` beyond the fourth are
given by a *conjectured* formula built from Borel's triangle; it is checked
here against Monte Carlo and against a doublet-word count, but it is not
proven. The same applies to the word-count identity and to the analytic
continuation used for the mean entropy.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import InvalidInputError, ResourceLimitError, UnsupportedOrderError

# brute-force word enumeration stops beyond N**(2n) candidate words
WORD_BUDGET = 4**8


def _nonneg(n, name="n") -> int:
    if int(n) != n or n < 0:
        raise InvalidInputError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def _pos(n, name="n") -> int:
    if int(n) != n or n < 1:
        raise InvalidInputError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def catalan_number(k: int) -> int:
    k = _nonneg(k, "k")
    return math.comb(2 * k, k) // (k + 1)


def _check_triangle_index(n, k):
    n = _nonneg(n)
    k = _nonneg(k, "k")
    if k > n:
        raise InvalidInputError(f"triangle index requires k <= n, got n={n}, k={k}")
    return n, k


@lru_cache(maxsize=None)
def _catalan_recursive(n: int, k: int) -> int:
    if k == 0:
        return 1
    if k > n:
        return 0
    return _catalan_recursive(n - 1, k) + _catalan_recursive(n, k - 1)


def catalan_triangle(n: int, k: int, *, method: str = "closed") -> int:
    """Entry ``C_{n,k}`` of Catalan's triangle.

    ``method="closed"`` uses ``(n+k)! (n-k+1) / (k! (n+1)!)``;
    ``method="recursive"`` uses ``C_{n,k} = C_{n-1,k} + C_{n,k-1}``, ``C_{n,0} = 1``.
    """
    n, k = _check_triangle_index(n, k)
    if method == "recursive":
        return _catalan_recursive(n, k)
    if method != "closed":
        raise InvalidInputError(f"unknown method {method!r}")
    num = math.factorial(n + k) * (n - k + 1)
    den = math.factorial(k) * math.factorial(n + 1)
    return num // den


def borel_triangle(n: int, k: int, *, method: str = "closed") -> int:
    """Entry ``f_{n,k}`` of Borel's triangle.

    ``method="closed"``: ``binom(2n+2, n-k) binom(n+k, k) / (n+1)``;
    ``method="sum"``: ``sum_s binom(s, k) C_{n,s}``.
    """
    n, k = _check_triangle_index(n, k)
    if method == "sum":
        return sum(math.comb(s, k) * catalan_triangle(n, s) for s in range(k, n + 1))
    if method != "closed":
        raise InvalidInputError(f"unknown method {method!r}")
    num = math.comb(2 * n + 2, n - k) * math.comb(n + k, k)
    q, r = divmod(num, n + 1)
    assert r == 0
    return q


def moment_polynomial(n: int) -> list[int]:
    """Coefficients of ``P_n(N) = N^{2(n-1)} <Tr rho^n>``, highest power first."""
    n = _pos(n)
    return [(-1) ** k * borel_triangle(n - 1, k) for k in range(n)]


def ue_moment(n: int, N: int) -> Fraction:
    """Conjectured exact ``<Tr rho^n>`` over the unimodular ensemble (proven for n <= 4)."""
    n = _pos(n)
    N = _pos(N, "N")
    P = sum(c * N ** (n - 1 - k) for k, c in enumerate(moment_polynomial(n)))
    return Fraction(P, N ** (2 * (n - 1)))


def scaled_ue_moment(n: int, N: int) -> Fraction:
    """``M_n = N^{n-1} <Tr rho^n>``: moment of the rescaled eigenvalue ``x = N lambda``."""
    return N ** (n - 1) * ue_moment(n, N)


def hs_moment(n: int, N: int) -> Fraction:
    """``<Tr rho^n>`` for Hilbert-Schmidt random states; only n = 2, 3 have closed forms."""
    N = _pos(N, "N")
    if n == 2:
        return Fraction(2 * N, N * N + 1)
    if n == 3:
        return Fraction(5 * N * N + 1, (N * N + 1) * (N * N + 2))
    raise UnsupportedOrderError(f"Hilbert-Schmidt moment available only for n in (2, 3), got {n!r}")


def _hyp2f1_series(a: float, b: float, c: float, z: float, rtol: float = 1e-15,
                   max_terms: int = 10000) -> float:
    """Gauss series ``sum_m (a)_m (b)_m / ((c)_m m!) z^m``; stops when it terminates
    or the term drops below ``rtol`` relative to the partial sum."""
    total = term = 1.0
    for m in range(max_terms):
        term *= (a + m) * (b + m) / ((c + m) * (m + 1)) * z
        total += term
        if term == 0.0 or abs(term) < rtol * abs(total):
            return total
    raise ArithmeticError("hypergeometric series did not converge")


def ue_moment_continued(x: float, N: int) -> float:
    """Analytic continuation ``f(x) = <Tr rho^x>`` of the unimodular moments to real x > 0.

    ``f(x) = N^{1-x} Gamma(2x+1) / (Gamma(x+1) Gamma(x+2)) 2F1(x, 1-x; 2+x; 1/N)``.
    At N = 1 Gauss's summation theorem reduces ``f`` to 1 identically.
    """
    if not x > 0:
        raise InvalidInputError(f"x must be positive, got {x!r}")
    N = _pos(N, "N")
    if N == 1:
        return 1.0
    log_pref = (1 - x) * math.log(N) + math.lgamma(2 * x + 1) - math.lgamma(x + 1) - math.lgamma(x + 2)
    return math.exp(log_pref) * _hyp2f1_series(x, 1 - x, 2 + x, 1.0 / N)


def ue_mean_entropy(N: int) -> float:
    """Mean von Neumann entropy (nats) of ``A A^dag / N^2`` over the unimodular ensemble.

    ``ln N - (N-1) - (N-1)^2 ln((N-1)/N)``; equals the mean Schmidt strength of
    a random diagonal gate of order N^2.
    """
    N = _pos(N, "N")
    if N == 1:
        return 0.0
    return math.log(N) - (N - 1) - (N - 1) ** 2 * math.log1p(-1.0 / N)


def hs_mean_entropy(N: int) -> float:
    """Page's mean entropy ``sum_{k=N+1}^{N^2} 1/k - (N-1)/(2N)`` for HS states."""
    N = _pos(N, "N")
    s = sum(Fraction(1, k) for k in range(N + 1, N * N + 1)) - Fraction(N - 1, 2 * N)
    return float(s)


def haar_gate_entropy_reference(N: int) -> float:
    """Asymptotic mean Schmidt strength ``2 ln N - 1/2`` of Haar random gates."""
    N = _pos(N, "N")
    return 2 * math.log(N) - 0.5


def cumulants_from_moments(moments) -> list:
    """Classical cumulants ``k_1..k_n`` from raw moments ``m_1..m_n``.

    Uses ``k_n = m_n - sum_{j=1}^{n-1} binom(n-1, j-1) k_j m_{n-j}`` with ``m_0 = 1``.
    Exact if the moments are Fractions.
    """
    m = [1] + list(moments)
    k = [0]
    for n in range(1, len(m)):
        k.append(m[n] - sum(math.comb(n - 1, j - 1) * k[j] * m[n - j] for j in range(1, n)))
    return k[1:]


def ue_cumulants(N: int) -> list[Fraction]:
    """Closed-form cumulants ``kappa_1..kappa_5`` of the rescaled eigenvalue ``N lambda``."""
    N = _pos(N, "N")
    F = Fraction
    return [
        F(1),
        F(N - 1, N),
        F((N - 1) * (N - 2), N**2),
        -F((N - 1) * (4 * N - 5), N**3),
        -F((N - 1) * (N - 2) * (4 * N * N + 2 * N - 7), N**4),
    ]


# --- limiting densities ---------------------------------------------------------

def mp_density(x):
    """Marchenko-Pastur density ``(1/pi) sqrt(1/x - 1/4)`` on ``(0, 4]``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x <= 4)
    xs = np.where(inside, x, 1.0)
    out = np.where(inside, np.sqrt(np.clip(1.0 / xs - 0.25, 0.0, None)) / np.pi, 0.0)
    return out if out.ndim else float(out)


def mp_cdf(x):
    """Cumulative MP distribution ``(2t + sin 2t) / pi`` where ``x = 4 sin^2 t``."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 4.0)
    t = np.arcsin(np.sqrt(x / 4.0))
    return (2 * t + np.sin(2 * t)) / np.pi


def mp_moment(n: int) -> int:
    """n-th moment of the MP law, the Catalan number ``C_n``."""
    return catalan_number(n)


def mp_integral(g) -> float:
    """``int_0^4 g(x) P_MP(x) dx`` via ``x = 4 sin^2 t``, which removes the 1/sqrt(x) singularity."""
    def integrand(t):
        return g(4.0 * math.sin(t) ** 2) * 4.0 * math.cos(t) ** 2 / math.pi
    val, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def arcsine_density(x):
    """Arcsine density ``1 / (pi sqrt(x (2 - x)))`` on ``(0, 2)``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x < 2)
    xs = np.where(inside, x, 1.0)
    out = np.where(inside, 1.0 / (np.pi * np.sqrt(xs * (2 - xs))), 0.0)
    return out if out.ndim else float(out)


def arcsine_cdf(x):
    x = np.clip(np.asarray(x, dtype=float), 0.0, 2.0)
    return 2.0 / np.pi * np.arcsin(np.sqrt(x / 2.0))


def arcsine_moment(n: int) -> Fraction:
    """n-th moment ``binom(2n, n) / 2^n`` of the arcsine law on (0, 2)."""
    n = _nonneg(n)
    return Fraction(math.comb(2 * n, n), 2**n)


def arcsine_integral(g) -> float:
    """``int_0^2 g(x) P_As(x) dx`` via ``x = 2 sin^2 t`` (flat weight 2/pi in t)."""
    def integrand(t):
        return g(2.0 * math.sin(t) ** 2) * 2.0 / math.pi
    val, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def mp_entropy_integral() -> float:
    """``-int x ln x P_MP(x) dx`` (equals -1/2)."""
    return -mp_integral(_xlogx)


def arcsine_entropy_integral() -> float:
    """Mean N = 2 entropy from the arcsine law: ``int_0^1 -2y ln y / (pi sqrt(y(1-y))) dy``.

    With ``lambda = y`` and ``x = 2y`` this is ``E[-x ln(x/2)]`` under the arcsine law.
    """
    def integrand(t):
        y = math.sin(t) ** 2
        return -2.0 * _xlogx(y) * 2.0 / math.pi
    val, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


# --- doublet words ---------------------------------------------------------------

def doublet_words(N: int, n: int) -> set[tuple[int, ...]]:
    """All words of length 2n over ``range(N)`` reachable from the empty word by
    inserting n doublets ``(a, a)`` at arbitrary positions."""
    N = _pos(N, "N")
    n = _pos(n)
    if N ** (2 * n) > WORD_BUDGET:
        raise ResourceLimitError(
            f"enumeration of {N}-letter words of length {2 * n} exceeds budget {WORD_BUDGET}")
    level = {()}
    for _ in range(n):
        nxt = set()
        for w in level:
            for pos in range(len(w) + 1):
                for a in range(N):
                    nxt.add(w[:pos] + (a, a) + w[pos:])
        level = nxt
    return level


def count_doublet_words(N: int, n: int) -> int:
    """Number of doublet-generated words of length 2n starting with the first letter.

    Conjectured to equal ``N^{2(n-1)} <Tr rho^n>`` for the unimodular ensemble.
    """
    return sum(1 for w in doublet_words(N, n) if w[0] == 0)
