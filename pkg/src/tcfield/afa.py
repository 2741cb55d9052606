"""Average field approximation (AFA) for the all-up sector r = N/2.

Each molecule is dressed by a mean field of n0 = n + N/2 photons.  The
block spectrum then becomes an evenly spaced ladder, and the eigenvectors
become symmetrized products of single-molecule dressed states (a1, a2) and
(b1, -b2).  The scaled detuning is beta_bar = beta / sqrt(n0), and exact
effective eigenvalues are approximated by sqrt(n0) * q_bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ParameterError
from .dynamics import ObservableSeries, _shift_coefficients, _taus
from .spectral import default_cache


def afa_coefficients(beta_bar):
    """Dressed single-molecule coefficients (a1, a2, b1, b2)."""
    s = math.sqrt(4.0 + beta_bar ** 2)
    a1 = 1.0 / math.sqrt(1.0 + (0.5 * beta_bar - 0.5 * s) ** 2)
    a2 = (-0.5 * beta_bar + 0.5 * s) * a1
    b1 = 1.0 / math.sqrt(1.0 + (0.5 * beta_bar + 0.5 * s) ** 2)
    b2 = (0.5 * beta_bar + 0.5 * s) * b1
    return a1, a2, b1, b2


@dataclass(frozen=True)
class AfaParams:
    n0: float
    beta_bar: float
    a1: float
    a2: float
    b1: float
    b2: float

    @classmethod
    def for_block(cls, N, n, beta):
        """Parameters for photon number n in the all-up sector of N molecules."""
        n0 = n + N / 2
        if n0 <= 0:
            raise ParameterError("AFA needs n + N/2 > 0")
        bb = beta / math.sqrt(n0)
        return cls(n0, bb, *afa_coefficients(bb))


def afa_q(N, n, j, beta_bar):
    """Scaled ladder eigenvalue q_bar_j = -(N/2 + n) beta_bar + (N/2 - j) sqrt(4 + beta_bar^2)."""
    if not 0 <= j <= N:
        raise ParameterError(f"j={j} outside 0..{N}")
    return -(N / 2 + n) * beta_bar + (N / 2 - j) * math.sqrt(4.0 + beta_bar ** 2)


def _terminating_2f1(a, b, c, x):
    """2F1(a, b; c; x) for a non-positive integer a or b, summed term by term."""
    stop = min(v for v in (a, b) if v <= 0)
    term, total = 1.0, 1.0
    for k in range(-stop):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
    return total


def afa_component(N, j, p, beta_bar):
    """Component p of AFA eigenvector j (j = 0 is the largest q).

    The eigenvector is the symmetrized product of N - j dressed states
    (a1, a2) and j dressed states (b1, -b2), written in the Dicke basis with
    p photons transferred.  The hypergeometric factor terminates, so it is a
    finite polynomial in x = -b2 a1 / (b1 a2).
    """
    if not (0 <= j <= N and 0 <= p <= N):
        raise ParameterError(f"j={j}, p={p} must lie in 0..{N}")
    a1, a2, b1, b2 = afa_coefficients(beta_bar)
    lf = math.lgamma
    if a2 == 0.0 or b1 == 0.0:
        # beta_bar so large that the dressed states are bare: direct product
        return float(j == p)
    x = -b2 * a1 / (b1 * a2)
    if N >= j + p:
        pre = math.exp(0.5 * (lf(N - j + 1) + lf(N - p + 1) - lf(p + 1) - lf(j + 1))
                       - lf(N - j - p + 1))
        return (b1 ** j * a1 ** (N - j) * (a2 / a1) ** p * pre
                * _terminating_2f1(-j, -p, N - j - p + 1, x))
    k0 = j + p - N
    pre = math.exp(0.5 * (lf(p + 1) + lf(N - p + 1) - lf(j + 1) - lf(N - j + 1))
                   + lf(j + 1) - lf(k0 + 1) - lf(N - p + 1))
    return (pre * b1 ** (N - p) * (-b2) ** k0 * a2 ** (N - j)
            * _terminating_2f1(p - N, j - N, 1 + j + p - N, x))


def afa_matrix(N, beta_bar):
    """AFA eigenvector matrix with A[p, j] = afa_component(N, j, p, beta_bar)."""
    return np.array([[afa_component(N, j, p, beta_bar) for j in range(N + 1)]
                     for p in range(N + 1)])


def s1_afa(N, beta, density, taus):
    """AFA photon gain: N sum_n diag[n] n0/(n0 + D) sin^2(sqrt(n0 + D) tau), n0 = n + N/2."""
    t = _taus(taus)
    d = beta ** 2 / 4
    idx = np.nonzero(density.diag)[0]
    n0 = idx[:, None] + N / 2
    w = density.diag[idx][:, None]
    vals = N * np.sum(w * n0 / (n0 + d) * np.sin(np.sqrt(n0 + d) * t[None, :]) ** 2, axis=0)
    return ObservableSeries(t, vals, "s1")


def s2_afa(N, beta, density, taus):
    """AFA field amplitude (real).

    sum_n sup[n] (sqrt(n+1) + N/(2 sqrt(n+1)) n0/(n0 + D) sin^2(sqrt(n0 + D) tau)).
    """
    t = _taus(taus)
    d = beta ** 2 / 4
    idx = np.nonzero(density.superdiag)[0]
    if idx.size == 0:
        return ObservableSeries(t, np.zeros(t.size), "s2")
    n = idx[:, None].astype(float)
    n0 = n + N / 2
    w = density.superdiag[idx][:, None]
    body = np.sqrt(n + 1) + N / (2 * np.sqrt(n + 1)) * n0 / (n0 + d) * np.sin(
        np.sqrt(n0 + d) * t[None, :]) ** 2
    return ObservableSeries(t, np.sum(w * body, axis=0), "s2")


@dataclass(frozen=True)
class QDifferenceTable:
    """Exact q differences for gap k, one row per photon number.

    ``same[i, j] = q_j - q_{j+k}`` within block c = n + N/2;
    ``adjacent[i, j] = q^(c)_j - q^(c+1)_{j+k} - beta``.
    ``ladder[i] = k sqrt(4 + beta_bar^2) sqrt(n0)`` is the AFA value of ``same``.
    """

    N: int
    beta: float
    k: int
    n: np.ndarray
    same: np.ndarray
    adjacent: np.ndarray
    ladder: np.ndarray


def _pairs(N, k):
    return [(j, j + k) for j in range(N + 1) if 0 <= j + k <= N]


def q_difference_table(N, beta, n_values, k, cache=None):
    if abs(k) > N:
        raise ParameterError(f"gap k={k} exceeds N={N}")
    cache = cache or default_cache
    r = Fraction(N, 2)
    n_values = np.asarray(list(n_values), dtype=int)
    pairs = _pairs(N, k)
    same = np.empty((n_values.size, len(pairs)))
    adj = np.empty_like(same)
    ladder = np.empty(n_values.size)
    for i, n in enumerate(n_values):
        lo = cache.get(r, n + r, beta)
        hi = cache.get(r, n + r + 1, beta)
        for col, (j, jp) in enumerate(pairs):
            same[i, col] = lo.q[j] - lo.q[jp]
            adj[i, col] = lo.q[j] - hi.q[jp] - beta
        n0 = n + N / 2
        ladder[i] = k * math.sqrt(4.0 * n0 + beta ** 2)
    return QDifferenceTable(N, float(beta), k, n_values, same, adj, ladder)


def coefficient_sums(N, beta, n, k, cache=None):
    """Exact-eigenvector coefficients summed over pairs (j, j + k).

    ``s1_sum`` multiplies sin^2((q_j - q_{j+k}) tau / 2) in S1 (without the -4);
    ``s2_sum`` multiplies exp(i (q^(c)_j - q^(c+1)_{j+k} - beta) tau) in S2.
    """
    if abs(k) > N:
        raise ParameterError(f"gap k={k} exceeds N={N}")
    cache = cache or default_cache
    r = Fraction(N, 2)
    lo = cache.get(r, n + r, beta)
    hi = cache.get(r, n + r + 1, beta)
    c1 = _shift_coefficients(lo.A, 0, np.arange(lo.dim, dtype=float))
    root = np.sqrt(n + 1.0 + np.arange(lo.dim))
    c2 = np.outer(lo.A[0], hi.A[0]) * (lo.A.T @ (root[:, None] * hi.A))
    pairs = _pairs(N, k)
    s1 = math.fsum(c1[j, jp] for j, jp in pairs)
    s2 = math.fsum(c2[j, jp] for j, jp in pairs)
    return s1, s2


def coefficient_sum_predictions(N, beta, n):
    """Large-n AFA values of (s1_sum at k=1, s2_sum at k=0, s2_sum at k=+1 plus k=-1)."""
    n0 = n + N / 2
    d = beta ** 2 / 4
    f = n0 / (n0 + d)
    rt = math.sqrt(n + 1)
    return -N * f / 4, rt + N / (4 * rt) * f, -N / (4 * rt) * f
