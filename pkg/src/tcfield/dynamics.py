"""Exact time evolution of the field observables.

All times are dimensionless, tau = W|k| t, and the prefactors (g/mu) and
|g/mu|^2 are set to one.  Every observable is a sum over initial photon
numbers of independent block contributions; those are computed (optionally
on a thread pool) and then reduced in ascending photon order with
compensated summation, so results do not depend on the worker count.

Conventions: a block eigensystem (q, A) evolves amplitudes as
``<n|U|k> = sum_j A[n, j] A[k, j] exp(i q_j tau)`` up to a block phase.
S2 is the slowly varying part of <E^-> after the carrier exp(i w t) is
removed; in each term an eigenvector column meets its own eigenvalue, so
flipping the sign of any column leaves every output unchanged.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ParameterError, cooperation_numbers, half_integer
from .spectral import default_cache

SCENARIOS = ("all_up", "all_down", "one_up_specified", "one_up_dicke",
             "two_up_specified", "half_up", "dicke")


@dataclass(frozen=True)
class TLMInitialState:
    """Diagonal molecular state: entries (r, m, weight), degeneracy folded into weight."""

    N: int
    entries: tuple
    label: str = ""

    def __post_init__(self):
        allowed = set(cooperation_numbers(self.N))
        total = 0.0
        for r, m, w in self.entries:
            if r not in allowed:
                raise ParameterError(f"r={r} is not allowed for N={self.N}")
            if abs(m) > r or (r - m).denominator != 1:
                raise ParameterError(f"m={m} out of range for r={r}")
            if w < 0:
                raise ParameterError("weights must be non-negative")
            total += w
        if abs(total - 1.0) > 1e-12:
            raise ParameterError(f"weights sum to {total!r}, not 1")

    def aggregated(self):
        """Total weight per (r, m), in first-seen order."""
        out = {}
        for r, m, w in self.entries:
            out[(r, m)] = out.get((r, m), 0.0) + w
        return out


@dataclass(frozen=True)
class ObservableSeries:
    tau: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        if len(self.tau) != len(self.values):
            raise ValueError("tau and values differ in length")

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)


def make_tlm_state(scenario, N, m=None):
    """Initial molecular state for a named scenario.

    ``dicke`` needs ``m``; ``half_up`` puts N//2 molecules up.  For
    ``two_up_specified`` the r = N/2 - 1 weight 2/N is entered as N - 1
    identical components and the remainder sits on the inert bottom state of
    r = N/2 - 2.
    """
    if not isinstance(N, int) or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    top = Fraction(N, 2)
    if isinstance(scenario, str) and scenario.startswith("dicke:"):
        scenario, m = "dicke", scenario.split(":", 1)[1]
    if scenario == "all_up":
        entries = [(top, top, 1.0)]
    elif scenario == "all_down":
        entries = [(top, -top, 1.0)]
    elif scenario == "half_up":
        entries = [(top, Fraction(N // 2) - top, 1.0)]
    elif scenario == "dicke":
        if m is None:
            raise ParameterError("dicke scenario needs m")
        m = half_integer(Fraction(m) if isinstance(m, str) else m, "m")
        if abs(m) > top or (top - m).denominator != 1:
            raise ParameterError(f"m={m} out of range for N={N}")
        entries = [(top, m, 1.0)]
    elif scenario == "one_up_dicke":
        entries = [(top, 1 - top, 1.0)]
    elif scenario == "one_up_specified":
        entries = [(top, 1 - top, 1.0 / N)]
        if N >= 2:
            entries.append((top - 1, 1 - top, (N - 1) / N))
    elif scenario == "two_up_specified":
        if N < 2:
            raise ParameterError("two_up_specified needs N >= 2")
        w_top = 2.0 / (N * (N - 1))
        entries = [(top, 2 - top, w_top)]
        if N >= 3:
            entries += [(top - 1, 2 - top, w_top)] * (N - 1)
        if N >= 4:
            entries.append((top - 2, 2 - top, 1.0 - w_top - 2.0 / N))
    else:
        raise ParameterError(f"unknown scenario {scenario!r}")
    return TLMInitialState(N, tuple(entries), scenario)


def _taus(taus):
    t = np.asarray(taus, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ParameterError("tau grid must be a non-empty 1-d array")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ParameterError("tau grid must be strictly increasing")
    return t


def _ordered_sum(terms, size, dtype):
    """Kahan-compensated sum of arrays, consumed in the given order."""
    total = np.zeros(size, dtype=dtype)
    comp = np.zeros(size, dtype=dtype)
    for x in terms:
        y = x - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _pmap(fn, items, threads):
    items = list(items)
    if threads is None or threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _shift_coefficients(A, init, weights):
    """C[j, j'] = A[init, j] A[init, j'] sum_p w_p A[p, j] A[p, j']."""
    M = A.T @ (weights[:, None] * A)
    return np.outer(A[init], A[init]) * M


def _sin2_series(q, coef, taus):
    i, j = np.triu_indices(q.size, 1)
    if i.size == 0:
        return np.zeros(taus.size)
    half = 0.5 * (q[i] - q[j])
    return -4.0 * (np.sin(np.outer(taus, half)) ** 2 @ coef[i, j])


def _sin2_mean(coef):
    i, j = np.triu_indices(coef.shape[0], 1)
    return -2.0 * float(np.sum(coef[i, j]))


def _all_up_coef(N, beta, n, cache):
    r = Fraction(N, 2)
    es = cache.get(r, n + r, beta)
    p = np.arange(es.dim, dtype=float)
    return es.q, _shift_coefficients(es.A, 0, p)


def _all_down_coef(N, beta, n, cache):
    r = Fraction(N, 2)
    es = cache.get(r, n - r, beta)
    top = es.dim - 1
    lost = top - np.arange(es.dim, dtype=float)
    return es.q, _shift_coefficients(es.A, top, lost)


def _occupied(density):
    return [n for n in range(density.diag.size) if density.diag[n] != 0.0]


def s1_all_up(N, beta, density, taus, cache=None, threads=1):
    """Photon gain S1(tau) with every molecule initially up: <E^-E^+> = nbar + S1."""
    cache = cache or default_cache
    t = _taus(taus)

    def term(n):
        q, coef = _all_up_coef(N, beta, n, cache)
        return density.diag[n] * _sin2_series(q, coef, t)

    vals = _ordered_sum(_pmap(term, _occupied(density), threads), t.size, float)
    return ObservableSeries(t, vals, "s1")


def s4_all_down(N, beta, density, taus, cache=None, threads=1):
    """Photon loss S4(tau) with every molecule initially down: <E^-E^+> = nbar - S4."""
    cache = cache or default_cache
    t = _taus(taus)

    def term(n):
        q, coef = _all_down_coef(N, beta, n, cache)
        return density.diag[n] * _sin2_series(q, coef, t)

    vals = _ordered_sum(_pmap(term, _occupied(density), threads), t.size, float)
    return ObservableSeries(t, vals, "s4")


def _amplitudes(es, init, t):
    """amp[t, p] = sum_j A[p, j] A[init, j] exp(i q_j t)."""
    phase = np.exp(1j * np.outer(t, es.q))
    return (phase * es.A[init]) @ es.A.T


def s2_all_up(N, beta, density, taus, cache=None, threads=1):
    """Complex field amplitude S2(tau) with every molecule initially up.

    Uses adjacent blocks c = n + N/2 and c + 1 for each superdiagonal
    element <n|rho_f|n+1>.
    """
    cache = cache or default_cache
    t = _taus(taus)
    r = Fraction(N, 2)
    carrier = np.exp(-1j * beta * t)
    sup = density.superdiag
    occupied = [n for n in range(sup.size) if sup[n] != 0.0]

    def term(n):
        lo = cache.get(r, n + r, beta)
        hi = cache.get(r, n + r + 1, beta)
        a_lo = _amplitudes(lo, 0, t)
        a_hi = _amplitudes(hi, 0, t)
        root = np.sqrt(n + 1.0 + np.arange(lo.dim))
        return sup[n] * carrier * np.sum(root * a_lo * np.conj(a_hi), axis=1)

    vals = _ordered_sum(_pmap(term, occupied, threads), t.size, complex)
    return ObservableSeries(t, vals, "s2")


def _ee_terms(state, density):
    for r, m, w in state.entries:
        if w == 0.0:
            continue
        for k in _occupied(density):
            yield r, m, w, k


def ee_general(N, beta, density, state, taus, cache=None, threads=1):
    """<E^-E^+>(tau) for any diagonal molecular state and diagonal field readout.

    Evaluated from block amplitudes directly; it does not share the sin^2
    reduction used by :func:`s1_all_up` and :func:`s4_all_down`.
    """
    if state.N != N:
        raise ParameterError(f"state built for N={state.N}, asked for N={N}")
    cache = cache or default_cache
    t = _taus(taus)

    def term(item):
        r, m, w, k = item
        es = cache.get(r, k + m, beta)
        idx = k - es.block.n_min
        photons = np.arange(es.block.n_min, es.block.n_max + 1, dtype=float)
        amp = _amplitudes(es, idx, t)
        return (w * density.diag[k]) * ((amp.real ** 2 + amp.imag ** 2) @ photons)

    vals = _ordered_sum(_pmap(term, list(_ee_terms(state, density)), threads), t.size, float)
    return ObservableSeries(t, vals, "ee")


def stationary_mean(kind, N, beta, density, state=None, cache=None):
    """Infinite-time average of s1, s4 or ee.

    Block spectra are simple, so every sin^2 averages to 1/2 and every
    oscillating cross term to 0.
    """
    cache = cache or default_cache
    if kind in ("s1", "s4"):
        coef_fn = _all_up_coef if kind == "s1" else _all_down_coef
        terms = []
        for n in _occupied(density):
            _, coef = coef_fn(N, beta, n, cache)
            terms.append(density.diag[n] * _sin2_mean(coef))
        return float(_ordered_sum(terms, 1, float)[0])
    if kind == "ee":
        if state is None:
            raise ParameterError("ee stationary mean needs a molecular state")
        terms = []
        for r, m, w, k in _ee_terms(state, density):
            es = cache.get(r, k + m, beta)
            idx = k - es.block.n_min
            photons = np.arange(es.block.n_min, es.block.n_max + 1, dtype=float)
            weights = es.A[idx] ** 2
            terms.append(w * density.diag[k] * float(weights @ (photons @ es.A ** 2)))
        return float(_ordered_sum(terms, 1, float)[0])
    raise ParameterError(f"no stationary mean for observable {kind!r}")


def short_time_rate(series, max_tau=1e-3):
    """Quadratic coefficient lim S(tau)/tau^2 from the first two positive samples.

    The series is even in tau, so S/tau^2 = a + b tau^2 + ...; one Richardson
    step removes the tau^2 term.  A sample at tau = 0 is subtracted as S(0).
    """
    t = np.asarray(series.tau, dtype=float)
    v = np.real(np.asarray(series.values))
    base = v[0] if t[0] == 0.0 else 0.0
    pos = np.nonzero(t > 0)[0]
    if pos.size < 2 or t[pos[1]] > max_tau:
        raise ParameterError(f"series needs two samples in (0, {max_tau:g}] for a short-time rate")
    t1, t2 = t[pos[0]], t[pos[1]]
    g1 = (v[pos[0]] - base) / t1 ** 2
    g2 = (v[pos[1]] - base) / t2 ** 2
    return float((t2 ** 2 * g1 - t1 ** 2 * g2) / (t2 ** 2 - t1 ** 2))
