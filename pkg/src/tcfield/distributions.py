"""Initial photon densities: diagonal and first superdiagonal of rho_f(0)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .core import ParameterError, TruncationError

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class PhotonDensity:
    diag: np.ndarray
    superdiag: np.ndarray
    n_trunc: int
    tail_mass: float
    nbar: float
    label: str = ""

    @property
    def truncated_mean(self):
        return float(np.dot(np.arange(self.n_trunc + 1), self.diag))

    def has_coherence(self):
        return bool(np.any(self.superdiag != 0.0))


def _min_trunc(nbar):
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 25.0))


def _choose_trunc(nbar, tail, tail_tol, n_trunc):
    """Smallest admissible cutoff, or validate a user-supplied one.

    ``tail(n)`` is the probability mass above photon number n.
    """
    if n_trunc is not None:
        if n_trunc < 0:
            raise ParameterError("n_trunc must be non-negative")
        if tail(n_trunc) > tail_tol:
            raise TruncationError(
                f"cutoff n_trunc={n_trunc} leaves tail mass {tail(n_trunc):.3e} > {tail_tol:g}")
        return n_trunc
    n = _min_trunc(nbar)
    while tail(n) > tail_tol:
        n = int(n * 1.25) + 1
    # shrink back to the smallest n that still meets the tolerance
    lo, hi = _min_trunc(nbar), n
    while lo < hi:
        mid = (lo + hi) // 2
        if tail(mid) <= tail_tol:
            hi = mid
        else:
            lo = mid + 1
    return hi


def fock(n0):
    """Number state |n0><n0|."""
    if not isinstance(n0, (int, np.integer)) or n0 < 0:
        raise ParameterError(f"Fock photon number must be a non-negative integer, got {n0!r}")
    n0 = int(n0)
    diag = np.zeros(n0 + 1)
    diag[n0] = 1.0
    return PhotonDensity(diag, np.zeros(n0), n0, 0.0, float(n0), f"fock:{n0}")


def coherent(nbar, tail_tol=DEFAULT_TAIL_TOL, n_trunc=None):
    """Glauber state with real positive amplitude sqrt(nbar).

    diag[n] = exp(-nbar) nbar^n / n!, superdiag[n] = sqrt(diag[n] diag[n+1]).
    """
    if nbar < 0:
        raise ParameterError(f"nbar must be non-negative, got {nbar}")
    nbar = float(nbar)
    nt = _choose_trunc(nbar, lambda n: float(poisson.sf(n, nbar)) if nbar > 0 else 0.0,
                       tail_tol, n_trunc)
    n = np.arange(nt + 1)
    if nbar == 0.0:
        diag = np.zeros(nt + 1)
        diag[0] = 1.0
        sup = np.zeros(nt)
    else:
        logp = -nbar + n * math.log(nbar) - gammaln(n + 1)
        diag = np.exp(logp)
        sup = np.exp(0.5 * (logp[:-1] + logp[1:]))
    tail = float(poisson.sf(nt, nbar)) if nbar > 0 else 0.0
    return PhotonDensity(diag, sup, nt, tail, nbar, f"coherent:{nbar:g}")


def thermal(nbar, tail_tol=DEFAULT_TAIL_TOL, n_trunc=None):
    """Bose-Einstein density diag[n] = (1/(1+nbar)) (nbar/(1+nbar))^n, no coherence."""
    if nbar < 0:
        raise ParameterError(f"nbar must be non-negative, got {nbar}")
    nbar = float(nbar)
    x = nbar / (1.0 + nbar)
    nt = _choose_trunc(nbar, lambda n: x ** (n + 1), tail_tol, n_trunc)
    n = np.arange(nt + 1)
    diag = (1.0 / (1.0 + nbar)) * x ** n
    return PhotonDensity(diag, np.zeros(nt), nt, x ** (nt + 1), nbar, f"thermal:{nbar:g}")


def from_spec(spec, tail_tol=DEFAULT_TAIL_TOL, n_trunc=None):
    """Parse ``"fock:4"``, ``"coherent:100"`` or ``"thermal:30"``."""
    try:
        name, _, arg = spec.partition(":")
        name = name.strip().lower()
        if name == "fock":
            return fock(int(arg))
        if name == "coherent":
            return coherent(float(arg), tail_tol, n_trunc)
        if name == "thermal":
            return thermal(float(arg), tail_tol, n_trunc)
    except ValueError as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"bad distribution {spec!r}: {exc}") from exc
    raise ParameterError(f"unknown distribution {spec!r}; use fock:n, coherent:nbar or thermal:nbar")
