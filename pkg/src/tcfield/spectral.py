"""Tridiagonal block matrices and their eigensystems.

Within an (r, c) block the Hamiltonian, shifted by c and divided by -|k|,
is the real symmetric tridiagonal matrix

    K[n, n]   = -n * beta
    K[n, n+1] = sqrt(n + 1) * sqrt((r + m)(r - m + 1)),   m = c - n

whose eigenvalues are the effective eigenvalues q (physical eigenvalue
c - |k| q).  Eigenvalues are returned in descending order, eigenvectors as
columns, each column's first non-negligible entry positive.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import DickeBlock, NumericalError, block_for


@dataclass(frozen=True)
class SymTridiag:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ValueError("offdiag must have len(diag) - 1 entries")

    def dense(self):
        return (np.diag(self.diag) + np.diag(self.offdiag, 1)
                + np.diag(self.offdiag, -1))

    def norm(self):
        """Frobenius norm."""
        return float(np.sqrt(np.sum(self.diag ** 2) + 2 * np.sum(self.offdiag ** 2)))


@dataclass(frozen=True)
class BlockEigensystem:
    block: DickeBlock
    beta: float
    q: np.ndarray
    A: np.ndarray

    @property
    def dim(self):
        return self.block.dim

    def with_column_sign(self, j, sign=-1.0):
        """Copy with column ``j`` multiplied by ``sign``; used by sign-invariance checks."""
        A = self.A.copy()
        A[:, j] *= sign
        return BlockEigensystem(self.block, self.beta, self.q, A)


def build_block_matrix(block, beta):
    n = np.arange(block.n_min, block.n_max + 1, dtype=float)
    diag = -n * beta
    if block.dim == 1:
        return SymTridiag(diag, np.zeros(0))
    r = float(block.r)
    m = float(block.c) - n[:-1]
    off = np.sqrt(n[:-1] + 1.0) * np.sqrt((r + m) * (r - m + 1.0))
    return SymTridiag(diag, off)


def _fix_signs(A):
    A = A.copy()
    scale = np.max(np.abs(A), axis=0)
    for j in range(A.shape[1]):
        nz = np.nonzero(np.abs(A[:, j]) > 1e-12 * scale[j])[0]
        if nz.size and A[nz[0], j] < 0:
            A[:, j] = -A[:, j]
    return A


def eigendecompose(mat, block):
    d = np.asarray(mat.diag, dtype=float)
    if d.size == 1:
        return BlockEigensystem(block, np.nan, d.copy(), np.ones((1, 1)))
    try:
        w, v = eigh_tridiagonal(d, np.asarray(mat.offdiag, dtype=float))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed for block r={block.r}, c={block.c}: {exc}") from exc
    q = w[::-1].copy()
    A = v[:, ::-1]
    if np.max(np.abs(A.T @ A - np.eye(d.size))) > 1e-13:
        A, _ = np.linalg.qr(A)
    A = _fix_signs(A)
    K = mat.dense()
    resid = np.max(np.abs(K @ A - A * q))
    if resid > 1e-12 * max(mat.norm(), 1.0):
        raise NumericalError(
            f"eigen-residual {resid:.3e} too large for block r={block.r}, c={block.c}")
    return BlockEigensystem(block, np.nan, q, A)


def eigensystem(r, c, beta):
    """Eigensystem of block (r, c) at detuning ``beta``, computed fresh."""
    block = block_for(r, c)
    es = eigendecompose(build_block_matrix(block, beta), block)
    return BlockEigensystem(block, float(beta), es.q, es.A)


class SpectralCache:
    """Thread-safe memo of block eigensystems keyed by (r, c, beta).

    Eigensystems are immutable once stored; ``put`` exists so that tests can
    plant modified systems (for instance with a flipped column sign).
    """

    def __init__(self):
        self._store = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(r, c, beta):
        return (Fraction(r).limit_denominator(2), Fraction(c).limit_denominator(2), float(beta))

    def get(self, r, c, beta):
        key = self._key(r, c, beta)
        with self._lock:
            es = self._store.get(key)
        if es is None:
            es = eigensystem(key[0], key[1], key[2])
            with self._lock:
                es = self._store.setdefault(key, es)
        return es

    def put(self, es):
        key = self._key(es.block.r, es.block.c, es.beta)
        with self._lock:
            self._store[key] = es

    def __len__(self):
        return len(self._store)

    def clear(self):
        with self._lock:
            self._store.clear()


default_cache = SpectralCache()


@dataclass(frozen=True)
class BlockDiagnostics:
    orthonormality: float
    eigen_residual: float
    symmetry: float
    parity: float
    trace: float


def verify_block(es):
    """Residuals of one eigensystem.

    ``symmetry`` is max |q_j + q_{dim-1-j}|, zero only at resonance.
    ``parity`` compares column dim-1-j with (-1)^k times column j (up to an
    overall sign); it is reported only for beta == 0, else NaN.
    """
    mat = build_block_matrix(es.block, es.beta)
    A, q = es.A, es.q
    dim = q.size
    ortho = float(np.max(np.abs(A.T @ A - np.eye(dim))))
    resid = float(np.max(np.abs(mat.dense() @ A - A * q)))
    sym = float(np.max(np.abs(q + q[::-1])))
    n = np.arange(es.block.n_min, es.block.n_max + 1)
    trace = float(abs(np.sum(q) + es.beta * np.sum(n)))
    if es.beta == 0.0:
        alt = (-1.0) ** np.arange(dim)
        par = 0.0
        for j in range(dim):
            mirrored = A[:, dim - 1 - j]
            flipped = alt * A[:, j]
            par = max(par, min(np.max(np.abs(mirrored - flipped)),
                               np.max(np.abs(mirrored + flipped))))
    else:
        par = float("nan")
    return BlockDiagnostics(ortho, resid, sym, float(par), trace)
