"""Quantum-number bookkeeping for N two-level molecules in one field mode.

Cooperation numbers ``r``, Dicke projections ``m`` and excitation numbers
``c = n + m`` are integers or half-integers.  They are held as
:class:`fractions.Fraction` so that block geometry is exact; photon numbers
are plain ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


class ParameterError(ValueError):
    """Invalid quantum numbers or model parameters."""


class TruncationError(RuntimeError):
    """A photon-number truncation cannot hold the requested accuracy."""


class NumericalError(RuntimeError):
    """An eigensolver or other numerical step failed."""


def half_integer(x, name="value"):
    """Return ``x`` as an exact Fraction, requiring ``2*x`` to be an integer."""
    if isinstance(x, Fraction):
        f = x
    elif isinstance(x, int):
        f = Fraction(x)
    else:
        f = Fraction(x).limit_denominator(2)
        if abs(float(f) - float(x)) > 1e-12:
            raise ParameterError(f"{name}={x!r} is not an integer or half-integer")
    if f.denominator not in (1, 2):
        raise ParameterError(f"{name}={x!r} is not an integer or half-integer")
    return f


def cooperation_numbers(N):
    """Allowed r values for N molecules, from N/2 down to 0 or 1/2."""
    top = Fraction(N, 2)
    return [top - k for k in range(int(top) + 1)]


def _log_factorial(k):
    return math.lgamma(k + 1)


def degeneracy_weight(N, r):
    """Multiplicity P(r) of cooperation number ``r`` among N molecules.

    P(r) = N! (2r+1) / ((N/2 + r + 1)! (N/2 - r)!).  Exact integer arithmetic
    is used up to N = 20 and log-gamma beyond.
    """
    if not isinstance(N, int) or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    r = half_integer(r, "r")
    half_n = Fraction(N, 2)
    if r < 0 or r > half_n or (half_n - r).denominator != 1:
        raise ParameterError(f"r={r} is not a cooperation number for N={N}")
    upper = int(half_n + r + 1)
    lower = int(half_n - r)
    two_r_plus_1 = int(2 * r + 1)
    if N <= 20:
        num = math.factorial(N) * two_r_plus_1
        return num / (math.factorial(upper) * math.factorial(lower))
    logp = (_log_factorial(N) + math.log(two_r_plus_1)
            - _log_factorial(upper) - _log_factorial(lower))
    return math.exp(logp)


@dataclass(frozen=True)
class ModelParams:
    """Molecule count and dimensionless detuning beta = (w - W)/(W|k|).

    ``delta`` is always derived as beta**2 / 4.
    """

    N: int
    beta: float = 0.0
    delta: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 1:
            raise ParameterError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "delta", self.beta ** 2 / 4)

    @classmethod
    def from_delta(cls, N, delta):
        if delta < 0:
            raise ParameterError(f"delta must be non-negative, got {delta}")
        return cls(N, 2.0 * math.sqrt(delta))


@dataclass(frozen=True)
class DickeBlock:
    """Invariant (r, c) subspace spanned by |n>|r, c-n>, n_min <= n <= n_max."""

    r: Fraction
    c: Fraction
    n_min: int
    n_max: int

    @property
    def dim(self):
        return self.n_max - self.n_min + 1

    def photons(self):
        return range(self.n_min, self.n_max + 1)

    def m_of(self, n):
        """Dicke projection paired with photon number ``n`` in this block."""
        return self.c - n

    def index_of(self, n):
        if not self.n_min <= n <= self.n_max:
            raise ParameterError(f"photon number {n} outside block {self}")
        return n - self.n_min


def block_for(r, c):
    """Geometry of the (r, c) block: n from max(0, c - r) to c + r."""
    r = half_integer(r, "r")
    c = half_integer(c, "c")
    if r < 0:
        raise ParameterError(f"r must be non-negative, got {r}")
    if (c - r).denominator != 1:
        raise ParameterError(f"c={c} and r={r} must differ by an integer")
    if c < -r:
        raise ParameterError(f"c={c} is below the block floor -r={-r}")
    n_min = int(max(0, c - r))
    n_max = int(c + r)
    return DickeBlock(r, c, n_min, n_max)
