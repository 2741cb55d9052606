"""Closed-form special cases, written out term by term.

These are kept in the grouping in which they were originally stated, with
no algebraic tidying, so that they work as independent oracles for the
numerical engine.  Every form takes a photon density, a detuning and a
tau grid; forms valid only at resonance refuse beta != 0.

Several stated forms disagree with exact dynamics: the resonant S2 for
N = 2 and N = 3, the N = 4 S1 (three signs and one frequency), the N = 1
non-resonant S2, and the r = N/2 - 1 frequency of the two-up result.  They
are kept as stated; ``eval_closed(..., corrected=True)`` selects a repaired
variant, derived independently of the eigensolver.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .core import ParameterError
from .dynamics import ObservableSeries, _taus


class ClosedFormId(str, enum.Enum):
    s1_n1 = "s1_n1"
    s2_n1 = "s2_n1"
    s1_n1_nr = "s1_n1_nr"
    s2_n1_nr = "s2_n1_nr"
    s1_n2 = "s1_n2"
    s2_n2 = "s2_n2"
    s1_n3 = "s1_n3"
    s2_n3 = "s2_n3"
    s1_n4 = "s1_n4"
    spont_n1 = "spont_n1"
    spont_n2 = "spont_n2"
    spont_n3 = "spont_n3"
    one_up = "one_up"
    one_up_dicke = "one_up_dicke"
    two_up = "two_up"
    s4_n1_nr = "s4_n1_nr"
    s4_n2 = "s4_n2"
    q_cubic_n2 = "q_cubic_n2"
    eigvec_n2 = "eigvec_n2"


RESONANT_ONLY = {
    ClosedFormId.s1_n1, ClosedFormId.s2_n1, ClosedFormId.s1_n2, ClosedFormId.s2_n2,
    ClosedFormId.s1_n3, ClosedFormId.s2_n3, ClosedFormId.s1_n4, ClosedFormId.spont_n1,
    ClosedFormId.spont_n2, ClosedFormId.spont_n3, ClosedFormId.one_up,
    ClosedFormId.one_up_dicke, ClosedFormId.two_up, ClosedFormId.s4_n2,
}

# observable each time-series form describes
KIND = {
    ClosedFormId.s1_n1: "s1", ClosedFormId.s1_n1_nr: "s1", ClosedFormId.s1_n2: "s1",
    ClosedFormId.s1_n3: "s1", ClosedFormId.s1_n4: "s1", ClosedFormId.spont_n1: "s1",
    ClosedFormId.spont_n2: "s1", ClosedFormId.spont_n3: "s1",
    ClosedFormId.s2_n1: "s2", ClosedFormId.s2_n1_nr: "s2", ClosedFormId.s2_n2: "s2",
    ClosedFormId.s2_n3: "s2",
    ClosedFormId.one_up: "ee", ClosedFormId.one_up_dicke: "ee", ClosedFormId.two_up: "ee",
    ClosedFormId.s4_n1_nr: "s4", ClosedFormId.s4_n2: "s4",
}


def _grid(weights, t):
    """Column of photon numbers with nonzero weight, their weights, and tau row."""
    n = np.nonzero(weights)[0]
    return n[:, None].astype(float), weights[n][:, None], t[None, :]


def _sin2(x):
    return np.sin(x) ** 2


# ---------------------------------------------------------------- N = 1

def _s1_n1(density, beta, t):
    n, w, t = _grid(density.diag, t)
    return np.sum(w * _sin2(np.sqrt(n + 1) * t), axis=0)


def _s2_n1(density, beta, t):
    n, w, t = _grid(density.superdiag, t)
    a = np.sqrt(n + 1) * t
    b = np.sqrt(n + 2) * t
    return np.sum(w * (np.sqrt(n + 1) * np.cos(a) * np.cos(b)
                       + np.sqrt(n + 2) * np.sin(a) * np.sin(b)), axis=0)


def _s1_n1_nr(density, beta, t):
    d = beta ** 2 / 4
    n, w, t = _grid(density.diag, t)
    return np.sum(w * (n + 1) / (n + 1 + d) * _sin2(np.sqrt(n + 1 + d) * t), axis=0)


def _s2_n1_nr(density, beta, t):
    d = beta ** 2 / 4
    sd = math.sqrt(d)
    n, w, t = _grid(density.superdiag, t)
    o1 = np.sqrt(n + 1 + d)
    o2 = np.sqrt(n + 2 + d)
    r1, r2 = np.sqrt(1 + n), np.sqrt(2 + n)
    x = (-r1 + r2) * sd + np.sqrt((1 + n) * (n + 1 + d)) + np.sqrt((2 + n) * (n + 1 + d))
    y = (r1 - r2) * sd + np.sqrt((1 + n) * (n + 1 + d)) + np.sqrt((2 + n) * (n + 1 + d))
    body = (-x * (sd - o2) * np.cos((o1 - o2) * t)
            + y * (sd + o2) * np.cos((o1 - o2) * t)
            + 8 * r2 * (1 + n - np.sqrt(2 + 3 * n + n * n)) * np.cos((o1 + o2) * t)
            + 2j * sd * (np.sqrt((1 + n) * (n + 1 + d)) + np.sqrt((2 + n) * (n + 1 + d))
                         + np.sqrt((1 + n) * (n + 2 + d)) - np.sqrt((2 + n) * (n + 2 + d)))
            * np.sin((o1 - o2) * t))
    return np.sum(w * body / (4 * o1 * o2), axis=0)


def _s2_n1_nr_corrected(density, beta, t):
    """Exact N = 1 S2 at any detuning, written with Rabi frequencies W1, W2."""
    u = beta / 2
    n, w, t = _grid(density.superdiag, t)
    o1 = np.sqrt(n + 1 + u * u)
    o2 = np.sqrt(n + 2 + u * u)
    lo = np.cos(o1 * t) + 1j * (u / o1) * np.sin(o1 * t)
    hi = np.cos(o2 * t) - 1j * (u / o2) * np.sin(o2 * t)
    cross = np.sqrt(n + 1) * (n + 2) / (o1 * o2) * np.sin(o1 * t) * np.sin(o2 * t)
    return np.sum(w * (np.sqrt(n + 1) * lo * hi + cross), axis=0)


# ---------------------------------------------------------------- N = 2

def _s1_n2(density, beta, t):
    n, w, t = _grid(density.diag, t)
    x = np.sqrt(n + 1.5) * t
    body = (_sin2(x) * (n + 1) * (n + 2) / (2 * n + 3) ** 2
            - 0.125 * _sin2(2 * x) * (n + 1) / (2 * n + 3) ** 2)
    return 8 * np.sum(w * body, axis=0)


def _s2_n2(density, beta, t):
    n, w, t = _grid(density.superdiag, t)
    a = math.sqrt(2) * np.sqrt(2 * n + 3) * t
    b = math.sqrt(2) * np.sqrt(2 * n + 5) * t
    body = (((n + 1) * np.sqrt(n + 1) + (n + 2) * np.sqrt(n + 3)) * np.cos(a) * np.cos(b)
            + ((n + 1) * np.sqrt(3 + n) - (n + 3) * np.sqrt(n + 1)) * (np.cos(a) + np.cos(b))
            + (n + 3) * (np.sqrt(n + 1) + (n + 1) * np.sqrt(n + 3) / (n + 2))
            + (2 * n + 3) * np.sqrt(n + 2) * np.sin(a) * np.sin(b))
    return np.sum(w * (n + 2) / ((2 * n + 3) * (2 * n + 5)) * body, axis=0)


def _s2_n2_corrected(density, beta, t):
    """Exact N = 2 S2 at resonance, reduced from the explicit 3 x 3 eigenvectors."""
    n, w, t = _grid(density.superdiag, t)
    q = (2 * n + 3) * (2 * n + 5)
    a = np.sqrt(4 * n + 6) * t
    b = np.sqrt(4 * n + 10) * t
    body = (2 * (n + 2) ** 2 * np.cos(a) * np.cos(b)
            + (n + 2) * np.sqrt(q) * np.sin(a) * np.sin(b)
            - (n + 3) * np.cos(a) - (n + 2) * np.cos(b) + 2 * (n + 2) * (n + 3))
    return np.sum(w * np.sqrt(n + 1) / q * body, axis=0)


def _chain_vectors(off, q):
    """Normalized null vectors of a zero-diagonal tridiagonal matrix minus q,
    from the three-term recurrence started at component 0."""
    vecs = []
    for qj in q:
        v = [1.0, qj / off[0]]
        for k in range(1, len(off)):
            v.append((qj * v[k] - off[k - 1] * v[k - 1]) / off[k])
        v = np.array(v)
        vecs.append(v / np.linalg.norm(v))
    return np.array(vecs).T


# ---------------------------------------------------------------- N = 3

def _s1_n3(density, beta, t):
    n, w, t = _grid(density.diag, t)
    s = 73 + 16 * n * (4 + n)
    rs = np.sqrt(s)
    lo = np.sqrt(10 + 5 * n - rs)
    hi = np.sqrt(10 + 5 * n + rs)
    body = (3 * (2 + n) * (1 + n + np.sqrt((1 + n) * (3 + n))) * _sin2((lo - hi) * t / 2) / s
            + 3 * (1 + n) * (2 + n) * (8 + 4 * n + rs) * _sin2(lo * t)
            / (2 * s * (-7 - 2 * n + rs))
            - 3 * (2 + n) * (-1 - n + np.sqrt((1 + n) * (3 + n))) * _sin2((lo + hi) * t / 2) / s
            + 3 * (1 + n) * (2 + n) * (-8 - 4 * n + rs) * _sin2(hi * t)
            / (2 * s * (7 + 2 * n + rs)))
    return 4 * np.sum(w * body, axis=0)


def _s2_n3(density, beta, t):
    n, w, t = _grid(density.superdiag, t)
    s = 73 + 16 * n * (4 + n)
    sp = 153 + 96 * n + 16 * n * n
    rs, rsp = np.sqrt(s), np.sqrt(sp)
    c_lo, c_hi = np.sqrt(10 + 5 * n - rs), np.sqrt(10 + 5 * n + rs)
    d_lo = np.sqrt(15 + 5 * n - np.sqrt(73 + 16 * (1 + n) * (5 + n)))
    d_hi = np.sqrt(15 + 5 * n + rsp)
    r1, r2, r3, r4 = np.sqrt(1 + n), np.sqrt(2 + n), np.sqrt(3 + n), np.sqrt(4 + n)
    k_cos = -12 * (2 + n) * (-(1 + n) * r3 + r1 * (3 + n))
    k_sin = 12 * (2 + n) * (3 + n) * (r2 - r4)
    cos, sin = np.cos, np.sin
    body = (((7 + 2 * n) * (r1 - r3) + (r1 + r3) * rs) * (9 + 2 * n + np.sqrt(153 + 16 * n * (6 + n)))
            * cos(c_lo * t) * cos(d_lo * t)
            + k_cos * cos(d_hi * t) * cos(c_lo * t)
            + (k_cos * cos(d_lo * t)
               + ((7 + 2 * n) * (r1 - r3) - (r1 + r3) * rs)
               * (9 + 2 * n - np.sqrt(153 + 16 * n * (6 + n))) * cos(d_hi * t)) * cos(c_hi * t)
            + ((1 + 2 * n) * (-r2 + r4) + (r2 + r4) * rs) * (9 + 2 * n + np.sqrt(153 + 16 * n * (6 + n)))
            * sin(d_lo * t) * sin(c_lo * t)
            + k_sin * sin(d_hi * t) * sin(c_lo * t)
            + (k_sin * sin(d_lo * t)
               + ((1 + 2 * n) * (-r2 + r4) - (r2 + r4) * rs)
               * (9 + 2 * n - np.sqrt(153 + 16 * n * (6 + n))) * sin(d_hi * t)) * sin(c_hi * t))
    return np.sum(w * body / (4 * np.sqrt(s * sp)), axis=0)


def _s2_n3_corrected(density, beta, t):
    """Exact N = 3 S2 at resonance from the closed-form biquadratic roots
    +-sqrt(10 + 5n +- sqrt(S)) and recurrence eigenvectors."""
    out = np.zeros(t.size)
    for n in np.nonzero(density.superdiag)[0]:
        blocks = []
        for m in (n, n + 1):
            rs = math.sqrt(73 + 16 * m * (4 + m))
            lo, hi = math.sqrt(10 + 5 * m - rs), math.sqrt(10 + 5 * m + rs)
            q = np.array([hi, lo, -lo, -hi])
            off = [math.sqrt(3 * (m + 1)), 2 * math.sqrt(m + 2), math.sqrt(3 * (m + 3))]
            blocks.append((q, _chain_vectors(off, q)))
        (q1, v1), (q2, v2) = blocks
        root = np.sqrt(n + 1.0 + np.arange(4))
        coef = np.outer(v1[0], v2[0]) * (v1.T @ (root[:, None] * v2))
        freq = q1[:, None] - q2[None, :]
        out += density.superdiag[n] * (np.cos(np.outer(t, freq.ravel())) @ coef.ravel())
    return out


# ---------------------------------------------------------------- N = 4

def _s1_n4(density, beta, t, corrected=False):
    n, w, t = _grid(density.diag, t)
    R = np.sqrt(33 + 4 * n * (5 + n))
    r82 = np.sqrt(82 + 16 * n * (5 + n))
    f33 = 33 + 4 * n * (5 + n)
    f41 = 41 + 8 * n * (5 + n)
    dm = 561 - 87 * R + n * (505 - 45 * R + 2 * n * (84 + 10 * n - 3 * R))
    dp = 561 + 87 * R + n * (505 + 20 * n ** 2 + 45 * R + 6 * n * (28 + R))
    lo = np.sqrt(25 + 10 * n - 3 * R)
    hi = np.sqrt(25 + 10 * n + 3 * R)
    p3 = (1 + n) * (2 + n) * (3 + n)
    gamma_ratio = p3 * (4 + n)  # Gamma(5 + n) / n!
    if corrected:
        hi_half, sign = hi, -1.0
    else:
        hi_half, sign = np.sqrt(25 + 10 + 3 * R), 1.0
    body = (p3 * (10 + 4 * n + r82) * _sin2((lo - hi) * t / 2) / (f33 * f41)
            + 12 * p3 * (4 + n) * (1 + 2 * n + R) * _sin2(lo * t / 2) / (f41 * dm)
            + sign * 12 * (-1 - 2 * n + R) * gamma_ratio * _sin2(hi_half * t / 2) / (f41 * dp)
            + sign * 3 * p3 * (9 + R + n * (7 + 2 * n + R)) * _sin2(lo * t) / dm ** 2
            + sign * p3 * (-10 - 4 * n + r82) * _sin2((lo + hi) * t / 2) / (f33 * f41)
            + 3 * p3 * (-9 + R + n * (-7 - 2 * n + R)) * _sin2(hi * t) / dp ** 2)
    return 4 * np.sum(w * body, axis=0)


def _s1_n4_corrected(density, beta, t):
    """N = 4 S1 with the third, fourth and fifth coefficients negated and the
    third frequency restored to sqrt(25 + 10n + 3R)."""
    return _s1_n4(density, beta, t, corrected=True)


# ------------------------------------------------- spontaneous emission

def _require_vacuum(density):
    if density.diag.size == 0 or density.diag[0] != 1.0:
        raise ParameterError("spontaneous-emission forms assume an empty field (fock:0)")


def _spont_n1(density, beta, t):
    _require_vacuum(density)
    return _sin2(t)


def _spont_n2(density, beta, t):
    _require_vacuum(density)
    x = math.sqrt(1.5) * t
    return 8 * (2 / 9 * _sin2(x) - 1 / 72 * _sin2(2 * x))


def _spont_n3(density, beta, t):
    _require_vacuum(density)
    r73, r3 = math.sqrt(73), math.sqrt(3)
    lo, hi = math.sqrt(10 - r73), math.sqrt(10 + r73)
    return 12 / 73 * (2 * (1 + r3) * _sin2((lo - hi) * t / 2)
                      - 2 * (-1 + r3) * _sin2((lo + hi) * t / 2)
                      + (8 + r73) * _sin2(lo * t) / (-7 + r73)
                      + (-8 + r73) * _sin2(hi * t) / (7 + r73))


def _one_up(density, beta, t, N):
    _require_vacuum(density)
    return _sin2(math.sqrt(N) * t) / N


def _one_up_dicke(density, beta, t, N):
    _require_vacuum(density)
    return _sin2(math.sqrt(N) * t)


def _two_up_top(t, N):
    x = _sin2(math.sqrt(2 * N - 1) * t / math.sqrt(2))
    return 8 / (N * (2 * N - 1)) * x * (1 + x / (2 * N - 1))


def _two_up(density, beta, t, N):
    _require_vacuum(density)
    if N < 3:
        raise ParameterError("two-up form needs N >= 3")
    return _two_up_top(t, N) + 2 / N * _sin2(math.sqrt(N - 1) * t)


def _two_up_corrected(density, beta, t, N):
    """Two-up emission with the r = N/2 - 1 sector oscillating at sqrt(N - 2)."""
    _require_vacuum(density)
    if N < 3:
        raise ParameterError("two-up form needs N >= 3")
    return _two_up_top(t, N) + 2 / N * _sin2(math.sqrt(N - 2) * t)


# ---------------------------------------------------------- absorption

def _s4_n1_nr(density, beta, t):
    d = beta ** 2 / 4
    diag = density.diag.copy()
    diag[0] = 0.0
    n, w, t = _grid(diag, t)
    return np.sum(w * n / (n + d) * _sin2(np.sqrt(n + d) * t), axis=0)


def _s4_n2(density, beta, t):
    out = np.zeros(t.size)
    if density.diag.size > 1:
        out += density.diag[1] * _sin2(math.sqrt(2) * t)
    diag = density.diag.copy()
    diag[:2] = 0.0
    if not np.any(diag):
        return out
    n, w, t = _grid(diag, t)
    x = np.sqrt(n - 0.5) * t
    body = (_sin2(x) * n * (n - 1) / (2 * n - 1) ** 2
            + n / (8 * (2 * n - 1) ** 2) * _sin2(2 * x))
    return out + 8 * np.sum(w * body, axis=0)


_SERIES = {
    ClosedFormId.s1_n1: _s1_n1,
    ClosedFormId.s2_n1: _s2_n1,
    ClosedFormId.s1_n1_nr: _s1_n1_nr,
    ClosedFormId.s2_n1_nr: _s2_n1_nr,
    ClosedFormId.s1_n2: _s1_n2,
    ClosedFormId.s2_n2: _s2_n2,
    ClosedFormId.s1_n3: _s1_n3,
    ClosedFormId.s2_n3: _s2_n3,
    ClosedFormId.s1_n4: _s1_n4,
    ClosedFormId.spont_n1: _spont_n1,
    ClosedFormId.spont_n2: _spont_n2,
    ClosedFormId.spont_n3: _spont_n3,
    ClosedFormId.s4_n1_nr: _s4_n1_nr,
    ClosedFormId.s4_n2: _s4_n2,
}
_SERIES_N = {
    ClosedFormId.one_up: _one_up,
    ClosedFormId.one_up_dicke: _one_up_dicke,
    ClosedFormId.two_up: _two_up,
}
_CORRECTED = {
    ClosedFormId.s2_n1_nr: _s2_n1_nr_corrected,
    ClosedFormId.s2_n2: _s2_n2_corrected,
    ClosedFormId.s2_n3: _s2_n3_corrected,
    ClosedFormId.s1_n4: _s1_n4_corrected,
    ClosedFormId.two_up: _two_up_corrected,
}


def eval_closed(form, density, beta, taus, N=None, corrected=False):
    """Evaluate a closed-form time series.

    ``N`` is needed by the one-up and two-up forms.  ``corrected`` selects the
    repaired variant where one exists (else the stated form is used).
    """
    form = ClosedFormId(form)
    t = _taus(taus)
    if form in (ClosedFormId.q_cubic_n2, ClosedFormId.eigvec_n2):
        raise ParameterError(f"{form.value} is not a time series; call {form.value}() directly")
    if form in RESONANT_ONLY and beta != 0:
        raise ParameterError(f"{form.value} holds only at resonance (beta = 0)")
    if corrected and form in _CORRECTED:
        fn = _CORRECTED[form]
    else:
        fn = _SERIES.get(form) or _SERIES_N[form]
    if form in _SERIES_N:
        if N is None:
            raise ParameterError(f"{form.value} needs N")
        vals = fn(density, beta, t, N)
    else:
        vals = fn(density, beta, t)
    return ObservableSeries(t, np.asarray(vals), KIND[form])


# ------------------------------------------------ two-molecule cubic

def _y(n, beta, convention):
    if convention == "stated":
        return 6 + 2 * n + beta ** 2
    if convention == "block":
        # coupling sqrt(2(n+1)), sqrt(2(n+2)) of the N = 2 block at photon n
        return 6 + 4 * n + beta ** 2
    raise ParameterError(f"unknown convention {convention!r}")


def q_cubic_n2(n, beta, convention="stated"):
    """Three real roots of the N = 2 cubic, via the trigonometric Cardano form.

    ``convention="stated"`` uses y = 6 + 2n + beta^2 as stated;
    ``convention="block"`` uses y = 6 + 4n + beta^2, which reproduces the
    eigenvalues of the N = 2 block for photon number n at any beta.
    """
    y = _y(n, beta, convention)
    z3 = complex(-54 * beta, 0) + np.sqrt(complex(2916 * beta ** 2 - 108 * y ** 3))
    th = math.atan2(z3.imag, z3.real) / 3
    shift = -beta - n * beta
    ry = math.sqrt(y)
    return (shift + 2 * ry * math.cos(th) / math.sqrt(3),
            shift - ry / 3 * (math.sqrt(3) * math.cos(th) - 3 * math.sin(th)),
            shift - ry / 3 * (math.sqrt(3) * math.cos(th) + 3 * math.sin(th)))


def q_cubic_n2_complex(n, beta, convention="stated"):
    """Same roots from the complex Cardano expression; imaginary parts returned too."""
    y = _y(n, beta, convention)
    w = (-54 * beta + np.sqrt(complex(2916 * beta ** 2 - 108 * y ** 3))) ** (1 / 3)
    c2, c4 = 2 ** (1 / 3), 2 ** (2 / 3)
    i3 = 1j * math.sqrt(3)
    shift = -beta - n * beta
    return (shift + c2 * y / w + w / (3 * c2),
            shift - (1 - i3) * y / (c4 * w) - (1 + i3) * w / (6 * c2),
            shift - (1 + i3) * y / (c4 * w) - (1 - i3) * w / (6 * c2))


def eigvec_n2(q, n, beta, check=True):
    """Normalized eigenvector of the N = 2 block (photon n) for eigenvalue q.

    The components are stated as square roots of squares; the signs are taken
    from the unsquared expressions so that the three vectors are orthogonal.
    """
    u = q + n * beta
    v = -2 + q * (q + beta) + n * (-2 + beta * (2 * q + beta * (n + 1)))
    norm = 4 + 2 * u ** 2 / (n + 1) + v ** 2 / ((n + 1) * (n + 2))
    vec = np.array([2.0, math.sqrt(2.0 / (n + 1)) * u, v / math.sqrt((n + 1) * (n + 2))])
    vec /= math.sqrt(norm)
    if check:
        a, b = math.sqrt(2 * (n + 1)), math.sqrt(2 * (n + 2))
        K = np.array([[-n * beta, a, 0.0], [a, -(n + 1) * beta, b], [0.0, b, -(n + 2) * beta]])
        resid = np.max(np.abs(K @ vec - q * vec))
        if resid > 1e-8 * max(1.0, abs(q)):
            raise ParameterError(f"q={q} is not an eigenvalue of the N=2 block (residual {resid:.2e})")
    return vec
