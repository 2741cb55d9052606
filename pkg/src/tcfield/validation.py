"""Self-check suite behind ``tcfield validate``.

Each check compares the engine with an independent reference and reports
the residual against its tolerance.  Where a stated closed form or rate is
known to be wrong, the check uses the repaired reference and the deviation
of the stated form is attached as an informational note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import afa, closedforms, dynamics
from .closedforms import ClosedFormId, eval_closed
from .core import cooperation_numbers
from .distributions import coherent, fock
from .spectral import SpectralCache, verify_block


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    residual: float
    tol: float
    note: str = ""

    @property
    def passed(self):
        return bool(self.residual <= self.tol)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        text = f"{flag}  {self.group:<12} {self.name:<44} resid={self.residual:.3e}  tol={self.tol:.1e}"
        return text + (f"  [{self.note}]" if self.note else "")


def _maxdiff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def spectral_checks(cache, n_max=200, N_max=10):
    worst = dict(ortho=0.0, resid=0.0, sym=0.0, parity=0.0)
    for N in range(1, N_max + 1):
        for r in cooperation_numbers(N):
            for n in range(0, n_max + 1, 1 if N <= 4 else 7):
                es = cache.get(r, n + r, 0.0)
                d = verify_block(es)
                worst["ortho"] = max(worst["ortho"], d.orthonormality)
                worst["resid"] = max(worst["resid"], d.eigen_residual / max(1.0, np.max(np.abs(es.q))))
                worst["sym"] = max(worst["sym"], d.symmetry)
                worst["parity"] = max(worst["parity"], d.parity)
            es = cache.get(r, r + 3, 2.5)
            d = verify_block(es)
            worst["ortho"] = max(worst["ortho"], d.orthonormality)
    return [Check("spectral", "orthonormality (N<=10, n<=200)", worst["ortho"], 1e-10),
            Check("spectral", "relative eigen-residual", worst["resid"], 1e-10),
            Check("spectral", "resonant symmetry q_j = -q_(d-1-j)", worst["sym"], 1e-10),
            Check("spectral", "resonant eigenvector parity", worst["parity"], 1e-10)]


_ENGINE = {
    "s1": lambda N, b, d, t, c: dynamics.s1_all_up(N, b, d, t, c),
    "s2": lambda N, b, d, t, c: dynamics.s2_all_up(N, b, d, t, c),
    "s4": lambda N, b, d, t, c: dynamics.s4_all_down(N, b, d, t, c),
}

_RESONANT_CASES = [
    (ClosedFormId.s1_n1, 1), (ClosedFormId.s1_n2, 2), (ClosedFormId.s1_n3, 3),
    (ClosedFormId.s1_n4, 4), (ClosedFormId.s2_n1, 1), (ClosedFormId.s2_n2, 2),
    (ClosedFormId.s2_n3, 3), (ClosedFormId.s4_n2, 2),
]
_DETUNED_CASES = [(ClosedFormId.s1_n1_nr, 1), (ClosedFormId.s2_n1_nr, 1),
                  (ClosedFormId.s4_n1_nr, 1)]
DEFECTIVE = {ClosedFormId.s2_n2, ClosedFormId.s2_n3, ClosedFormId.s1_n4,
             ClosedFormId.s2_n1_nr, ClosedFormId.two_up}


def closed_form_checks(cache):
    t = np.linspace(0.0, 20.0, 2001)
    dens = [fock(0), fock(1), fock(5), fock(20), coherent(10)]
    out = []
    cases = [(f, N, 0.0) for f, N in _RESONANT_CASES]
    cases += [(f, N, 2 * math.sqrt(d)) for f, N in _DETUNED_CASES for d in (1.0, 25.0)]
    for form, N, beta in cases:
        kind = closedforms.KIND[form]
        worst = stated = 0.0
        for d in dens:
            eng = _ENGINE[kind](N, beta, d, t, cache).values
            fixed = form in DEFECTIVE
            worst = max(worst, _maxdiff(eval_closed(form, d, beta, t, corrected=fixed).values, eng))
            if fixed:
                stated = max(stated, _maxdiff(eval_closed(form, d, beta, t).values, eng))
        note = f"stated form deviates by {stated:.3e}; repaired form checked" if form in DEFECTIVE else ""
        out.append(Check("closed", f"{form.value} N={N} beta={beta:g}", worst, 1e-8, note))
    for form, N in [(ClosedFormId.spont_n1, 1), (ClosedFormId.spont_n2, 2),
                    (ClosedFormId.spont_n3, 3)]:
        eng = dynamics.s1_all_up(N, 0.0, fock(0), t, cache).values
        out.append(Check("closed", f"{form.value}", _maxdiff(eval_closed(form, fock(0), 0.0, t).values, eng), 1e-8))
    return out


def d_form_checks(cache):
    worst_q = worst_v = 0.0
    for n in (0, 1, 5, 20):
        for beta in (0.0, 0.7, 3.0):
            es = cache.get(1, n + 1, beta)
            roots = closedforms.q_cubic_n2(n, beta, convention="block")
            worst_q = max(worst_q, _maxdiff(sorted(roots, reverse=True), es.q))
            V = np.array([closedforms.eigvec_n2(q, n, beta) for q in roots]).T
            worst_v = max(worst_v, _maxdiff(V.T @ V, np.eye(3)))
    stated = _maxdiff(closedforms.q_cubic_n2(5, 0.0), cache.get(1, 6, 0.0).q)
    return [Check("cubic", "N=2 cubic roots vs block spectrum", worst_q, 1e-10,
                  f"stated y=6+2n+beta^2 deviates by {stated:.3e} at n=5"),
            Check("cubic", "N=2 eigenvectors orthonormal", worst_v, 1e-10)]


def afa_checks(cache):
    ortho = b5 = 0.0
    for N in range(1, 11):
        p = np.arange(N + 1)
        for bb in (0.0, 1.0, 10.0):
            A = afa.afa_matrix(N, bb)
            ortho = max(ortho, _maxdiff(A.T @ A, np.eye(N + 1)))
            for j in range(N):
                lhs = float(np.sum(p * A[:, j] * A[:, j + 1]))
                rhs = -math.sqrt((j + 1) * (N - j)) / (2 * math.sqrt(1 + bb * bb / 4))
                b5 = max(b5, abs(lhs - rhs))
    es = cache.get(Fraction(2), 1000 + 2, 0.0)
    A = afa.afa_matrix(4, 0.0)
    vec = max(min(_maxdiff(es.A[:, j], A[:, j]), _maxdiff(es.A[:, j], -A[:, j])) for j in range(5))
    # AFA S1 against exact: bounded by the ladder phase slip over the window
    n, N, tau_max = 10 ** 4, 4, 10.0
    t = np.linspace(0.0, tau_max, 2001)
    d = fock(n)
    gap = _maxdiff(afa.s1_afa(N, 0.0, d, t).values, dynamics.s1_all_up(N, 0.0, d, t, cache).values)
    slip = afa.q_difference_table(N, 0.0, [n], 1, cache)
    dw = float(np.max(np.abs(slip.same[0] - slip.ladder[0]))) / 2
    bound = N * math.sin(min(dw * tau_max, math.pi / 2)) + 1e-3
    s1k1 = abs(afa.coefficient_sums(4, 0.0, 10 ** 4, 1, cache)[0] + 1.0)
    coefficient_gap = max(abs(afa.coefficient_sums(4, 0.0, 10 ** 4, k, cache)[0]) for k in (2, 3, 4))
    return [Check("afa", "eigenvector orthonormality N<=10", ortho, 1e-10),
            Check("afa", "sum_p p A_j A_(j+1) identity", b5, 1e-10),
            Check("afa", "eigenvectors vs exact, N=4 n=1000", vec, 1e-2),
            Check("afa", "S1 vs exact, N=4 fock(1e4), tau<=10", gap, bound,
                  f"tol from ladder slip {dw:.2e}; fixed bound 0.02N={0.02 * N:.2f}"),
            Check("afa", "k=1 coefficient sum vs -N/4, n=1e4", s1k1, 1e-3),
            Check("afa", "k>=2 coefficient sums vs 0, n=1e4", coefficient_gap, 1e-3)]


def short_time_checks(cache):
    N = 50
    t = np.array([0.0, 5e-4, 1e-3])
    up = dynamics.short_time_rate(dynamics.s1_all_up(N, 0.0, fock(0), t, cache))
    half = dynamics.make_tlm_state("half_up", N)
    rate = dynamics.short_time_rate(dynamics.ee_general(N, 0.0, fock(0), half, t, cache))
    r, m = N / 2, 0
    dicke = (r + m) * (r - m + 1)
    tt = np.linspace(0.0, 20.0, 2001)
    one = dynamics.ee_general(16, 0.0, fock(0), dynamics.make_tlm_state("one_up_specified", 16), tt, cache)
    oned = dynamics.ee_general(16, 0.0, fock(0), dynamics.make_tlm_state("one_up_dicke", 16), tt, cache)
    return [Check("short-time", "all up N=50 rate vs N", abs(up - N) / N, 1e-3, f"rate={up:.6g}"),
            Check("short-time", "half up N=50 rate vs r(r+1)", abs(rate - dicke) / dicke, 1e-3,
                  f"rate={rate:.6g}; (N/2)^2={(N / 2) ** 2:g} deviates by {abs(rate - (N / 2) ** 2) / (N / 2) ** 2:.2%}"),
            Check("short-time", "one up (specified) N=16",
                  _maxdiff(one.values, eval_closed("one_up", fock(0), 0.0, tt, N=16).values), 1e-12),
            Check("short-time", "one up (Dicke) N=16",
                  _maxdiff(oned.values, eval_closed("one_up_dicke", fock(0), 0.0, tt, N=16).values), 1e-12)]


def two_up_checks(cache):
    t = np.linspace(0.0, 20.0, 2001)
    out = []
    for N in (3, 8, 20):
        eng = dynamics.ee_general(N, 0.0, fock(0), dynamics.make_tlm_state("two_up_specified", N), t, cache)
        fixed = _maxdiff(eng.values, eval_closed("two_up", fock(0), 0.0, t, N=N, corrected=True).values)
        stated = _maxdiff(eng.values, eval_closed("two_up", fock(0), 0.0, t, N=N).values)
        out.append(Check("two-up", f"two up N={N}", fixed, 1e-8,
                         f"stated sqrt(N-1) frequency deviates by {stated:.3e}"))
    return out


def stationary_checks(cache):
    out = []
    for nbar, target in ((1, 1.66), (4, 1.84), (10, 1.93), (100, 2.00)):
        m = dynamics.stationary_mean("s1", 4, 0.0, coherent(nbar), cache=cache)
        out.append(Check("stationary", f"N=4 coherent nbar={nbar} -> {target}", abs(m - target), 0.02,
                         f"mean={m:.4f}"))
    return out


def invariance_checks():
    """Flipping eigenvector signs in the cache must not change any observable."""
    t = np.linspace(0.0, 10.0, 401)
    d = coherent(4)
    base = SpectralCache()
    flipped = SpectralCache()
    N = 3
    r = Fraction(N, 2)
    for n in range(d.diag.size + 1):
        for c in (n + r, n + r + 1, n - r):
            if c < -r:
                continue
            es = base.get(r, c, 0.4)
            for j in range(0, es.dim, 2):
                es = es.with_column_sign(j)
            flipped.put(es)
    state = dynamics.make_tlm_state("all_down", N)
    worst = 0.0
    for fn in (dynamics.s1_all_up, dynamics.s2_all_up, dynamics.s4_all_down):
        worst = max(worst, _maxdiff(fn(N, 0.4, d, t, base).values, fn(N, 0.4, d, t, flipped).values))
    worst = max(worst, _maxdiff(dynamics.ee_general(N, 0.4, d, state, t, base).values,
                                dynamics.ee_general(N, 0.4, d, state, t, flipped).values))
    return [Check("invariance", "eigenvector sign flips", worst, 1e-12)]


def resonance_checks(cache):
    t = np.linspace(0.0, 20.0, 2001)
    im = 0.0
    for N in (1, 2, 3, 4, 6):
        im = max(im, float(np.max(np.abs(dynamics.s2_all_up(N, 0.0, coherent(10), t, cache).values.imag))))
    from .distributions import thermal
    th = float(np.max(np.abs(dynamics.s2_all_up(4, 0.0, thermal(5), t, cache).values)))
    return [Check("resonance", "Im S2 at beta=0", im, 1e-10),
            Check("resonance", "thermal S2 identically 0", th, 0.0)]


def run_all():
    cache = SpectralCache()
    checks = []
    for fn in (spectral_checks, closed_form_checks, d_form_checks, afa_checks,
               short_time_checks, two_up_checks, stationary_checks, resonance_checks):
        checks += fn(cache)
    checks += invariance_checks()
    return checks
