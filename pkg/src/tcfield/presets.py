"""Named figure reproductions.  Each preset returns a list of Tables."""

from __future__ import annotations

import math

import numpy as np

from .afa import coefficient_sum_predictions, coefficient_sums, q_difference_table
from .config import RunConfig
from .core import ParameterError
from .report import Table
from .runner import run_table

# detuning used for the non-resonant curves when a preset leaves it open
DEFAULT_OPEN_DELTA = 25.0

DESCRIPTIONS = {
    "fig1": "S1, N=4, coherent nbar=100; resonant and Delta=25; exact vs AFA",
    "fig2": "S1, N=4, thermal nbar=30, Delta=100; exact vs AFA",
    "figE1": "spontaneous emission S1, N=50 all up, empty field, resonant",
    "figE2": "spontaneous emission <E-E+>, N=50 half up, empty field, resonant",
    "figF1": "N=10, {fock:4, coherent:4} x {all up S1, all down S4}",
    "figB1": "same-block q differences q_j - q_(j+k), N=4, k=1..4",
    "figB2": "adjacent-block q differences q(c)_j - q(c+1)_(j+k) - beta, N=4, k=1..4",
    "figB3": "S1 coefficient sums by j gap, N=4, with the AFA k=1 value",
    "figB4": "S2 coefficient sums for j'=j and j'=j+-1, N=10, beta=10, with AFA values",
    "collapse_revival": "S1, N=1, coherent nbar=100, resonant, collapse and revival",
}
PRESETS = tuple(DESCRIPTIONS)


def _open_beta(beta, delta):
    if beta is not None and delta is not None:
        raise ParameterError("give beta or delta, not both")
    if beta is not None:
        return float(beta)
    return 2.0 * math.sqrt(DEFAULT_OPEN_DELTA if delta is None else delta)


def _label(name, extra=""):
    return f"{name}: {DESCRIPTIONS[name]}{extra}"


def _curves(name, specs, threads, cache):
    out = []
    for suffix, cfg in specs:
        cfg = RunConfig(threads=threads, **cfg).resolved()
        out.append(run_table(cfg, f"{name}_{suffix}", _label(name), cache))
    for tab in out:
        tab.title = tab.name
    return out


def _fig1(threads, beta, delta, cache):
    base = dict(N=4, distribution="coherent:100", observable="s1", tau_max=80.0, steps=8001)
    specs = []
    for tag, det in (("resonant", dict(beta=0.0)), ("delta25", dict(delta=25.0))):
        for method in ("exact", "afa"):
            specs.append((f"{tag}_{method}", dict(base, method=method, **det)))
    return _curves("fig1", specs, threads, cache)


def _fig2(threads, beta, delta, cache):
    base = dict(N=4, distribution="thermal:30", observable="s1", delta=100.0,
                tau_max=40.0, steps=4001)
    specs = [(m, dict(base, method=m)) for m in ("exact", "afa")]
    return _curves("fig2", specs, threads, cache)


def _figE1(threads, beta, delta, cache):
    spec = dict(N=50, distribution="fock:0", observable="s1", beta=0.0, tau_max=10.0, steps=2001)
    return _curves("figE1", [("all_up", spec)], threads, cache)


def _figE2(threads, beta, delta, cache):
    spec = dict(N=50, distribution="fock:0", observable="ee", scenario="half_up", beta=0.0,
                tau_max=20.0, steps=4001)
    return _curves("figE2", [("half_up", spec)], threads, cache)


def _figF1(threads, beta, delta, cache):
    specs = []
    for dist in ("fock:4", "coherent:4"):
        for obs, scen in (("s1", "all_up"), ("s4", "all_down")):
            tag = f"{dist.replace(':', '')}_{scen}"
            specs.append((tag, dict(N=10, distribution=dist, observable=obs, scenario=scen,
                                    beta=0.0, tau_max=20.0, steps=2001)))
    return _curves("figF1", specs, threads, cache)


_B_NS = np.arange(0, 201)


def _q_tables(name, attr, threads, beta, delta, cache):
    tables = []
    b_open = _open_beta(beta, delta)
    for tag, b in (("resonant", 0.0), ("detuned", b_open)):
        cols, data = ["n"], [_B_NS.astype(float)]
        for k in range(1, 5):
            tab = q_difference_table(4, b, _B_NS, k, cache)
            vals = getattr(tab, attr)
            for i in range(vals.shape[1]):
                cols.append(f"k{k}_j{i}")
                data.append(vals[:, i])
        meta = [("figure", _label(name)), ("N", 4), ("beta", b), ("delta", b * b / 4)]
        tables.append(Table(f"{name}_{tag}", cols, np.column_stack(data), meta, "n",
                            f"{name}_{tag} (beta={b:.6g})"))
    return tables


def _figB1(threads, beta, delta, cache):
    return _q_tables("figB1", "same", threads, beta, delta, cache)


def _figB2(threads, beta, delta, cache):
    return _q_tables("figB2", "adjacent", threads, beta, delta, cache)


def _figB3(threads, beta, delta, cache):
    tables = []
    b_open = _open_beta(beta, delta)
    ns = np.arange(0, 501)
    for tag, b in (("resonant", 0.0), ("detuned", b_open)):
        rows = []
        for n in ns:
            sums = [coefficient_sums(4, b, int(n), k, cache)[0] for k in range(5)]
            rows.append([n] + sums + [coefficient_sum_predictions(4, b, int(n))[0]])
        cols = ["n"] + [f"k{k}" for k in range(5)] + ["afa_k1"]
        meta = [("figure", _label("figB3")), ("N", 4), ("beta", b), ("delta", b * b / 4)]
        tables.append(Table(f"figB3_{tag}", cols, np.array(rows, dtype=float), meta, "n",
                            f"figB3_{tag} (beta={b:.6g})"))
    return tables


def _figB4(threads, beta, delta, cache):
    b = 10.0 if beta is None and delta is None else _open_beta(beta, delta)
    rows = []
    for n in np.arange(0, 2001, 5):
        n = int(n)
        k0 = coefficient_sums(10, b, n, 0, cache)[1]
        kpm = coefficient_sums(10, b, n, 1, cache)[1] + coefficient_sums(10, b, n, -1, cache)[1]
        _, p0, ppm = coefficient_sum_predictions(10, b, n)
        rows.append([n, k0, p0, kpm, ppm])
    meta = [("figure", _label("figB4")), ("N", 10), ("beta", b), ("delta", b * b / 4)]
    data = np.array(rows, dtype=float)
    return [Table("figB4_same_j", ["n", "exact", "afa"], data[:, :3], meta, "n", "figB4 j'=j"),
            Table("figB4_adjacent_j", ["n", "exact", "afa"], data[:, [0, 3, 4]], meta, "n",
                  "figB4 j'=j+-1")]


def _collapse_revival(threads, beta, delta, cache):
    spec = dict(N=1, distribution="coherent:100", observable="s1", beta=0.0,
                tau_max=100.0, steps=5001)
    return _curves("collapse_revival", [("exact", spec)], threads, cache)


_BUILDERS = {
    "fig1": _fig1, "fig2": _fig2, "figE1": _figE1, "figE2": _figE2, "figF1": _figF1,
    "figB1": _figB1, "figB2": _figB2, "figB3": _figB3, "figB4": _figB4,
    "collapse_revival": _collapse_revival,
}


def build_preset(name, threads=1, beta=None, delta=None, cache=None):
    """Tables for preset ``name``.  beta/delta set the open detuning of figB1-figB4."""
    if name not in _BUILDERS:
        raise ParameterError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return _BUILDERS[name](threads, beta, delta, cache)
