"""Command-line entry point: run, preset, sweep, validate.

Exit codes: 0 ok, 1 configuration error, 2 numerical or truncation error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import OBSERVABLES, METHODS, RunConfig, load_config
from .core import NumericalError, ParameterError, TruncationError
from .distributions import from_spec
from .dynamics import SCENARIOS, make_tlm_state, stationary_mean
from .presets import PRESETS, build_preset
from .report import Table, csv_text, render, write_csv
from .runner import compute, run_meta

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3


def _add_run_flags(p):
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--observable", choices=OBSERVABLES)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--scenario", help=f"one of {', '.join(SCENARIOS)} or dicke:m")
    p.add_argument("-N", "--N", type=int, dest="N")
    p.add_argument("--distribution", help="fock:n0, coherent:nbar or thermal:nbar")
    det = p.add_mutually_exclusive_group()
    det.add_argument("--beta", type=float)
    det.add_argument("--delta", type=float, help="beta^2/4; sets beta = 2 sqrt(delta)")
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--tail-tol", type=float, dest="tail_tol")
    p.add_argument("--n-trunc", type=int, dest="n_trunc")
    p.add_argument("--corrected", action="store_true", default=None,
                   help="closed method: use the repaired variant where one exists")
    p.add_argument("--threads", type=int)
    p.add_argument("-o", "--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="also render the curve to this .png/.svg path")


def build_parser():
    parser = argparse.ArgumentParser(prog="tcfield", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute one observable time series")
    _add_run_flags(run)

    pre = sub.add_parser("preset", help="reproduce a named figure")
    pre.add_argument("name", choices=PRESETS)
    pre.add_argument("--outdir", default=".", help="directory for CSV and figure files")
    pre.add_argument("--threads", type=int, default=1)
    det = pre.add_mutually_exclusive_group()
    det.add_argument("--beta", type=float, help="open detuning for figB1-figB4")
    det.add_argument("--delta", type=float, help="open detuning for figB1-figB4 (default 25)")
    pre.add_argument("--format", choices=("png", "svg"), default="png")
    pre.add_argument("--no-plot", action="store_true")

    sw = sub.add_parser("sweep", help="grid over N, nbar and detuning")
    sw.add_argument("--N", dest="N_list", default="", help="comma list, e.g. 1,4")
    sw.add_argument("--nbar", default="", help="comma list of mean photon numbers")
    det = sw.add_mutually_exclusive_group()
    det.add_argument("--beta", default=None, help="comma list")
    det.add_argument("--delta", default=None, help="comma list")
    sw.add_argument("--family", choices=("coherent", "thermal", "fock"), default="coherent")
    sw.add_argument("--observable", choices=("s1", "s4", "ee"), default="s1")
    sw.add_argument("--scenario", default=None, help="molecular state for ee")
    sw.add_argument("--statistic", choices=("stationary_mean", "series"), default="stationary_mean")
    sw.add_argument("--tau-max", type=float, default=20.0, dest="tau_max")
    sw.add_argument("--steps", type=int, default=201)
    sw.add_argument("--tail-tol", type=float, default=1e-12, dest="tail_tol")
    sw.add_argument("--threads", type=int, default=1)
    sw.add_argument("-o", "--out", help="CSV path (default stdout)")

    sub.add_parser("validate", help="run the self-check suite")
    return parser


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args):
    keys = ("observable", "method", "scenario", "N", "distribution", "beta", "delta", "tau_max",
            "steps", "tail_tol", "n_trunc", "corrected", "threads", "out", "plot")
    cfg = load_config(args.config, {k: getattr(args, k) for k in keys}).resolved()
    series, density = compute(cfg)
    from .report import series_table
    table = series_table("run", series, run_meta(cfg, density))
    _emit(csv_text(table), cfg.out)
    if cfg.plot:
        render([table], cfg.plot, title=f"{cfg.observable} ({cfg.method}), N={cfg.N}, {cfg.distribution}")
    return EXIT_OK


def cmd_preset(args):
    if args.threads < 1:
        raise ParameterError("threads must be at least 1")
    tables = build_preset(args.name, threads=args.threads, beta=args.beta, delta=args.delta)
    os.makedirs(args.outdir, exist_ok=True)
    for tab in tables:
        path = os.path.join(args.outdir, f"{tab.name}.csv")
        write_csv(tab, path)
        print(path)
    if not args.no_plot:
        fig = os.path.join(args.outdir, f"{args.name}.{args.format}")
        render(tables, fig, title=dict(tables[0].meta).get("figure", args.name))
        print(fig)
    return EXIT_OK


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()] if text else []


def cmd_sweep(args):
    Ns = [int(x) for x in args.N_list.split(",") if x.strip()]
    nbars = _floats(args.nbar)
    if args.delta is not None:
        dets = [2.0 * math.sqrt(d) for d in _floats(args.delta)]
    else:
        dets = _floats(args.beta) if args.beta is not None else [0.0]
    if args.steps < 2 or args.tau_max <= 0 or args.threads < 1:
        raise ParameterError("need steps >= 2, tau_max > 0 and threads >= 1")
    if args.observable == "ee" and not args.scenario:
        raise ParameterError("observable ee needs --scenario")
    points = sorted(itertools.product(Ns, nbars, dets))
    for N, nbar, _ in points:
        if N < 1:
            raise ParameterError(f"N must be positive, got {N}")
        if args.family == "fock" and nbar != int(nbar):
            raise ParameterError(f"fock needs integer photon numbers, got {nbar}")
    taus = np.linspace(0.0, args.tau_max, args.steps)
    scenario = args.scenario or ("all_down" if args.observable == "s4" else "all_up")

    def spec(nbar):
        return f"{args.family}:{int(nbar) if args.family == 'fock' else nbar!r}"

    def point(p):
        N, nbar, beta = p
        cfg = RunConfig(observable=args.observable, scenario=scenario, N=N, distribution=spec(nbar),
                        beta=beta, tau_max=args.tau_max, steps=args.steps,
                        tail_tol=args.tail_tol).resolved()
        if args.statistic == "stationary_mean":
            density = from_spec(cfg.distribution, cfg.tail_tol)
            state = make_tlm_state(scenario, N) if args.observable == "ee" else None
            return [[N, nbar, beta, stationary_mean(args.observable, N, beta, density, state)]]
        series, _ = compute(cfg)
        return [[N, nbar, beta, t, v] for t, v in zip(series.tau, np.real(series.values))]

    if args.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            chunks = list(pool.map(point, points))
    else:
        chunks = [point(p) for p in points]
    cols = ["N", "nbar", "beta"] + (["stationary_mean"] if args.statistic == "stationary_mean"
                                    else ["tau", "value"])
    rows = [row for chunk in chunks for row in chunk]
    data = np.array(rows, dtype=float).reshape(len(rows), len(cols))
    meta = [("sweep", args.statistic), ("observable", args.observable), ("scenario", scenario),
            ("family", args.family), ("tail_tol", args.tail_tol)]
    if args.statistic == "series":
        meta += [("tau_max", args.tau_max), ("steps", args.steps)]
    _emit(csv_text(Table("sweep", cols, data, meta, cols[0])), args.out)
    return EXIT_OK


def cmd_validate(args):
    from .validation import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "preset": cmd_preset, "sweep": cmd_sweep, "validate": cmd_validate}
    try:
        return handlers[args.command](args)
    except ParameterError as exc:
        print(f"tcfield: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TruncationError, NumericalError) as exc:
        print(f"tcfield: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
