"""Dispatch a resolved RunConfig to the exact engine, the AFA or a closed form."""

from __future__ import annotations

from . import afa, closedforms, dynamics
from .closedforms import ClosedFormId
from .core import ParameterError
from .distributions import from_spec
from .report import series_table

_NEEDS_SCENARIO = {"s1": "all_up", "s2": "all_up", "s4": "all_down"}


def closed_form_for(cfg):
    """Closed form matching (observable, N, scenario, beta)."""
    obs, N, resonant = cfg.observable, cfg.N, cfg.beta == 0
    table = {
        ("s1", 1): ClosedFormId.s1_n1 if resonant else ClosedFormId.s1_n1_nr,
        ("s2", 1): ClosedFormId.s2_n1 if resonant else ClosedFormId.s2_n1_nr,
        ("s1", 2): ClosedFormId.s1_n2, ("s2", 2): ClosedFormId.s2_n2,
        ("s1", 3): ClosedFormId.s1_n3, ("s2", 3): ClosedFormId.s2_n3,
        ("s1", 4): ClosedFormId.s1_n4,
        ("s4", 1): ClosedFormId.s4_n1_nr, ("s4", 2): ClosedFormId.s4_n2,
    }
    if obs == "ee":
        by_scenario = {"one_up_specified": ClosedFormId.one_up,
                       "one_up_dicke": ClosedFormId.one_up_dicke,
                       "two_up_specified": ClosedFormId.two_up}
        if cfg.scenario not in by_scenario:
            raise ParameterError(f"no closed form for ee with scenario {cfg.scenario!r}")
        return by_scenario[cfg.scenario]
    if (obs, N) not in table:
        raise ParameterError(f"no closed form for {obs} with N={N}")
    return table[(obs, N)]


def _check_scenario(cfg):
    want = _NEEDS_SCENARIO.get(cfg.observable)
    if want and cfg.scenario != want:
        raise ParameterError(f"{cfg.observable} is defined for scenario {want}, not {cfg.scenario}")


def compute(cfg, cache=None):
    """Return (series, density) for a resolved config."""
    density = from_spec(cfg.distribution, cfg.tail_tol, cfg.n_trunc)
    taus = cfg.taus()
    _check_scenario(cfg)
    obs = cfg.observable
    if cfg.method == "exact":
        if obs == "s1":
            s = dynamics.s1_all_up(cfg.N, cfg.beta, density, taus, cache, cfg.threads)
        elif obs == "s2":
            s = dynamics.s2_all_up(cfg.N, cfg.beta, density, taus, cache, cfg.threads)
        elif obs == "s4":
            s = dynamics.s4_all_down(cfg.N, cfg.beta, density, taus, cache, cfg.threads)
        else:
            state = dynamics.make_tlm_state(cfg.scenario, cfg.N)
            s = dynamics.ee_general(cfg.N, cfg.beta, density, state, taus, cache, cfg.threads)
    elif cfg.method == "afa":
        if obs == "s1":
            s = afa.s1_afa(cfg.N, cfg.beta, density, taus)
        elif obs == "s2":
            s = afa.s2_afa(cfg.N, cfg.beta, density, taus)
        else:
            raise ParameterError("the AFA covers s1 and s2 only")
    else:
        form = closed_form_for(cfg)
        s = closedforms.eval_closed(form, density, cfg.beta, taus, N=cfg.N,
                                    corrected=cfg.corrected)
    return s, density


def run_meta(cfg, density, figure=None):
    meta = []
    if figure:
        meta.append(("figure", figure))
    meta += cfg.header_items()
    meta += [("n_trunc_used", density.n_trunc), ("tail_mass", float(density.tail_mass))]
    return meta


def run_table(cfg, name="run", figure=None, cache=None):
    series, density = compute(cfg, cache)
    return series_table(name, series, run_meta(cfg, density, figure), title=figure or name)
