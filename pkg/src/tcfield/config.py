"""Run configuration: flat key = value files merged with command-line flags."""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .core import ParameterError

OBSERVABLES = ("s1", "s2", "s4", "ee")
METHODS = ("exact", "afa", "closed")

# keys that never reach the CSV header, so output is byte-identical across them
NON_REPRODUCIBLE_KEYS = ("threads", "out", "plot")


@dataclass(frozen=True)
class RunConfig:
    observable: str = "s1"
    method: str = "exact"
    scenario: str = "all_up"
    N: int = 1
    distribution: str = "coherent:10"
    beta: float | None = None
    delta: float | None = None
    tau_max: float = 20.0
    steps: int = 2001
    tail_tol: float = 1e-12
    n_trunc: int | None = None
    corrected: bool = False
    threads: int = 1
    out: str | None = None
    plot: str | None = None

    def resolved(self):
        """Validated copy with beta set (from delta when needed) and delta cleared."""
        if self.observable not in OBSERVABLES:
            raise ParameterError(f"observable must be one of {OBSERVABLES}, got {self.observable!r}")
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ParameterError(f"N must be a positive integer, got {self.N!r}")
        if self.beta is not None and self.delta is not None:
            raise ParameterError("give beta or delta, not both")
        if self.delta is not None:
            if self.delta < 0:
                raise ParameterError("delta must be non-negative")
            beta = 2.0 * math.sqrt(self.delta)
        else:
            beta = 0.0 if self.beta is None else float(self.beta)
        if self.steps < 2:
            raise ParameterError("steps must be at least 2")
        if not self.tau_max > 0:
            raise ParameterError("tau_max must be positive")
        if self.tail_tol <= 0:
            raise ParameterError("tail_tol must be positive")
        if self.threads < 1:
            raise ParameterError("threads must be at least 1")
        return replace(self, beta=beta, delta=None)

    def taus(self):
        return np.linspace(0.0, self.tau_max, self.steps)

    def header_items(self):
        """(key, value) pairs echoed into CSV headers."""
        return [(k, v) for k, v in asdict(self).items()
                if k not in NON_REPRODUCIBLE_KEYS and k != "delta"]


_CASTS = {f.name: f.type for f in fields(RunConfig)}


def _cast(key, raw):
    kind = _CASTS[key]
    raw = raw.strip()
    if "None" in kind and raw.lower() in ("", "none"):
        return None
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
        if kind == "bool":
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError as exc:
        raise ParameterError(f"bad value for {key}: {raw!r}") from exc
    return raw


def parse_config_text(text):
    """Parse ``key = value`` lines (``#`` comments allowed) into a dict of typed values."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ParameterError(f"cannot parse config: {exc}") from exc
    out = {}
    for key, raw in parser["run"].items():
        if key not in _CASTS:
            raise ParameterError(f"unknown config key {key!r}")
        out[key] = _cast(key, raw)
    return out


def load_config(path=None, overrides=None):
    """Build a RunConfig from an optional file, then apply non-None overrides (flags win)."""
    values = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from exc
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    # a flag for one of beta/delta replaces the other from the file
    if overrides and overrides.get("beta") is not None:
        values.pop("delta", None)
    if overrides and overrides.get("delta") is not None:
        values.pop("beta", None)
    return RunConfig(**values)
