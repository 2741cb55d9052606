"""Exact and approximate field dynamics for N two-level molecules in one cavity mode."""

from .core import (ModelParams, NumericalError, ParameterError, TruncationError,
                   cooperation_numbers, degeneracy_weight)
from .distributions import PhotonDensity, coherent, fock, from_spec, thermal
from .dynamics import (ObservableSeries, TLMInitialState, ee_general, make_tlm_state,
                       s1_all_up, s2_all_up, s4_all_down, short_time_rate, stationary_mean)
from .spectral import SpectralCache, eigensystem, verify_block

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "NumericalError", "ParameterError", "TruncationError",
    "cooperation_numbers", "degeneracy_weight", "PhotonDensity", "coherent", "fock",
    "from_spec", "thermal", "ObservableSeries", "TLMInitialState", "ee_general",
    "make_tlm_state", "s1_all_up", "s2_all_up", "s4_all_down", "short_time_rate",
    "stationary_mean", "SpectralCache", "eigensystem", "verify_block",
]
