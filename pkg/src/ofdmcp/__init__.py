"""Closed-form ICI/ISI channel coefficients and SINR for OFDM with an
insufficient cyclic prefix, with direct-sum and link-simulation oracles."""

from ._backend import BACKEND
from .analysis import (
    AsainrTerms,
    SinrReport,
    asainr,
    asainr_fullband,
    asainr_terms,
    sinr_causal,
    sinr_general,
)
from .coefficients import (
    CoeffSet,
    build_coeff_set,
    h_0ii,
    h_0li,
    h_bli_direct,
    h_dft,
    h_isi,
)
from .core import Cir, OfdmGrid, Pdp, SnrSpec, SupportError, rect_window
from .linksim import (
    Constellation,
    EmpiricalReport,
    SimConfig,
    demodulate,
    measure_coefficients,
    modulate,
    monte_carlo_sinr,
    transmit,
)
from .weights import a_weight, c_weight, ctilde_weight

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AsainrTerms", "SinrReport", "asainr", "asainr_fullband",
    "asainr_terms", "sinr_causal", "sinr_general", "CoeffSet", "build_coeff_set",
    "h_0ii", "h_0li", "h_bli_direct", "h_dft", "h_isi", "Cir", "OfdmGrid", "Pdp",
    "SnrSpec", "SupportError", "rect_window", "Constellation", "EmpiricalReport",
    "SimConfig", "demodulate", "measure_coefficients", "modulate",
    "monte_carlo_sinr", "transmit", "a_weight", "c_weight", "ctilde_weight",
]
