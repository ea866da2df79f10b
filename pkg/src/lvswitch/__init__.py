"""Two-species Lotka-Volterra competition under random switching between two environments.

Closed-form invasion rates, critical switching curves, regime maps, and an
independent Monte Carlo simulator of the switched process.
"""

from .coords import JumpRates, STCoords, UVCoords, rates_to_uv, uv_to_rates, xi
from .curves import CriticalCurve, ExtendedV, InternalContract, critical_v, curve_grid, shape_summary
from .envmodel import EnvPair, EnvType, Environment, classify, mix, swap_species, vector_field
from .invasion import (
    DegenerateLogistic,
    expected_phi,
    lambda_x,
    lambda_y,
    limit_v_inf,
    limit_v_zero,
    phi,
    poly_P,
    threshold_analysis,
)
from .regimes import Regime, catalog, classify_regime, four_regime_search, load_pair, regime_map
from .sim import SimConfig, detect_regime, estimate_lambda, simulate_pdmp, simulate_switched_logistic

__all__ = [
    "CriticalCurve",
    "DegenerateLogistic",
    "EnvPair",
    "EnvType",
    "Environment",
    "ExtendedV",
    "InternalContract",
    "JumpRates",
    "Regime",
    "STCoords",
    "SimConfig",
    "UVCoords",
    "catalog",
    "classify",
    "classify_regime",
    "critical_v",
    "curve_grid",
    "detect_regime",
    "estimate_lambda",
    "expected_phi",
    "four_regime_search",
    "lambda_x",
    "lambda_y",
    "limit_v_inf",
    "limit_v_zero",
    "load_pair",
    "mix",
    "phi",
    "poly_P",
    "rates_to_uv",
    "regime_map",
    "shape_summary",
    "simulate_pdmp",
    "simulate_switched_logistic",
    "swap_species",
    "threshold_analysis",
    "uv_to_rates",
    "vector_field",
    "xi",
]

__version__ = "0.1.0"
