"""Radial Emden-Fowler solutions on hyperbolic space."""

from ._core import (
    ClosedForm,
    Event,
    HyperemError,
    Params,
    Report,
    SeparatrixResult,
    Trajectory,
    c_np,
    classify,
    classify_regime,
    critical_exponent,
    exact_ground_state,
    find_R_np,
    find_separatrix,
    first_zero_map,
    integrate,
    lambda_pair,
    phi_n,
    psi_p,
    run_acceptance,
    spectral_gap,
)

__all__ = [
    "ClosedForm",
    "Event",
    "HyperemError",
    "Params",
    "Report",
    "SeparatrixResult",
    "Trajectory",
    "c_np",
    "classify",
    "classify_regime",
    "critical_exponent",
    "exact_ground_state",
    "find_R_np",
    "find_separatrix",
    "first_zero_map",
    "integrate",
    "lambda_pair",
    "phi_n",
    "psi_p",
    "run_acceptance",
    "spectral_gap",
]
