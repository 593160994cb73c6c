"""Grushin spectral projection numerics."""

import json

from ._core import (
    AdmissibilityError,
    DomainError,
    Error,
    GridMismatch,
    QuadratureError,
    ResolutionError,
    admissibility_violation,
    fit_scaling_exponent,
    hermite,
    l1_bound_integral,
    laguerre_normalized,
    predicted_exponent,
    projection_kernel,
    scenario_ids,
)
from ._core import run_scenario as _run_scenario


def run_scenario(id, **kwargs):
    """Runs a verification scenario and returns (report dict, pass)."""
    text, ok = _run_scenario(id, **kwargs)
    return json.loads(text), ok


__all__ = [
    "AdmissibilityError",
    "DomainError",
    "Error",
    "GridMismatch",
    "QuadratureError",
    "ResolutionError",
    "admissibility_violation",
    "fit_scaling_exponent",
    "hermite",
    "l1_bound_integral",
    "laguerre_normalized",
    "predicted_exponent",
    "projection_kernel",
    "run_scenario",
    "scenario_ids",
]
