"""Atomic-norm signal recovery with the CVaR, L1 and L-infinity norms."""

from cvarkit.recovery.atoms import (
    atom_norm,
    atoms,
    classify_atom,
    contains,
    cvar_norm_high_alpha,
    cvar_norm_low_alpha,
)
from cvarkit.recovery.experiments import (
    SignalKind,
    SignalSpec,
    binary_share,
    expected_gaussian_norm,
    generate_signal,
    l1_bound,
    lambda_bounds,
    measurement_bounds,
    measurement_matrix,
    monotonicity_residual,
    projection_experiment,
    success_probability_bound,
    sweep,
)
from cvarkit.recovery.programs import norm_value, project_hyperplane, recover, recovery_program

__all__ = [
    "SignalKind",
    "SignalSpec",
    "atom_norm",
    "atoms",
    "binary_share",
    "classify_atom",
    "contains",
    "cvar_norm_high_alpha",
    "cvar_norm_low_alpha",
    "expected_gaussian_norm",
    "generate_signal",
    "l1_bound",
    "lambda_bounds",
    "measurement_bounds",
    "measurement_matrix",
    "monotonicity_residual",
    "norm_value",
    "project_hyperplane",
    "recover",
    "recovery_program",
    "success_probability_bound",
    "sweep",
]
