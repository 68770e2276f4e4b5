"""CVaR norms, their L_p comparison and timing benchmark."""

from cvarkit.norms.benchmark import benchmark_norms, speed_ratio
from cvarkit.norms.compare import (
    PRule,
    alpha_star,
    comparison_curve,
    f_np,
    lp_norm,
    p_star,
    proximity_bounds,
    ratio_at_optimum,
    scaled_lp_norm,
    unit_disk,
)
from cvarkit.norms.cvar_norm import (
    Algorithm,
    alpha_bracket,
    alpha_grid,
    cvar_norm,
    cvar_norm_candidates,
    cvar_norm_knapsack,
    cvar_norm_lp,
    d_norm,
    evaluate,
    knapsack_weights,
    scaled_cvar_norm,
    scaled_cvar_norm_candidates,
    scaled_cvar_norm_lp,
)

__all__ = [
    "Algorithm",
    "PRule",
    "alpha_bracket",
    "alpha_grid",
    "alpha_star",
    "benchmark_norms",
    "comparison_curve",
    "cvar_norm",
    "cvar_norm_candidates",
    "cvar_norm_knapsack",
    "cvar_norm_lp",
    "d_norm",
    "evaluate",
    "f_np",
    "knapsack_weights",
    "lp_norm",
    "p_star",
    "proximity_bounds",
    "ratio_at_optimum",
    "scaled_cvar_norm",
    "scaled_cvar_norm_candidates",
    "scaled_cvar_norm_lp",
    "scaled_lp_norm",
    "speed_ratio",
    "unit_disk",
]
