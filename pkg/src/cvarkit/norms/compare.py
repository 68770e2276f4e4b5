"""How close the CVaR norm is to an L_p norm.

For ``kappa = n (1 - alpha)`` and ``1 < p < inf`` every x satisfies
``L <= C_alpha(x) / ||x||_p <= U`` with::

    L = min(1, n^(1 - 1/p) (1 - alpha))
    U = (floor(kappa) + (kappa - floor(kappa))^(p / (p - 1)))^((p - 1) / p)

The ratio ``U / L`` is smallest at ``kappa = n^(1/p)``, which links
alpha and p through ``alpha* = 1 - n^(1/p - 1)`` and its inverse
``p* = ln(n) / ln(n (1 - alpha))``.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from cvarkit.model.norms import ProximityResult
from cvarkit.norms.cvar_norm import cvar_norm, magnitudes, scaled_cvar_norm

P_MIN_EXCESS = 1e-9


class PRule(str, Enum):
    """How p is chosen for a given alpha in a comparison curve."""

    HEURISTIC = "heuristic"  # p = 1 / (1 - alpha)^2
    OPTIMAL = "optimal"  # p = p*(n, alpha)


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return p


def lp_norm(x: ArrayLike, p: float) -> float:
    """``(sum |x_i|^p)^(1/p)``; ``max |x_i|`` for ``p = math.inf``."""
    p = _check_p(p)
    m = magnitudes(x)
    if math.isinf(p):
        return float(m[-1])
    top = m[-1]
    if top == 0.0:
        return 0.0
    return float(top * np.sum((m / top) ** p) ** (1.0 / p))


def scaled_lp_norm(x: ArrayLike, p: float) -> float:
    """``((1/n) sum |x_i|^p)^(1/p)``; ``max |x_i|`` for ``p = math.inf``."""
    p = _check_p(p)
    n = np.asarray(x).size
    if math.isinf(p):
        return lp_norm(x, p)
    return lp_norm(x, p) * n ** (-1.0 / p)


def _check_finite_p(p: float) -> None:
    if not (math.isfinite(p) and p > 1.0 + P_MIN_EXCESS):
        raise ValueError(f"p must be finite and > 1, got {p}")


def _upper(kappa: float, p: float) -> float:
    whole = math.floor(kappa)
    return (whole + (kappa - whole) ** (p / (p - 1.0))) ** ((p - 1.0) / p)


def proximity_bounds(n: int, p: float, alpha: float) -> ProximityResult:
    """Tight bounds on ``C_alpha(x) / ||x||_p`` over all nonzero x in R^n.

    Raises:
        ValueError: If n < 1, p is not in (1, inf) or alpha is outside
            [0, (n - 1) / n].
    """
    if n < 1:
        raise ValueError(f"Dimension must be >= 1, got {n}")
    _check_finite_p(p)
    if not 0.0 <= alpha <= (n - 1) / n + 1e-12:
        raise ValueError(f"alpha must lie in [0, {(n - 1) / n}], got {alpha}")
    kappa = max(n * (1.0 - alpha), 1.0)
    lower = min(1.0, n ** (1.0 - 1.0 / p) * (1.0 - alpha))
    upper = _upper(kappa, p)
    return ProximityResult(lower=lower, upper=upper, ratio=upper / lower, kappa=kappa)


def alpha_star(n: int, p: float) -> float:
    """Alpha at which ``kappa = n^(1/p)`` for the given p."""
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}")
    _check_finite_p(p)
    return 1.0 - n ** (1.0 / p - 1.0)


def p_star(n: int, alpha: float) -> float:
    """Inverse of :func:`alpha_star`: ``ln(n) / ln(n (1 - alpha))``."""
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}")
    if not 0.0 <= alpha < (n - 1) / n:
        raise ValueError(f"alpha must lie in [0, {(n - 1) / n}), got {alpha}")
    return math.log(n) / math.log(n * (1.0 - alpha))


def f_np(n: int, p: float, kappa: float) -> float:
    """Bound ratio ``U / L`` as a function of kappa in (1, n)."""
    _check_finite_p(p)
    if not 1.0 < kappa < n:
        raise ValueError(f"kappa must lie in (1, {n}), got {kappa}")
    lower = min(1.0, kappa * n ** (-1.0 / p))
    return _upper(kappa, p) / lower


def _p_for(rule: PRule, n: int, alpha: float) -> float:
    if rule is PRule.HEURISTIC:
        return math.inf if alpha >= 1.0 else 1.0 / (1.0 - alpha) ** 2
    if n * (1.0 - alpha) <= 1.0:
        return math.inf
    return p_star(n, alpha)


def comparison_curve(
    x: ArrayLike,
    alphas: Iterable[float],
    rule: PRule = PRule.HEURISTIC,
    scaled: bool = False,
) -> pd.DataFrame:
    """CVaR norm next to the L_p norm with p chosen by ``rule``, per alpha.

    Returns:
        Frame with columns ``alpha, c_alpha, lp, p_used``.
    """
    vec = np.asarray(x, dtype=float).ravel()
    n = vec.size
    rule = PRule(rule)
    rows = []
    for alpha in alphas:
        alpha = float(alpha)
        p = _p_for(rule, n, alpha)
        if scaled:
            c_val, lp_val = scaled_cvar_norm(vec, alpha).value, scaled_lp_norm(vec, p)
        else:
            c_val, lp_val = cvar_norm(vec, alpha).value, lp_norm(vec, p)
        rows.append({"alpha": alpha, "c_alpha": c_val, "lp": lp_val, "p_used": p})
    return pd.DataFrame(rows, columns=["alpha", "c_alpha", "lp", "p_used"])


def ratio_at_optimum(n: int, ps: Iterable[float]) -> pd.DataFrame:
    """Smallest bound ratio ``f_np(n, p, n^(1/p))`` per p.

    Returns:
        Frame with columns ``p, f_min``.
    """
    rows = [{"p": float(p), "f_min": f_np(n, p, n ** (1.0 / p))} for p in ps]
    return pd.DataFrame(rows, columns=["p", "f_min"])


def unit_disk(alpha: float, p: float, points: int = 360, scaled: bool = False) -> pd.DataFrame:
    """Boundary of the CVaR and L_p unit balls in R^2 along ``points`` rays.

    Returns:
        Frame with columns ``theta, cvar_x, cvar_y, lp_x, lp_y``.
    """
    if points < 1:
        raise ValueError(f"Need at least one ray, got {points}")
    theta = np.linspace(0.0, 2.0 * np.pi, points, endpoint=False)
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    c_norm = scaled_cvar_norm if scaled else cvar_norm
    l_norm = scaled_lp_norm if scaled else lp_norm
    c_scale = np.array([c_norm(d, alpha).value for d in directions])
    l_scale = np.array([l_norm(d, p) for d in directions])
    return pd.DataFrame(
        {
            "theta": theta,
            "cvar_x": directions[:, 0] / c_scale,
            "cvar_y": directions[:, 1] / c_scale,
            "lp_x": directions[:, 0] / l_scale,
            "lp_y": directions[:, 1] / l_scale,
        }
    )
