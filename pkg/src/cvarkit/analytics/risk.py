"""Univariate VaR / CVaR on discrete loss distributions."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from cvarkit.model.distributions import PROB_TOL, DiscreteLoss, RiskReport, TailDecomposition

logger = logging.getLogger(__name__)

QuantileFunction = Callable[[float], float]


def _check_alpha(alpha: float, allow_zero: bool = True) -> None:
    low_ok = alpha >= 0.0 if allow_zero else alpha > 0.0
    if not (low_ok and alpha < 1.0):
        bracket = "[0, 1)" if allow_zero else "(0, 1)"
        raise ValueError(f"alpha must lie in {bracket}, got {alpha}")


def _var_index(d: DiscreteLoss, alpha: float) -> tuple[int, float]:
    """Index of VaR_alpha among the sorted outcomes and Psi = P(X <= VaR)."""
    cum = np.cumsum(d.weights)
    idx = int(np.searchsorted(cum, alpha - PROB_TOL, side="left"))
    idx = min(idx, cum.size - 1)
    return idx, float(min(cum[idx], 1.0))


def var_at(d: DiscreteLoss, alpha: float) -> float:
    """VaR_alpha = min{c : P(X <= c) >= alpha} for 0 < alpha < 1."""
    _check_alpha(alpha, allow_zero=False)
    idx, _ = _var_index(d, alpha)
    return d.outcomes[idx]


def cvar_plus(d: DiscreteLoss, alpha: float) -> float:
    """E[X | X > VaR_alpha].

    Raises:
        ValueError: If VaR is the largest outcome (no strict tail).
    """
    _check_alpha(alpha)
    idx, _ = _var_index(d, alpha)
    values, weights = d.values[idx + 1 :], d.weights[idx + 1 :]
    mass = weights.sum()
    if values.size == 0 or mass <= 0.0:
        raise ValueError("no strict tail: VaR is the largest outcome")
    return float(weights @ values / mass)


def cvar_convex_combination(
    d: DiscreteLoss, alpha: float, upper_limit: bool = False
) -> TailDecomposition:
    """CVaR_alpha = lam * VaR + (1 - lam) * CVaR+ with lam = (Psi - alpha) / (1 - alpha).

    Args:
        d: Loss distribution.
        alpha: Confidence level in [0, 1).
        upper_limit: Return the alpha -> 1 limit instead (the largest outcome).
    """
    if upper_limit:
        top = d.outcomes[-1]
        return TailDecomposition(var=top, cvar_plus=top, lam=1.0, cvar=top)
    _check_alpha(alpha)
    idx, psi = _var_index(d, alpha)
    var = d.outcomes[idx]
    # Outcomes above VaR may all carry zero probability.
    if d.weights[idx + 1 :].sum() <= 0.0:
        return TailDecomposition(var=var, cvar_plus=var, lam=1.0, cvar=var)
    lam = float(np.clip((psi - alpha) / (1.0 - alpha), 0.0, 1.0))
    plus = cvar_plus(d, alpha)
    return TailDecomposition(
        var=var, cvar_plus=plus, lam=lam, cvar=lam * var + (1.0 - lam) * plus
    )


def phi(d: DiscreteLoss, c: float, alpha: float) -> float:
    """c + E[(X - c)+] / (1 - alpha)."""
    _check_alpha(alpha)
    if not np.isfinite(c):
        raise ValueError(f"c must be finite, got {c}")
    excess = np.maximum(d.values - c, 0.0)
    return float(c + d.weights @ excess / (1.0 - alpha))


def _phi_at_outcomes(d: DiscreteLoss, alpha: float) -> np.ndarray:
    v, p = d.values, d.weights
    # Mass and first moment strictly above each outcome.
    mass_above = np.concatenate([np.cumsum(p[::-1])[::-1][1:], [0.0]])
    moment_above = np.concatenate([np.cumsum((p * v)[::-1])[::-1][1:], [0.0]])
    return v + (moment_above - v * mass_above) / (1.0 - alpha)


def cvar_via_phi(d: DiscreteLoss, alpha: float) -> TailDecomposition:
    """Minimize phi over the outcomes, where all its kinks lie.

    The smallest minimizer is VaR and the minimum is CVaR.
    """
    _check_alpha(alpha)
    values = _phi_at_outcomes(d, alpha)
    best = values.min()
    idx = int(np.flatnonzero(values <= best + 1e-12 * max(1.0, abs(best)))[0])
    c_star = d.outcomes[idx]
    psi = float(min(np.cumsum(d.weights)[idx], 1.0))
    tail_w = d.weights[idx + 1 :]
    if tail_w.sum() > 0.0:
        plus = float(tail_w @ d.values[idx + 1 :] / tail_w.sum())
        lam = float(np.clip((psi - alpha) / (1.0 - alpha), 0.0, 1.0))
    else:
        plus, lam = c_star, 1.0
    return TailDecomposition(var=c_star, cvar_plus=plus, lam=lam, cvar=float(values[idx]))


def quantile_function(d: DiscreteLoss) -> QuantileFunction:
    """beta -> VaR_beta of ``d`` as a plain callable."""
    cum = np.cumsum(d.weights)
    outcomes = d.values

    def quantile(beta: float) -> float:
        idx = min(int(np.searchsorted(cum, beta - PROB_TOL, side="left")), cum.size - 1)
        return float(outcomes[idx])

    return quantile


def acerbi_cvar(
    quantile: Union[QuantileFunction, DiscreteLoss], alpha: float, steps: int = 1000
) -> float:
    """CVaR_alpha = (1 / (1 - alpha)) * integral_alpha^1 VaR_beta d beta.

    A DiscreteLoss is integrated exactly over its constant quantile segments;
    any other quantile callable uses the composite midpoint rule.
    """
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    _check_alpha(alpha)
    if isinstance(quantile, DiscreteLoss):
        cum = np.cumsum(quantile.weights)
        prev = np.concatenate([[0.0], cum[:-1]])
        width = np.maximum(0.0, np.minimum(cum, 1.0) - np.maximum(prev, alpha))
        return float(width @ quantile.values / (1.0 - alpha))
    h = (1.0 - alpha) / steps
    betas = alpha + (np.arange(steps) + 0.5) * h
    heights = np.fromiter((quantile(float(b)) for b in betas), dtype=float, count=steps)
    return float(heights.mean())


def generalized_tail_cdf(d: DiscreteLoss, alpha: float, z: float) -> float:
    """CDF of the alpha-tail distribution: 0 below VaR, (F(z) - alpha) / (1 - alpha) above."""
    _check_alpha(alpha)
    idx, _ = _var_index(d, alpha)
    if z < d.outcomes[idx]:
        return 0.0
    return float(np.clip((d.cdf(z) - alpha) / (1.0 - alpha), 0.0, 1.0))


def expected_loss(d: DiscreteLoss) -> float:
    """E[X | X >= 0].

    Raises:
        ValueError: If no outcome is non-negative.
    """
    mask = d.values >= 0.0
    mass = d.weights[mask].sum()
    if mass <= 0.0:
        raise ValueError("Expected loss is undefined: no non-negative outcome")
    return float(d.weights[mask] @ d.values[mask] / mass)


def risk_measures(d: DiscreteLoss, alpha: float) -> RiskReport:
    """Mean, standard deviation, EL, VaR and CVaR of a distribution.

    EL is reported as NaN when every outcome is negative.
    """
    mu = d.mean()
    std = float(np.sqrt(d.weights @ (d.values - mu) ** 2))
    try:
        el = expected_loss(d)
    except ValueError:
        logger.debug("No non-negative outcomes; expected loss set to NaN")
        el = float("nan")
    tail = cvar_convex_combination(d, alpha)
    return RiskReport(alpha=alpha, mean=mu, std=std, expected_loss=el, var=tail.var, cvar=tail.cvar)


@dataclass(frozen=True)
class CoherenceDemo:
    """VaR and CVaR of two investments and of their sum."""

    alpha: float
    var_a: float
    var_b: float
    var_sum: float
    cvar_a: float
    cvar_b: float
    cvar_sum: float

    @property
    def var_subadditive(self) -> bool:
        return self.var_sum <= self.var_a + self.var_b

    @property
    def cvar_subadditive(self) -> bool:
        return self.cvar_sum <= self.cvar_a + self.cvar_b


def coherence_counterexample(alpha: float = 0.95) -> CoherenceDemo:
    """Two loans that each default with probability 0.04 in disjoint scenarios.

    VaR at 95% sees no loss in either one alone but the full loss in the
    combination; CVaR stays subadditive.
    """
    probs = (0.04, 0.04, 0.92)
    a = (1000.0, 0.0, 0.0)
    b = (0.0, 1000.0, 0.0)
    combined = tuple(x + y for x, y in zip(a, b))
    dists = [DiscreteLoss(outcomes=o, probs=probs) for o in (a, b, combined)]
    vars_ = [var_at(dist, alpha) for dist in dists]
    cvars = [cvar_convex_combination(dist, alpha).cvar for dist in dists]
    return CoherenceDemo(alpha, *vars_, *cvars)
