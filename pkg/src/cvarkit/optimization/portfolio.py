"""Minimum-variance and minimum-CVaR portfolios.

Losses are signed so that a negative expected loss is an expected profit;
the required return R enters every program as ``x'r <= -R``. Portfolios
are long-only and fully invested.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy import sparse

from cvarkit.analytics.risk import risk_measures
from cvarkit.analytics.stats import covariance_matrix
from cvarkit.config import SolverConfig
from cvarkit.model.distributions import DiscreteLoss, RiskReport
from cvarkit.model.market import AssetUniverse, OptimalPortfolio, ScenarioSet
from cvarkit.optimization.scenarios import ScenarioShape, sample_scenarios
from cvarkit.solver import (
    InfeasibleModelError,
    LinearProgram,
    QuadraticProgram,
    Relation,
    solve_lp,
    solve_qp,
)

logger = logging.getLogger(__name__)

WEIGHT_CLAMP = 1e-10
DEFAULT_REQUIRED_RETURNS = (0.006, 0.009, 0.011)


def _check_return(expected_losses: np.ndarray, required_return: float) -> None:
    best = float(np.max(-expected_losses))
    if required_return > best:
        raise InfeasibleModelError(
            f"Required return {required_return} exceeds the best single expected return {best}"
        )


def _clean_weights(x: np.ndarray) -> np.ndarray:
    w = np.asarray(x, dtype=float).copy()
    w[(w < 0.0) & (w >= -WEIGHT_CLAMP)] = 0.0
    return w


def min_variance(
    universe: AssetUniverse, required_return: float, config: Optional[SolverConfig] = None
) -> OptimalPortfolio:
    """Solve ``min x'Σx  s.t.  x'r <= -R,  sum(x) = 1,  x >= 0``.

    Raises:
        InfeasibleModelError: If R exceeds every single-asset expected return.
    """
    mu, sigma = universe.mu, universe.sigma
    _check_return(mu, required_return)
    n = universe.n_assets
    qp = QuadraticProgram(
        hessian=2.0 * sigma,
        linear=np.zeros(n),
        matrix=np.vstack([mu, np.ones(n)]),
        relations=(Relation.LE, Relation.EQ),
        rhs=np.array([-required_return, 1.0]),
    )
    result = solve_qp(qp, config).require_optimal("Minimum-variance program")
    w = _clean_weights(result.x)
    return OptimalPortfolio(
        weights=w,
        std_dev=float(np.sqrt(max(w @ sigma @ w, 0.0))),
        expected_loss=float(mu @ w),
        return_slack=float(-required_return - mu @ w),
    )


def cvar_program(
    scenarios: ScenarioSet, expected_losses: ArrayLike, required_return: float, alpha: float
) -> LinearProgram:
    """LP over ``[x, c, z]``: min ``c + sum(z) / (K (1 - alpha))``.

    Rows are ``z_k >= L_k x - c`` per scenario, the return row and the budget.
    """
    losses = scenarios.losses
    k, n = losses.shape
    mu = np.asarray(expected_losses, dtype=float).ravel()
    if mu.size != n:
        raise ValueError(f"{mu.size} expected losses for {n} scenario columns")
    scenario_rows = sparse.hstack(
        [sparse.csc_array(-losses), sparse.csc_array(np.ones((k, 1))), sparse.identity(k, format="csc")]
    )
    extra = sparse.csc_array(
        np.vstack([np.concatenate([mu, [0.0]]), np.concatenate([np.ones(n), [0.0]])])
    )
    extra = sparse.hstack([extra, sparse.csc_array((2, k))])
    matrix = sparse.vstack([scenario_rows, extra], format="csc")
    objective = np.concatenate([np.zeros(n), [1.0], np.full(k, 1.0 / (k * (1.0 - alpha)))])
    lower = np.concatenate([np.zeros(n), [-np.inf], np.zeros(k)])
    names = tuple([f"x{i + 1}" for i in range(n)] + ["c"] + [f"z{i + 1}" for i in range(k)])
    return LinearProgram(
        objective=objective,
        matrix=matrix,
        relations=(Relation.GE,) * k + (Relation.LE, Relation.EQ),
        rhs=np.concatenate([np.zeros(k), [-required_return, 1.0]]),
        lower=lower,
        names=names,
    )


def min_cvar(
    scenarios: ScenarioSet,
    expected_losses: ArrayLike,
    required_return: float,
    alpha: float,
    config: Optional[SolverConfig] = None,
) -> OptimalPortfolio:
    """Minimize the scenario CVaR of the portfolio loss.

    The optimal ``c`` is reported as VaR and the objective as CVaR.

    Raises:
        ValueError: If alpha is outside [0, 1).
        InfeasibleModelError: If the return constraint cannot be met.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    mu = np.asarray(expected_losses, dtype=float).ravel()
    _check_return(mu, required_return)
    program = cvar_program(scenarios, mu, required_return, alpha)
    result = solve_lp(program, config).require_optimal("Minimum-CVaR program")
    n = scenarios.n_assets
    w = _clean_weights(result.x[:n])
    if scenarios.n_scenarios >= 2:
        sample_cov = covariance_matrix(scenarios.losses)
        std = float(np.sqrt(max(w @ sample_cov @ w, 0.0)))
    else:
        std = 0.0
    return OptimalPortfolio(
        weights=w,
        std_dev=std,
        expected_loss=float(mu @ w),
        return_slack=float(-required_return - mu @ w),
        var=float(result.x[n]),
        cvar=result.objective,
    )


def efficient_frontier(
    universe: AssetUniverse,
    returns: Iterable[float],
    threads: int = 1,
    config: Optional[SolverConfig] = None,
) -> list[tuple[float, Optional[float]]]:
    """Minimum-variance sigma per required return.

    Infeasible grid points are kept with ``None`` in place of sigma.
    """

    def point(r: float) -> tuple[float, Optional[float]]:
        try:
            return r, min_variance(universe, r, config).std_dev
        except InfeasibleModelError:
            logger.info("Frontier point R=%g is infeasible; skipped", r)
            return r, None

    grid = [float(r) for r in returns]
    if threads <= 1 or len(grid) <= 1:
        return [point(r) for r in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(point, grid))


def risk_report(portfolio_losses: ArrayLike, alpha: float) -> RiskReport:
    """Mean, std, EL, VaR and CVaR of equally weighted portfolio losses."""
    return risk_measures(DiscreteLoss.from_sample(portfolio_losses), alpha)


def diversification_gap(universe: AssetUniverse, weights: ArrayLike) -> float:
    """sum(x_i sigma_i) - sqrt(x'Σx), non-negative for x >= 0."""
    w = np.asarray(weights, dtype=float)
    return float(w @ universe.std_devs - np.sqrt(max(w @ universe.sigma @ w, 0.0)))


def compare_mv_cvar(
    universe: AssetUniverse,
    required_returns: Sequence[float] = DEFAULT_REQUIRED_RETURNS,
    alpha: float = 0.95,
    k_draws: int = 100_000,
    seed: int = 0,
    config: Optional[SolverConfig] = None,
) -> pd.DataFrame:
    """Weights of the MV and CVaR optima side by side on one normal scenario set.

    Returns:
        Frame with columns ``required_return, asset, mv_weight, cvar_weight``.
    """
    scenarios = sample_scenarios(universe, k_draws, seed)
    rows = []
    for r in required_returns:
        mv = min_variance(universe, r, config)
        cv = min_cvar(scenarios, universe.mu, r, alpha, config)
        for label, a, b in zip(universe.labels, mv.weights, cv.weights):
            rows.append({"required_return": r, "asset": label, "mv_weight": a, "cvar_weight": b})
    return pd.DataFrame(rows, columns=["required_return", "asset", "mv_weight", "cvar_weight"])


@dataclass(frozen=True, eq=False)
class SkewExperiment:
    """MV and CVaR optima evaluated on the same skewed scenario set."""

    mv: OptimalPortfolio
    cvar: OptimalPortfolio
    mv_report: RiskReport
    cvar_report: RiskReport

    def to_frame(self, labels: Sequence[str]) -> pd.DataFrame:
        rows = []
        for name, port, rep in (("mv", self.mv, self.mv_report), ("cvar", self.cvar, self.cvar_report)):
            row = {"portfolio": name}
            row.update({label: w for label, w in zip(labels, port.weights)})
            row.update(rep.model_dump(exclude={"alpha"}))
            rows.append(row)
        return pd.DataFrame(rows)


def scenario2_experiment(
    universe: AssetUniverse,
    skew: float,
    k_draws: int,
    seed: int,
    alpha: float = 0.95,
    required_return: float = 0.006,
    config: Optional[SolverConfig] = None,
) -> SkewExperiment:
    """Compare MV and CVaR optima when asset losses are skewed.

    The MV portfolio uses the parametric covariance; the CVaR portfolio and
    both risk reports use the sampled scenarios.
    """
    scenarios = sample_scenarios(universe, k_draws, seed, ScenarioShape.skewed(skew))
    mv = min_variance(universe, required_return, config)
    cv = min_cvar(scenarios, universe.mu, required_return, alpha, config)
    mv_report = risk_report(scenarios.portfolio_losses(mv.weights), alpha)
    cvar_report = risk_report(scenarios.portfolio_losses(cv.weights), alpha)
    logger.info("Skew %.2f: CVaR of MV %.6f, CVaR of CVaR-optimal %.6f", skew, mv_report.cvar, cvar_report.cvar)
    return SkewExperiment(mv, cv, mv_report, cvar_report)
