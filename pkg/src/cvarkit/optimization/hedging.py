"""Option payoffs, scenario P&L and the CVaR-optimal hedge of an option book.

Options are European, held to expiry and traded at mid price with no
transaction cost. A book's loss in a scenario is what its positions cost
minus what they pay at expiry, in dollars (contracts times shares per
contract).
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy import sparse
from scipy.stats import norm

from cvarkit.analytics.risk import cvar_convex_combination
from cvarkit.config import SolverConfig
from cvarkit.model.distributions import DiscreteLoss
from cvarkit.model.market import (
    Book,
    HedgeProblem,
    HedgeResult,
    LossReport,
    OptionKind,
    OptionQuote,
    Position,
    Side,
)
from cvarkit.optimization.scenarios import psd_factor
from cvarkit.rng import Stream, stream
from cvarkit.solver import LinearProgram, Relation, solve_lp

logger = logging.getLogger(__name__)

CHAIN_COLUMNS = ["underlying", "kind", "strike", "price"]
BOOK_COLUMNS = ["underlying", "kind", "strike", "contracts"]


def payoff(kind: OptionKind, side: Side, strike: float, s_t: ArrayLike) -> np.ndarray | float:
    """Payoff at expiry per share; a short position pays the negated long payoff."""
    s = np.asarray(s_t, dtype=float)
    if np.any(s < 0):
        raise ValueError("Terminal prices must be non-negative")
    if OptionKind(kind) is OptionKind.CALL:
        long_payoff = np.maximum(s - strike, 0.0)
    else:
        long_payoff = np.maximum(strike - s, 0.0)
    value = long_payoff if Side(side) is Side.LONG else -long_payoff
    return float(value) if value.ndim == 0 else value


def profit(kind: OptionKind, side: Side, strike: float, s_t: ArrayLike, price: float) -> np.ndarray | float:
    """Payoff net of the premium paid (long) or received (short)."""
    premium = price if Side(side) is Side.LONG else -price
    return payoff(kind, side, strike, s_t) - premium


def _columns(quotes: Sequence[OptionQuote], underlyings: Sequence[str]) -> np.ndarray:
    index = {u: i for i, u in enumerate(underlyings)}
    missing = {q.underlying for q in quotes} - index.keys()
    if missing:
        raise ValueError(f"No price column for {', '.join(sorted(missing))}")
    return np.array([index[q.underlying] for q in quotes], dtype=int)


def payoff_matrix(
    quotes: Sequence[OptionQuote], scenarios: ArrayLike, underlyings: Sequence[str]
) -> np.ndarray:
    """M x Q long payoffs of every quote in every scenario."""
    prices = np.atleast_2d(np.asarray(scenarios, dtype=float))
    if prices.shape[1] != len(underlyings):
        raise ValueError(f"{prices.shape[1]} price columns for {len(underlyings)} underlyings")
    s = prices[:, _columns(quotes, underlyings)]
    strikes = np.array([q.strike for q in quotes])
    is_call = np.array([q.kind is OptionKind.CALL for q in quotes])
    return np.where(is_call, np.maximum(s - strikes, 0.0), np.maximum(strikes - s, 0.0))


def _prices(quotes: Sequence[OptionQuote]) -> np.ndarray:
    return np.array([q.price for q in quotes], dtype=float)


def book_cost(book: Book, quotes: Sequence[OptionQuote]) -> float:
    """Total cost of the positions; short positions contribute negatively."""
    return float(book.spc * book.contracts_for(list(quotes)) @ _prices(quotes))


def book_loss(
    book: Book, quotes: Sequence[OptionQuote], scenario_prices: ArrayLike, underlyings: Sequence[str]
) -> np.ndarray:
    """Per-scenario loss: position cost minus payoff at expiry."""
    contracts = book.contracts_for(list(quotes))
    po = payoff_matrix(quotes, scenario_prices, underlyings)
    return book.spc * (contracts @ _prices(quotes) - po @ contracts)


def simulate_prices(s0: ArrayLike, cov: ArrayLike, m_draws: int, seed: int) -> np.ndarray:
    """Zero-drift lognormal terminal prices ``s0 * exp(z)`` with ``z ~ N(0, cov)``.

    Raises:
        ValueError: If M < 1, shapes disagree or cov is not PSD.
    """
    spot = np.asarray(s0, dtype=float).ravel()
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if m_draws < 1:
        raise ValueError(f"Need at least one scenario, got {m_draws}")
    if cov.shape != (spot.size, spot.size):
        raise ValueError(f"Covariance shape {cov.shape} does not match {spot.size} prices")
    factor = psd_factor(cov)
    z = stream(seed, Stream.PRICES).standard_normal((m_draws, spot.size)) @ factor.T
    logger.info("Simulated %d terminal prices for %d underlyings", m_draws, spot.size)
    return spot * np.exp(z)


def band_exit_probability(s0: float, variance: float, low: float, high: float) -> float:
    """P(S_T < low) + P(S_T > high) when ln(S_T / s0) ~ N(0, variance)."""
    if not 0 < low < high:
        raise ValueError(f"Need 0 < low < high, got ({low}, {high})")
    if variance <= 0:
        return float(not low <= s0 <= high)
    sd = np.sqrt(variance)
    return float(norm.cdf(np.log(low / s0) / sd) + norm.sf(np.log(high / s0) / sd))


def empirical_band_exit(prices: ArrayLike, low: float, high: float) -> float:
    p = np.asarray(prices, dtype=float)
    return float(np.mean((p < low) | (p > high)))


def loss_report(losses: ArrayLike, alpha: float) -> LossReport:
    """Loss statistics of equally likely scenarios."""
    arr = np.asarray(losses, dtype=float).ravel()
    tail = cvar_convex_combination(DiscreteLoss.from_sample(arr), alpha)
    return LossReport(
        mean_loss=float(arr.mean()),
        min_loss=float(arr.min()),
        max_loss=float(arr.max()),
        prob_loss=float(np.mean(arr > 0)),
        var=tail.var,
        cvar=tail.cvar,
    )


def hedge_program(problem: HedgeProblem, quotes: Sequence[OptionQuote]) -> LinearProgram:
    """LP over ``[y, c, z]``: min ``c + sum(z) / (M (1 - alpha))``.

    Scenario rows read ``z_m + c - spc (p - PO_m) y >= base_m``, where
    base_m is the current book's loss; bounds are ``-a <= y <= a``.
    """
    quotes = list(quotes)
    caps = problem.adjust_caps
    if caps.size != len(quotes):
        raise ValueError(f"{caps.size} adjustment caps for {len(quotes)} quotes")
    base = book_loss(problem.book, quotes, problem.scenarios, problem.underlyings)
    po = payoff_matrix(quotes, problem.scenarios, problem.underlyings)
    m, q = po.shape
    rate = problem.book.spc * (_prices(quotes) - po)
    matrix = sparse.hstack(
        [sparse.csc_array(-rate), sparse.csc_array(np.ones((m, 1))), sparse.identity(m, format="csc")],
        format="csc",
    )
    objective = np.concatenate([np.zeros(q), [1.0], np.full(m, 1.0 / (m * (1.0 - problem.alpha)))])
    return LinearProgram(
        objective=objective,
        matrix=matrix,
        relations=(Relation.GE,) * m,
        rhs=base,
        lower=np.concatenate([-caps, [-np.inf], np.zeros(m)]),
        upper=np.concatenate([caps, [np.inf], np.full(m, np.inf)]),
    )


def hedge(
    problem: HedgeProblem, quotes: Sequence[OptionQuote], config: Optional[SolverConfig] = None
) -> HedgeResult:
    """Find the position adjustment within the caps that minimizes scenario CVaR.

    ``y = 0`` is always feasible, so the program always has an optimum.
    Adjustments are fractional.
    """
    quotes = list(quotes)
    program = hedge_program(problem, quotes)
    result = solve_lp(program, config).require_optimal("Hedge program")
    q = len(quotes)
    y = np.clip(result.x[:q], -problem.adjust_caps, problem.adjust_caps)
    base = program.rhs
    after_losses = base + problem.book.spc * (
        (_prices(quotes) - payoff_matrix(quotes, problem.scenarios, problem.underlyings)) @ y
    )
    before = loss_report(base, problem.alpha)
    after = loss_report(after_losses, problem.alpha)
    logger.info("Hedge CVaR %.2f -> %.2f (LP objective %.2f)", before.cvar, after.cvar, result.objective)
    return HedgeResult(adjustments=y, before=before, after=after, objective=result.objective, var=float(result.x[q]))


def caps_by_underlying(quotes: Sequence[OptionQuote], caps: dict[str, float]) -> np.ndarray:
    """Per-quote caps from one cap per underlying (missing underlyings get 0)."""
    return np.array([float(caps.get(q.underlying, 0.0)) for q in quotes])


def hedged_book(book: Book, quotes: Sequence[OptionQuote], adjustments: ArrayLike) -> Book:
    """The book after applying ``adjustments`` (aligned with ``quotes``)."""
    quotes = list(quotes)
    held = book.contracts_for(quotes) + np.asarray(adjustments, dtype=float)
    positions = [
        Position(underlying=qt.underlying, kind=qt.kind, strike=qt.strike, contracts=float(c))
        for qt, c in zip(quotes, held)
        if abs(c) > 1e-9
    ]
    return Book(positions=positions, spc=book.spc)


def profit_profile(
    book: Book, quotes: Sequence[OptionQuote], underlying: str, grid: Iterable[float]
) -> pd.DataFrame:
    """Profit at expiry of the positions in one underlying over a price grid."""
    subset = [q for q in quotes if q.underlying == underlying]
    own = Book(positions=[p for p in book.positions if p.underlying == underlying], spc=book.spc)
    prices = np.asarray(list(grid), dtype=float)
    losses = book_loss(own, subset, prices[:, None], [underlying])
    return pd.DataFrame({"price": prices, "profit": -losses})


def _read(path: Path, columns: list[str]) -> pd.DataFrame:
    frame = pd.read_csv(path)
    if list(frame.columns) != columns:
        raise ValueError(f"{path}: expected header {','.join(columns)}, got {list(frame.columns)}")
    if frame.isna().any().any():
        raise ValueError(f"{path}: missing values")
    return frame


def load_option_chain(path: Path) -> list[OptionQuote]:
    """Read an ``underlying,kind,strike,price`` CSV."""
    frame = _read(path, CHAIN_COLUMNS)
    quotes = [OptionQuote(**row) for row in frame.to_dict(orient="records")]
    logger.info("Loaded %d quotes from %s", len(quotes), path)
    return quotes


def load_book(path: Path, spc: float = 100.0) -> Book:
    """Read an ``underlying,kind,strike,contracts`` CSV."""
    frame = _read(path, BOOK_COLUMNS)
    positions = [Position(**row) for row in frame.to_dict(orient="records")]
    return Book(positions=positions, spc=spc)
