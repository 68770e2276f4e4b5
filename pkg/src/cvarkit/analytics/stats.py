"""Moments, dependence measures and EWMA volatility estimators.

All moments use the population denominator (1/n): a sample is treated
as the equal-probability distribution over its observations.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

Sample = Union[Sequence[float], np.ndarray]

DEFAULT_LAMBDA = 0.94


def _sample(values: ArrayLike, min_size: int = 1) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size < min_size:
        raise ValueError(f"Sample needs at least {min_size} value(s), got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Sample values must be finite")
    return arr


def _pair(a: ArrayLike, b: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    xa, xb = _sample(a, 2), _sample(b, 2)
    if xa.size != xb.size:
        raise ValueError(f"Sample lengths differ: {xa.size} vs {xb.size}")
    return xa, xb


def mean(s: Sample, weights: Optional[Sample] = None) -> float:
    """Arithmetic mean, or the probability-weighted mean when weights are given."""
    x = _sample(s)
    if weights is None:
        return float(x.mean())
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != x.size:
        raise ValueError(f"{w.size} weights for {x.size} values")
    return float(w @ x / w.sum())


def variance(s: Sample) -> float:
    x = _sample(s, 2)
    return float(np.mean((x - x.mean()) ** 2))


def covariance(a: Sample, b: Sample) -> float:
    xa, xb = _pair(a, b)
    return float(np.mean((xa - xa.mean()) * (xb - xb.mean())))


def correlation(a: Sample, b: Sample) -> float:
    """Pearson correlation, clipped to [-1, 1].

    Raises:
        ValueError: If either sample is constant.
    """
    xa, xb = _pair(a, b)
    sa, sb = xa.std(), xb.std()
    if sa == 0.0 or sb == 0.0:
        raise ValueError("Correlation is undefined for a constant sample")
    rho = np.mean((xa - xa.mean()) * (xb - xb.mean())) / (sa * sb)
    return float(np.clip(rho, -1.0, 1.0))


def skewness(s: Sample) -> float:
    x = _sample(s, 2)
    sd = x.std()
    if sd == 0.0:
        return 0.0
    return float(np.mean(((x - x.mean()) / sd) ** 3))


def kurtosis(s: Sample) -> float:
    """Non-excess kurtosis E[((X - mu) / sigma)^4] (3 for a normal law)."""
    x = _sample(s, 2)
    sd = x.std()
    if sd == 0.0:
        raise ValueError("Kurtosis is undefined for a constant sample")
    return float(np.mean(((x - x.mean()) / sd) ** 4))


def covariance_matrix(samples: ArrayLike) -> np.ndarray:
    """Population covariance of the columns of a K x N sample matrix."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise ValueError(f"Need a K x N matrix with K >= 2, got shape {arr.shape}")
    cov = np.cov(arr, rowvar=False, ddof=0)
    return np.atleast_2d(cov)


class EwmaState(BaseModel):
    """Running EWMA estimate of a variance or a covariance."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(default=DEFAULT_LAMBDA, gt=0.0, lt=1.0)
    var_estimate: float = Field(default=0.0, ge=0.0)
    cov_estimate: float = 0.0


def ewma_update_var(state: EwmaState, r_prev: float) -> EwmaState:
    """Var_t = lam * Var_{t-1} + (1 - lam) * r_{t-1}^2."""
    if not np.isfinite(r_prev):
        raise ValueError(f"Return must be finite, got {r_prev}")
    var = state.lam * state.var_estimate + (1.0 - state.lam) * r_prev * r_prev
    return state.model_copy(update={"var_estimate": max(var, 0.0)})


def ewma_update_cov(state: EwmaState, r_a: float, r_b: float) -> EwmaState:
    """Cov_t = lam * Cov_{t-1} + (1 - lam) * r_a,{t-1} * r_b,{t-1}."""
    if not (np.isfinite(r_a) and np.isfinite(r_b)):
        raise ValueError("Returns must be finite")
    cov = state.lam * state.cov_estimate + (1.0 - state.lam) * r_a * r_b
    return state.model_copy(update={"cov_estimate": cov})


def ewma_covariance(
    returns: ArrayLike,
    lam: float = DEFAULT_LAMBDA,
    initial: Optional[ArrayLike] = None,
) -> np.ndarray:
    """Run the EWMA recursions over a T x N return history.

    Each entry follows the same recursion as ``ewma_update_var`` /
    ``ewma_update_cov``; the result is the estimate after the last return.

    Args:
        returns: T x N matrix of daily log returns, oldest first.
        lam: Decay factor in (0, 1).
        initial: N x N starting estimate; zeros when omitted.

    Returns:
        The N x N daily covariance estimate.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    r = np.asarray(returns, dtype=float)
    if r.ndim == 1:
        r = r[:, None]
    if r.shape[0] < 1 or not np.all(np.isfinite(r)):
        raise ValueError("Return history must be non-empty and finite")
    n = r.shape[1]
    est = np.zeros((n, n)) if initial is None else np.array(initial, dtype=float)
    if est.shape != (n, n):
        raise ValueError(f"Initial estimate must be {n} x {n}")
    for row in r:
        est = lam * est + (1.0 - lam) * np.outer(row, row)
    logger.debug("EWMA over %d returns of %d series", r.shape[0], n)
    return est


def scale_horizon(m: ArrayLike, n_days: int) -> np.ndarray:
    """Scale a daily covariance matrix to an n-day horizon."""
    if int(n_days) != n_days or n_days < 1:
        raise ValueError(f"n_days must be a positive integer, got {n_days}")
    return np.asarray(m, dtype=float) * int(n_days)


def log_returns(prices: ArrayLike) -> np.ndarray:
    """ln(P_t / P_{t-1}) along the first axis."""
    p = np.asarray(prices, dtype=float)
    if p.shape[0] < 2:
        raise ValueError("Need at least two prices for a return")
    if not np.all(np.isfinite(p)) or np.any(p <= 0):
        raise ValueError("Prices must be finite and positive")
    return np.diff(np.log(p), axis=0)


def load_price_history(path: Path) -> pd.DataFrame:
    """Read a ``date,price_a,price_b`` CSV into a date-indexed frame.

    Raises:
        ValueError: On missing columns, missing or non-positive prices, or
            dates that are not strictly increasing.
    """
    frame = pd.read_csv(path)
    expected = ["date", "price_a", "price_b"]
    if list(frame.columns) != expected:
        raise ValueError(f"{path}: expected header {','.join(expected)}, got {list(frame.columns)}")
    frame["date"] = pd.to_datetime(frame["date"], format="ISO8601")
    prices = frame[["price_a", "price_b"]]
    if prices.isna().any().any() or (prices <= 0).any().any():
        raise ValueError(f"{path}: prices must be present and positive")
    if not frame["date"].is_monotonic_increasing or frame["date"].duplicated().any():
        raise ValueError(f"{path}: dates must be strictly increasing")
    logger.info("Loaded %d prices from %s", len(frame), path)
    return frame.set_index("date")
