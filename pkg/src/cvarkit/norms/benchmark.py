"""Wall-clock comparison of the norm characterizations."""

from __future__ import annotations

import logging
import time
from statistics import median
from typing import Callable, Iterable, Optional

import numpy as np
import pandas as pd

from cvarkit.config import SolverConfig
from cvarkit.norms.cvar_norm import (
    cvar_norm,
    cvar_norm_knapsack,
    cvar_norm_lp,
    scaled_cvar_norm,
    scaled_cvar_norm_lp,
)
from cvarkit.rng import Stream, stream

logger = logging.getLogger(__name__)

DEFAULT_DIMS = (10, 100, 1000)
DEFAULT_ALPHAS = (0.0, 0.1, 0.25, 0.5, 0.7, 0.9)
COLUMNS = ["algo", "n", "alpha", "ms"]


def _algorithms(config: Optional[SolverConfig]) -> dict[str, Callable[[np.ndarray, float], object]]:
    return {
        "scaled_component": scaled_cvar_norm,
        "component": cvar_norm,
        "scaled_lp": lambda x, a: scaled_cvar_norm_lp(x, a, config),
        "lp": lambda x, a: cvar_norm_lp(x, a, config),
        "knapsack": cvar_norm_knapsack,
    }


def _median_ms(fn: Callable[[np.ndarray, float], object], x: np.ndarray, alpha: float, reps: int) -> float:
    fn(x, alpha)
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn(x, alpha)
        times.append((time.perf_counter() - start) * 1000.0)
    return median(times)


def benchmark_norms(
    dims: Iterable[int] = DEFAULT_DIMS,
    alphas: Iterable[float] = DEFAULT_ALPHAS,
    reps: int = 5,
    seed: int = 0,
    lp_max_n: int = 10_000,
    config: Optional[SolverConfig] = None,
) -> pd.DataFrame:
    """Median milliseconds per (algorithm, n, alpha) after one warm-up call.

    LP timings are skipped above ``lp_max_n``. ``reps = 0`` yields an
    empty table.

    Returns:
        Frame with columns ``algo, n, alpha, ms``.
    """
    if reps < 0:
        raise ValueError(f"reps must be >= 0, got {reps}")
    rows: list[dict] = []
    if reps == 0:
        return pd.DataFrame(rows, columns=COLUMNS)
    alphas = [float(a) for a in alphas]
    algorithms = _algorithms(config)
    for n in dims:
        x = stream(seed, Stream.BENCHMARK, n).standard_normal(n)
        for name, fn in algorithms.items():
            if name.endswith("lp") and n > lp_max_n:
                logger.info("Skipping %s at n=%d (above %d)", name, n, lp_max_n)
                continue
            for alpha in alphas:
                rows.append({"algo": name, "n": n, "alpha": alpha, "ms": _median_ms(fn, x, alpha, reps)})
        logger.debug("Timed n=%d", n)
    logger.info("Benchmarked %d (algo, n, alpha) cells", len(rows))
    return pd.DataFrame(rows, columns=COLUMNS)


def speed_ratio(table: pd.DataFrame, n: int, fast: str = "component", slow: str = "lp") -> float:
    """Median LP time over median component-wise time at dimension n."""
    at_n = table[table["n"] == n]
    fast_ms = at_n.loc[at_n["algo"] == fast, "ms"].median()
    slow_ms = at_n.loc[at_n["algo"] == slow, "ms"].median()
    if not fast_ms > 0:
        return float("inf")
    return float(slow_ms / fast_ms)
