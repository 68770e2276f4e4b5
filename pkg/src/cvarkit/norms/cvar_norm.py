"""Scaled CVaR norm and CVaR norm.

Let ``|x|_(1) <= ... <= |x|_(n)`` be the sorted magnitudes of x and
``alpha_j = j / n``. The scaled norm is the CVaR of the uniform
distribution over the magnitudes; the CVaR norm is ``n (1 - alpha)``
times the scaled norm and coincides with the D-norm at
``kappa = n (1 - alpha)`` for kappa >= 1.

Every characterization is exposed separately so they can be checked
against each other:

* component-wise: the three-branch closed form on the sorted magnitudes
* LP: ``min_c  w c + sum(|x_i| - c)^+`` solved with the embedded simplex
* candidates: the same minimum taken over ``c in {0} U {|x_i|}``
* knapsack: the greedy continuous-knapsack value (CVaR norm only)
* D-norm: ``max_S sum_{i in S}|x_i| + (kappa - floor(kappa))|x_t|``
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy import sparse

from cvarkit.config import SolverConfig
from cvarkit.model.norms import NormBreakdown, NormQuery
from cvarkit.solver import LinearProgram, Relation, solve_lp

logger = logging.getLogger(__name__)

GRID_TOL = 1e-12


class Algorithm(str, Enum):
    COMPONENT = "component"
    LP = "lp"
    CANDIDATES = "candidates"
    KNAPSACK = "knapsack"
    DNORM = "dnorm"


def magnitudes(x: ArrayLike) -> np.ndarray:
    """|x_i| in ascending order (stable sort)."""
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("Vector must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Vector entries must be finite")
    return np.sort(np.abs(arr), kind="stable")


def _check_alpha(alpha: float, closed: bool) -> None:
    ok = 0.0 <= alpha <= 1.0 if closed else 0.0 <= alpha < 1.0
    if not ok:
        raise ValueError(f"alpha must lie in {'[0, 1]' if closed else '[0, 1)'}, got {alpha}")


def alpha_grid(n: int) -> np.ndarray:
    """Grid points ``alpha_j = j / n`` for ``j = 0..n-1``."""
    if n < 1:
        raise ValueError(f"Dimension must be >= 1, got {n}")
    return np.arange(n) / n


def alpha_bracket(n: int, alpha: float) -> tuple[int, bool]:
    """Return ``(j, on_grid)`` with ``alpha_j <= alpha < alpha_{j+1}``.

    ``j = n - 1`` with ``on_grid = False`` is the max branch
    ``alpha > (n - 1) / n``.
    """
    scaled = alpha * n
    nearest = round(scaled)
    if abs(scaled - nearest) <= GRID_TOL * max(1.0, n) and nearest <= n - 1:
        return int(nearest), True
    return min(int(np.floor(scaled)), n - 1), False


def scaled_cvar_norm(x: ArrayLike, alpha: float) -> NormBreakdown:
    """Component-wise scaled CVaR norm, alpha in [0, 1]."""
    _check_alpha(alpha, closed=True)
    m = magnitudes(x)
    n = m.size
    j, on_grid = alpha_bracket(n, alpha)
    if on_grid:
        return NormBreakdown(float(m[j:].sum() / (n - j)), None, 1.0)
    if j >= n - 1:
        return NormBreakdown(float(m[-1]), None, 1.0)
    lo_a, hi_a = j / n, (j + 1) / n
    lower = m[j:].sum() / (n - j)
    upper = m[j + 1 :].sum() / (n - j - 1)
    mu = (hi_a - alpha) * (1.0 - lo_a) / ((hi_a - lo_a) * (1.0 - alpha))
    return NormBreakdown(float(mu * lower + (1.0 - mu) * upper), (lo_a, hi_a), float(mu))


def cvar_norm(x: ArrayLike, alpha: float) -> NormBreakdown:
    """Component-wise CVaR norm, alpha in [0, 1).

    Raises:
        ValueError: For alpha = 1, where ``n (1 - alpha) max|x_i|`` vanishes.
    """
    _check_alpha(alpha, closed=False)
    m = magnitudes(x)
    n = m.size
    j, on_grid = alpha_bracket(n, alpha)
    if on_grid:
        return NormBreakdown(float(m[j:].sum()), None, 1.0)
    if j >= n - 1:
        return NormBreakdown(float(n * (1.0 - alpha) * m[-1]), None, 1.0)
    lo_a, hi_a = j / n, (j + 1) / n
    lam = (hi_a - alpha) / (hi_a - lo_a)
    value = lam * m[j:].sum() + (1.0 - lam) * m[j + 1 :].sum()
    return NormBreakdown(float(value), (lo_a, hi_a), float(lam))


def _excess_at_candidates(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Candidate thresholds ``{0} U {m_k}`` and ``sum_i (m_i - c)^+`` at each."""
    n = m.size
    suffix = np.concatenate([np.cumsum(m[::-1])[::-1], [0.0]])
    idx = np.concatenate([[0], np.arange(n)])
    c = np.concatenate([[0.0], m])
    return c, suffix[idx] - c * (n - idx)


def scaled_cvar_norm_candidates(x: ArrayLike, alpha: float) -> float:
    """``min_c  c + sum(|x_i| - c)^+ / (n (1 - alpha))`` over the candidate set."""
    _check_alpha(alpha, closed=True)
    m = magnitudes(x)
    if alpha == 1.0:
        return float(m[-1])
    c, excess = _excess_at_candidates(m)
    return float(np.min(c + excess / (m.size * (1.0 - alpha))))


def cvar_norm_candidates(x: ArrayLike, alpha: float) -> float:
    """``min_c  n (1 - alpha) c + sum(|x_i| - c)^+`` over the candidate set."""
    _check_alpha(alpha, closed=False)
    m = magnitudes(x)
    c, excess = _excess_at_candidates(m)
    return float(np.min(m.size * (1.0 - alpha) * c + excess))


def norm_program(x: ArrayLike, threshold_cost: float, excess_cost: float) -> LinearProgram:
    """LP over ``[c, z]``: min ``threshold_cost c + excess_cost sum(z)`` with ``z_i + c >= |x_i|``."""
    a = np.abs(np.asarray(x, dtype=float).ravel())
    n = a.size
    matrix = sparse.hstack([sparse.csc_array(np.ones((n, 1))), sparse.identity(n, format="csc")], format="csc")
    return LinearProgram(
        objective=np.concatenate([[threshold_cost], np.full(n, excess_cost)]),
        matrix=matrix,
        relations=(Relation.GE,) * n,
        rhs=a,
        lower=np.concatenate([[-np.inf], np.zeros(n)]),
        names=("c",) + tuple(f"z{i + 1}" for i in range(n)),
    )


def scaled_cvar_norm_lp(x: ArrayLike, alpha: float, config: Optional[SolverConfig] = None) -> float:
    """Scaled CVaR norm through its LP characterization; ``max|x_i|`` at alpha = 1."""
    _check_alpha(alpha, closed=True)
    m = magnitudes(x)
    if alpha == 1.0:
        return float(m[-1])
    program = norm_program(x, 1.0, 1.0 / (m.size * (1.0 - alpha)))
    return solve_lp(program, config).require_optimal("Scaled CVaR norm program").objective


def cvar_norm_lp(x: ArrayLike, alpha: float, config: Optional[SolverConfig] = None) -> float:
    """CVaR norm through its LP characterization."""
    _check_alpha(alpha, closed=False)
    m = magnitudes(x)
    program = norm_program(x, m.size * (1.0 - alpha), 1.0)
    return solve_lp(program, config).require_optimal("CVaR norm program").objective


def _top_kappa(x: ArrayLike, kappa: float) -> float:
    desc = magnitudes(x)[::-1]
    whole = min(int(np.floor(kappa)), desc.size)
    value = float(desc[:whole].sum())
    if whole < desc.size:
        value += (kappa - whole) * float(desc[whole])
    return value


def cvar_norm_knapsack(x: ArrayLike, alpha: float) -> float:
    """Greedy continuous-knapsack value with capacity ``kappa = n (1 - alpha)``."""
    _check_alpha(alpha, closed=False)
    n = np.asarray(x).size
    return _top_kappa(x, n * (1.0 - alpha))


def knapsack_weights(x: ArrayLike, alpha: float) -> np.ndarray:
    """Optimal knapsack weights q, aligned with x: ``sum(q) = kappa``, ``0 <= q <= 1``.

    ``q @ abs(x)`` equals the CVaR norm.
    """
    _check_alpha(alpha, closed=False)
    a = np.abs(np.asarray(x, dtype=float).ravel())
    kappa = a.size * (1.0 - alpha)
    order = np.argsort(-a, kind="stable")
    whole = min(int(np.floor(kappa)), a.size)
    q = np.zeros(a.size)
    q[order[:whole]] = 1.0
    if whole < a.size:
        q[order[whole]] = kappa - whole
    return q


def d_norm(x: ArrayLike, kappa: float) -> float:
    """D-norm with parameter kappa in [1, n].

    Raises:
        ValueError: If kappa is outside [1, n].
    """
    n = np.asarray(x).size
    if not 1.0 - GRID_TOL <= kappa <= n + GRID_TOL:
        raise ValueError(f"kappa must lie in [1, {n}], got {kappa}")
    return _top_kappa(x, min(max(kappa, 1.0), float(n)))


def evaluate(
    query: NormQuery,
    algorithm: Algorithm = Algorithm.COMPONENT,
    scaled: bool = False,
    config: Optional[SolverConfig] = None,
) -> float:
    """Evaluate one norm of a query with the chosen characterization.

    The knapsack and D-norm paths compute the CVaR norm; the scaled value
    is recovered by dividing by ``kappa = n (1 - alpha)``.
    """
    x, alpha = np.asarray(query.x, dtype=float), query.alpha
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.COMPONENT:
        return (scaled_cvar_norm if scaled else cvar_norm)(x, alpha).value
    if algorithm is Algorithm.LP:
        return (scaled_cvar_norm_lp if scaled else cvar_norm_lp)(x, alpha, config)
    if algorithm is Algorithm.CANDIDATES:
        return (scaled_cvar_norm_candidates if scaled else cvar_norm_candidates)(x, alpha)
    if scaled and alpha == 1.0:
        raise ValueError(f"{algorithm.value} has no scaled form at alpha = 1")
    kappa = query.n * (1.0 - alpha)
    if algorithm is Algorithm.KNAPSACK:
        value = cvar_norm_knapsack(x, alpha)
    else:
        value = d_norm(x, kappa)
    return value / kappa if scaled else value
