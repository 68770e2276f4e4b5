"""LP solve entry point: primal and dual simplex paths."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from scipy import sparse

from cvarkit.config import LpMethod, SolverConfig
from cvarkit.solver.programs import LinearProgram, SolveResult, SolveStatus
from cvarkit.solver.simplex import BoundedSimplex

logger = logging.getLogger(__name__)


def _dense(matrix) -> np.ndarray:
    return matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix)


def _singleton_columns(program: LinearProgram) -> np.ndarray:
    """Columns with one nonzero entry and bounds [0, inf)."""
    a = program.matrix
    if sparse.issparse(a):
        nnz = np.diff(a.indptr)
    else:
        nnz = np.count_nonzero(a, axis=0)
    mask = (nnz == 1) & (program.lower == 0.0) & np.isinf(program.upper)
    return np.flatnonzero(mask)


def _dual_objective(h: np.ndarray, pi: np.ndarray, d: np.ndarray, lo: np.ndarray, hi: np.ndarray, tol: float) -> float:
    value = float(h @ pi)
    pos, neg = d > tol, d < -tol
    with np.errstate(invalid="ignore"):
        value += float(d[pos] @ lo[pos]) + float(d[neg] @ hi[neg])
    return value


def _solve_primal(program: LinearProgram, config: SolverConfig) -> SolveResult:
    a = _dense(program.matrix)
    m, n = a.shape
    codes = program.relation_codes()
    inequality = np.flatnonzero(codes != 0)
    slack = np.zeros((m, inequality.size))
    # >= rows subtract a surplus, <= rows add a slack.
    slack[inequality, np.arange(inequality.size)] = np.where(codes[inequality] > 0, -1.0, 1.0)
    engine = BoundedSimplex(
        np.hstack([a, slack]),
        program.rhs,
        np.concatenate([program.objective, np.zeros(inequality.size)]),
        np.concatenate([program.lower, np.zeros(inequality.size)]),
        np.concatenate([program.upper, np.full(inequality.size, np.inf)]),
        config,
    )
    out = engine.solve()
    x = out.values[:n]
    lo = np.concatenate([program.lower, np.zeros(inequality.size)])
    hi = np.concatenate([program.upper, np.full(inequality.size, np.inf)])
    dual_obj = None
    if out.status is SolveStatus.OPTIMAL:
        dual_obj = _dual_objective(program.rhs, out.row_duals, out.reduced_costs, lo, hi, config.optimality_tol)
    return SolveResult(
        status=out.status,
        x=x,
        objective=float(program.objective @ x),
        iterations=out.iterations,
        duals=out.row_duals,
        dual_objective=dual_obj,
        method="primal",
    )


def _row_bounds(program: LinearProgram, singletons: np.ndarray) -> tuple[np.ndarray, np.ndarray, dict[int, list[tuple[int, float]]]]:
    """Bounds on the row multipliers, tightened by each singleton column."""
    codes = program.relation_codes()
    y_lo = np.where(codes > 0, 0.0, -np.inf)
    y_hi = np.where(codes < 0, 0.0, np.inf)
    a = sparse.csc_array(program.matrix)
    by_row: dict[int, list[tuple[int, float]]] = {}
    for j in singletons:
        start = a.indptr[j]
        i, coef = int(a.indices[start]), float(a.data[start])
        limit = program.objective[j] / coef
        if coef > 0:
            y_hi[i] = min(y_hi[i], limit)
        else:
            y_lo[i] = max(y_lo[i], limit)
        by_row.setdefault(i, []).append((int(j), coef))
    return y_lo, y_hi, by_row


def _fill_singletons(
    program: LinearProgram, x: np.ndarray, rest: np.ndarray, by_row: dict[int, list[tuple[int, float]]]
) -> None:
    """Set singleton columns from each row's residual at least cost.

    A violated row is covered by its cheapest singleton of the right sign.
    A row with slack takes up that slack only when the cheapest such
    singleton has negative cost.
    """
    codes = program.relation_codes()
    residual = program.rhs - _dense_rows(program, rest) @ x[rest]
    for i, cols in by_row.items():
        r = residual[i]
        if r == 0:
            continue
        slack = (codes[i] > 0 and r < 0) or (codes[i] < 0 and r > 0)
        want_positive = r > 0
        options = [(program.objective[j] / abs(c), j, c) for j, c in cols if (c > 0) == want_positive]
        if not options:
            continue
        cost, j, c = min(options)
        if slack and cost >= 0:
            continue
        x[j] = r / c


def _dense_rows(program: LinearProgram, cols: np.ndarray) -> np.ndarray:
    a = program.matrix
    if sparse.issparse(a):
        return sparse.csc_array(a)[:, cols]
    return a[:, cols]


def _solve_dual(program: LinearProgram, config: SolverConfig, singletons: np.ndarray) -> SolveResult:
    """Solve through the LP dual, where singleton columns become multiplier bounds.

    The dual has one equality row per remaining column::

        max b'y + lo'r+ - hi'r-   s.t.  A_F'y + r+ - r- = c_F

    and the primal point is the negated row multiplier of that program.
    """
    y_lo, y_hi, by_row = _row_bounds(program, singletons)
    if np.any(y_lo > y_hi):
        return _fallback(program, config, "singleton costs make the dual infeasible")

    rest = np.setdiff1d(np.arange(program.n_vars), singletons)
    lo, hi = program.lower[rest], program.upper[rest]
    has_lo, has_hi = np.flatnonzero(np.isfinite(lo)), np.flatnonzero(np.isfinite(hi))
    k = rest.size
    a_f = _dense_rows(program, rest)
    a_f_t = a_f.T.toarray() if sparse.issparse(a_f) else np.asarray(a_f).T
    plus = np.zeros((k, has_lo.size))
    plus[has_lo, np.arange(has_lo.size)] = 1.0
    minus = np.zeros((k, has_hi.size))
    minus[has_hi, np.arange(has_hi.size)] = -1.0

    engine = BoundedSimplex(
        np.hstack([a_f_t, plus, minus]),
        program.objective[rest],
        np.concatenate([-program.rhs, -lo[has_lo], hi[has_hi]]),
        np.concatenate([y_lo, np.zeros(has_lo.size + has_hi.size)]),
        np.concatenate([y_hi, np.full(has_lo.size + has_hi.size, np.inf)]),
        config,
    )
    out = engine.solve()
    status = {
        SolveStatus.UNBOUNDED: SolveStatus.INFEASIBLE,
        SolveStatus.INFEASIBLE: SolveStatus.UNBOUNDED,
    }.get(out.status, out.status)

    x = np.zeros(program.n_vars)
    x[rest] = np.clip(-out.row_duals, lo, hi)
    if status is SolveStatus.OPTIMAL:
        _fill_singletons(program, x, rest, by_row)
    result = SolveResult(
        status=status,
        x=x,
        objective=float(program.objective @ x),
        iterations=out.iterations,
        duals=out.values[: program.n_rows],
        dual_objective=-out.objective if status is SolveStatus.OPTIMAL else None,
        method="dual",
    )
    if status is SolveStatus.OPTIMAL:
        gap = abs(result.objective - result.dual_objective)
        if gap > config.duality_gap_tol * max(1.0, abs(result.objective)):
            return _fallback(program, config, f"duality gap {gap:.3e} after primal recovery", result)
    return result


def _fallback(
    program: LinearProgram, config: SolverConfig, reason: str, dual_result: Optional[SolveResult] = None
) -> SolveResult:
    """Solve the primal directly, or give up when it is too large to hold densely.

    Without a usable dual result the outcome is ambiguous: an infeasible
    dual means the primal is either unbounded or infeasible.
    """
    if program.n_rows * program.n_vars <= config.dense_limit:
        logger.info("Dual path unavailable (%s); solving the primal", reason)
        return _solve_primal(program, config)
    if dual_result is not None:
        logger.warning("Dual path unreliable (%s) and the primal is too large; keeping the dual result", reason)
        return dual_result
    logger.warning("Dual path unavailable (%s) and the primal is too large; status is undecided", reason)
    return SolveResult(
        status=SolveStatus.INFEASIBLE_OR_UNBOUNDED,
        x=np.zeros(program.n_vars),
        objective=float("nan"),
        iterations=0,
        method="dual",
    )


def solve_lp(program: LinearProgram, config: Optional[SolverConfig] = None) -> SolveResult:
    """Solve a linear program with the bounded simplex engine.

    ``config.method`` selects the path. ``auto`` solves scenario programs,
    whose single-row auxiliary columns outnumber the rest, through their
    dual and everything else directly.

    Args:
        program: The program to solve.
        config: Tolerances and path selection; defaults to SolverConfig().

    Returns:
        SolveResult with status, point, objective and row multipliers.
    """
    config = config or SolverConfig()
    singletons = _singleton_columns(program)
    others = program.n_vars - singletons.size
    method = config.method
    if method is LpMethod.AUTO:
        use_dual = singletons.size > 0 and others >= 1 and 2 * others < program.n_rows
        method = LpMethod.DUAL if use_dual else LpMethod.PRIMAL
    if method is LpMethod.DUAL and others == 0:
        method = LpMethod.PRIMAL

    if method is LpMethod.DUAL:
        result = _solve_dual(program, config, singletons)
    else:
        result = _solve_primal(program, config)

    logger.info(
        "LP %d x %d solved by %s path: %s, objective %.10g, %d iterations",
        program.n_rows,
        program.n_vars,
        result.method,
        result.status.value,
        result.objective,
        result.iterations,
    )
    if result.optimal:
        violation = program.max_violation(result.x)
        if violation > config.feasibility_tol * max(1.0, float(np.abs(program.rhs).max(initial=0.0))):
            logger.warning("LP solution violates constraints by %.3e", violation)
    return result
