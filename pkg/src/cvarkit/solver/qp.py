"""Primal active-set method for small convex quadratic programs."""

from __future__ import annotations

import logging
import warnings
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgWarning

from cvarkit.config import SolverConfig
from cvarkit.solver.lp import solve_lp
from cvarkit.solver.programs import QuadraticProgram, SolveResult, SolveStatus

logger = logging.getLogger(__name__)


def _inequalities(qp: QuadraticProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Rewrite rows and finite bounds as ``E x = e`` and ``G x <= g``."""
    codes = qp.feasibility_program().relation_codes()
    a, b = qp.matrix, qp.rhs
    n = qp.hessian.shape[0]
    eye = np.eye(n)
    has_lo, has_hi = np.isfinite(qp.lower), np.isfinite(qp.upper)
    g_rows = np.vstack([a[codes < 0], -a[codes > 0], -eye[has_lo], eye[has_hi]]).reshape(-1, n)
    g_rhs = np.concatenate([b[codes < 0], -b[codes > 0], -qp.lower[has_lo], qp.upper[has_hi]])
    return a[codes == 0].reshape(-1, n), b[codes == 0], g_rows, g_rhs


def _kkt_solve(h: np.ndarray, a_w: np.ndarray, grad: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve [[H, A'], [A, 0]] [p; nu] = [-grad; 0]."""
    n, k = h.shape[0], a_w.shape[0]
    kkt = np.block([[h, a_w.T], [a_w, np.zeros((k, k))]])
    rhs = np.concatenate([-grad, np.zeros(k)])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            sol = scipy.linalg.solve(kkt, rhs, assume_a="sym")
    except (scipy.linalg.LinAlgError, LinAlgWarning):
        logger.warning("KKT system is singular; falling back to least squares")
        sol = scipy.linalg.lstsq(kkt, rhs)[0]
    return sol[:n], sol[n:]


def _kkt_residual(
    qp: QuadraticProgram,
    x: np.ndarray,
    e_rows: np.ndarray,
    e_rhs: np.ndarray,
    g_rows: np.ndarray,
    g_rhs: np.ndarray,
    nu: np.ndarray,
    mu: np.ndarray,
) -> float:
    grad = qp.hessian @ x + qp.linear
    stationarity = np.abs(grad + e_rows.T @ nu + g_rows.T @ mu).max(initial=0.0)
    slack = g_rows @ x - g_rhs
    complementarity = np.abs(mu * slack).max(initial=0.0)
    primal = max(np.abs(e_rows @ x - e_rhs).max(initial=0.0), slack.max(initial=0.0))
    dual = max(0.0, -mu.min(initial=0.0))
    return float(max(stationarity, complementarity, primal, dual))


def solve_qp(qp: QuadraticProgram, config: Optional[SolverConfig] = None) -> SolveResult:
    """Minimize ``1/2 x'Hx + f'x`` by a primal active-set iteration.

    A feasible start comes from a zero-cost LP. Each iteration solves the
    equality-constrained subproblem on the working set through its symmetric
    KKT system, steps to the first blocking constraint, and drops the
    constraint with the most negative multiplier once the step vanishes.

    Returns:
        SolveResult whose ``duals`` follow the LP convention (>= 0 on >=
        rows, <= 0 on <= rows) and whose ``kkt_residual`` is measured at x.
    """
    config = config or SolverConfig()
    n = qp.hessian.shape[0]
    start = solve_lp(qp.feasibility_program(), config)
    if not start.optimal:
        logger.info("QP constraint set is %s", start.status.value)
        return SolveResult(
            status=SolveStatus.INFEASIBLE, x=start.x, objective=float("nan"), iterations=0, method="active-set"
        )

    e_rows, e_rhs, g_rows, g_rhs = _inequalities(qp)
    x = start.x.copy()
    tol = config.feasibility_tol
    scale = max(1.0, float(np.abs(qp.hessian).max(initial=0.0)), float(np.abs(qp.linear).max(initial=0.0)))

    working: list[int] = []
    rank = np.linalg.matrix_rank(e_rows) if e_rows.size else 0
    for i in np.flatnonzero(np.abs(g_rows @ x - g_rhs) <= tol):
        candidate = np.vstack([e_rows, g_rows[working + [int(i)]]])
        new_rank = np.linalg.matrix_rank(candidate)
        if new_rank > rank:
            working.append(int(i))
            rank = new_rank

    n_eq = e_rows.shape[0]
    nu_w = np.zeros(n_eq + len(working))
    status = SolveStatus.ITERATION_LIMIT
    iterations = 0
    for iterations in range(1, config.qp_max_iterations + 1):
        a_w = np.vstack([e_rows, g_rows[working]]).reshape(-1, n)
        grad = qp.hessian @ x + qp.linear
        p, nu_w = _kkt_solve(qp.hessian, a_w, grad)
        if np.abs(p).max(initial=0.0) <= 1e-12 * scale * max(1.0, np.abs(x).max(initial=0.0)):
            ineq_mult = nu_w[n_eq:]
            if ineq_mult.size == 0 or ineq_mult.min() >= -config.kkt_tol:
                status = SolveStatus.OPTIMAL
                break
            dropped = working.pop(int(np.argmin(ineq_mult)))
            logger.debug("Active set: drop constraint %d", dropped)
            continue

        step, blocking = 1.0, None
        outside = np.setdiff1d(np.arange(g_rows.shape[0]), working)
        if outside.size:
            rate = g_rows[outside] @ p
            room = g_rhs[outside] - g_rows[outside] @ x
            moving = rate > config.pivot_tol
            if np.any(moving):
                ratios = np.maximum(room[moving], 0.0) / rate[moving]
                k = int(np.argmin(ratios))
                if ratios[k] < step:
                    step, blocking = float(ratios[k]), int(outside[moving][k])
        x = x + step * p
        if blocking is not None:
            working.append(blocking)
            logger.debug("Active set: add constraint %d at step %.3e", blocking, step)
    else:
        logger.warning("Active-set iteration cap %d reached", config.qp_max_iterations)

    x = np.clip(x, qp.lower, qp.upper)
    mu = np.zeros(g_rows.shape[0])
    nu = np.zeros(n_eq)
    if nu_w.size == n_eq + len(working):
        mu[working] = np.maximum(nu_w[n_eq:], 0.0)
        nu = nu_w[:n_eq]
    residual = _kkt_residual(qp, x, e_rows, e_rhs, g_rows, g_rhs, nu, mu)
    if status is SolveStatus.OPTIMAL and residual > config.kkt_tol * scale:
        logger.warning("QP KKT residual %.3e above tolerance", residual)
    logger.info("QP with %d variables: %s after %d iterations", n, status.value, iterations)
    return SolveResult(
        status=status,
        x=x,
        objective=qp.value(x),
        iterations=iterations,
        duals=_row_duals(qp, nu, mu),
        method="active-set",
        kkt_residual=residual,
    )


def _row_duals(qp: QuadraticProgram, nu: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """Map E/G multipliers back onto the original rows."""
    codes = qp.feasibility_program().relation_codes()
    duals = np.zeros(codes.size)
    le, ge, eq = np.flatnonzero(codes < 0), np.flatnonzero(codes > 0), np.flatnonzero(codes == 0)
    duals[le] = -mu[: le.size]
    duals[ge] = mu[le.size : le.size + ge.size]
    duals[eq] = -nu
    return duals
