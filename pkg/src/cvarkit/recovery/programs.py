"""Norm-minimization recovery programs.

Exact recovery solves ``min ||x||  s.t.  Phi x = y``. Robust recovery
replaces the equality with ``||y - Phi x||_2 <= delta`` and is solved as a
sequence of LPs: the ball is first relaxed to the box
``|y - Phi x| <= delta`` and each iterate whose residual r leaves the
ball adds the cut ``r'(y - Phi x) <= delta ||r||``.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy import sparse

from cvarkit.config import SolverConfig
from cvarkit.model.recovery import NormKind, RecoveryInstance, RecoveryOutcome
from cvarkit.norms.compare import lp_norm
from cvarkit.norms.cvar_norm import cvar_norm
from cvarkit.solver import LinearProgram, Relation, solve_lp

logger = logging.getLogger(__name__)

EPS_REC = 1e-4
MAX_CUTS = 200
CUT_TOL = 1e-9


def norm_value(x: ArrayLike, norm: NormKind, alpha: Optional[float] = None) -> float:
    norm = NormKind(norm)
    if norm is NormKind.CVAR:
        return cvar_norm(x, alpha).value
    return lp_norm(x, 1.0 if norm is NormKind.L1 else np.inf)


def _norm_block(norm: NormKind, p: int, alpha: Optional[float]):
    """Objective, epigraph rows and bounds of ``min ||x||`` over ``[x, extra]``."""
    eye = sparse.identity(p, format="csc")
    if norm is NormKind.CVAR:
        # [x, c, z]: z_i - x_i + c >= 0 and z_i + x_i + c >= 0
        ones = sparse.csc_array(np.ones((p, 1)))
        rows = sparse.vstack([sparse.hstack([-eye, ones, eye]), sparse.hstack([eye, ones, eye])])
        objective = np.concatenate([np.zeros(p), [p * (1.0 - alpha)], np.ones(p)])
        lower = np.concatenate([np.full(p + 1, -np.inf), np.zeros(p)])
    elif norm is NormKind.L1:
        # [x, t]: t_i - x_i >= 0 and t_i + x_i >= 0
        rows = sparse.vstack([sparse.hstack([-eye, eye]), sparse.hstack([eye, eye])])
        objective = np.concatenate([np.zeros(p), np.ones(p)])
        lower = np.concatenate([np.full(p, -np.inf), np.zeros(p)])
    else:
        # [x, s]: s - x_i >= 0 and s + x_i >= 0
        ones = sparse.csc_array(np.ones((p, 1)))
        rows = sparse.vstack([sparse.hstack([-eye, ones]), sparse.hstack([eye, ones])])
        objective = np.concatenate([np.zeros(p), [1.0]])
        lower = np.concatenate([np.full(p, -np.inf), [0.0]])
    return objective, sparse.csc_array(rows), lower


def recovery_program(
    instance: RecoveryInstance,
    cuts: Optional[list[np.ndarray]] = None,
) -> LinearProgram:
    """LP of one recovery solve; robust instances use the box plus ``cuts``."""
    p = instance.dimension
    objective, norm_rows, lower = _norm_block(instance.norm, p, instance.alpha)
    extra = objective.size - p
    phi, y, delta = instance.phi, instance.y, instance.noise_bound
    blocks = [norm_rows]
    relations = [Relation.GE] * norm_rows.shape[0]
    rhs = [np.zeros(norm_rows.shape[0])]

    def measured(rows: np.ndarray) -> sparse.csc_array:
        return sparse.csc_array(np.hstack([rows, np.zeros((rows.shape[0], extra))]))

    if delta == 0.0:
        blocks.append(measured(phi))
        relations += [Relation.EQ] * phi.shape[0]
        rhs.append(y)
    else:
        blocks += [measured(phi), measured(phi)]
        relations += [Relation.GE] * phi.shape[0] + [Relation.LE] * phi.shape[0]
        rhs += [y - delta, y + delta]
        for g in cuts or []:
            blocks.append(measured((g @ phi)[None, :]))
            relations.append(Relation.GE)
            rhs.append(np.array([g @ y - delta]))
    return LinearProgram(
        objective=objective,
        matrix=sparse.vstack(blocks, format="csc"),
        relations=tuple(relations),
        rhs=np.concatenate(rhs),
        lower=lower,
    )


def _pull_inside(instance: RecoveryInstance, x: np.ndarray) -> np.ndarray:
    """Move x toward the least-squares point until the residual is within delta."""
    phi, y, delta = instance.phi, instance.y, instance.noise_bound
    x_ls = np.linalg.lstsq(phi, y, rcond=None)[0]
    a = y - phi @ x_ls
    if np.linalg.norm(a) > delta:
        return x
    b = (y - phi @ x) - a
    bb, ab, aa = b @ b, a @ b, a @ a
    if bb == 0.0:
        return x
    t = (-ab + np.sqrt(max(ab * ab - bb * (aa - delta * delta), 0.0))) / bb
    t = min(max(t, 0.0), 1.0)
    return x_ls + t * (x - x_ls)


def recover(
    instance: RecoveryInstance,
    truth: Optional[ArrayLike] = None,
    eps_rec: float = EPS_REC,
    config: Optional[SolverConfig] = None,
    max_cuts: int = MAX_CUTS,
) -> RecoveryOutcome:
    """Minimize the chosen norm subject to the measurements.

    ``success`` is set when ``truth`` is given:
    ``||x_hat - truth||_2 <= eps_rec * max(1, ||truth||_2)``.

    Raises:
        InfeasibleModelError: If the measurements admit no solution.
    """
    p = instance.dimension
    delta = instance.noise_bound
    cuts: list[np.ndarray] = []
    while True:
        program = recovery_program(instance, cuts)
        result = solve_lp(program, config).require_optimal(f"{instance.norm.value} recovery program")
        x_hat = result.x[:p]
        residual_vec = instance.y - instance.phi @ x_hat
        residual = float(np.linalg.norm(residual_vec))
        if delta == 0.0 or residual <= delta * (1.0 + CUT_TOL):
            break
        if len(cuts) >= max_cuts:
            logger.warning(
                "Cutting-plane cap %d reached (residual %.3g > delta %.3g); pulling inside the ball",
                max_cuts,
                residual,
                delta,
            )
            x_hat = _pull_inside(instance, x_hat)
            residual = float(np.linalg.norm(instance.y - instance.phi @ x_hat))
            break
        cuts.append(residual_vec / residual)
    objective = norm_value(x_hat, instance.norm, instance.alpha) if cuts else result.objective
    success = None
    if truth is not None:
        x_star = np.asarray(truth, dtype=float).ravel()
        tol = eps_rec * max(1.0, float(np.linalg.norm(x_star)))
        success = bool(np.linalg.norm(x_hat - x_star) <= tol)
    logger.debug(
        "%s recovery n=%d p=%d: objective %.6g, residual %.3g, cuts %d",
        instance.norm.value,
        instance.n_measurements,
        p,
        objective,
        residual,
        len(cuts),
    )
    return RecoveryOutcome(x_hat=x_hat, objective=objective, residual=residual, success=success, cuts=len(cuts))


def project_hyperplane(
    g: ArrayLike, rhs: float, alpha: float, config: Optional[SolverConfig] = None
) -> np.ndarray:
    """Minimize the CVaR norm on ``g'x = rhs`` and scale the minimizer to norm 1.

    Raises:
        ValueError: If g is zero or rhs is zero.
    """
    normal = np.asarray(g, dtype=float).ravel()
    if not np.any(normal) or rhs == 0.0:
        raise ValueError("Hyperplane needs a nonzero normal and a nonzero offset")
    instance = RecoveryInstance(phi=normal[None, :], y=np.array([rhs]), norm=NormKind.CVAR, alpha=alpha)
    outcome = recover(instance, config=config)
    return outcome.x_hat / outcome.objective
