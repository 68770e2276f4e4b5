"""Bounded-variable revised simplex on ``min g'v  s.t.  Mv = h,  l <= v <= u``.

The engine keeps an explicit basis inverse updated in product form and
refactored every ``refactor_every`` pivots. Nonbasic variables sit at a
finite bound (free ones at zero); the ratio test allows bound flips, so
boxed variables change sides without a basis change.

Phase 1 starts from a crash basis: one singleton column per row where its
bounds allow, an artificial column elsewhere.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from cvarkit.config import PricingRule, SolverConfig
from cvarkit.solver.programs import SolveStatus

logger = logging.getLogger(__name__)

_STEP_ZERO = 1e-12


@dataclass(frozen=True, eq=False)
class EngineResult:
    status: SolveStatus
    values: np.ndarray
    objective: float
    row_duals: np.ndarray
    reduced_costs: np.ndarray
    iterations: int


class BoundedSimplex:
    """One solve of an equality-form program with simple bounds.

    Args:
        matrix: Dense m x N constraint matrix.
        rhs: Right-hand side h.
        cost: Cost vector g.
        lower: Lower bounds (``-inf`` allowed).
        upper: Upper bounds (``inf`` allowed).
        config: Solver tolerances and limits.
    """

    def __init__(
        self,
        matrix: np.ndarray,
        rhs: np.ndarray,
        cost: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
        config: Optional[SolverConfig] = None,
    ) -> None:
        self.config = config or SolverConfig()
        self.m, self.n = matrix.shape
        self.rhs = np.asarray(rhs, dtype=float)
        self.cost = np.asarray(cost, dtype=float)
        self.iterations = 0

        self.lower = np.concatenate([lower, np.zeros(self.m)])
        self.upper = np.concatenate([upper, np.full(self.m, np.inf)])
        self.values = np.where(
            np.isfinite(lower), lower, np.where(np.isfinite(upper), upper, 0.0)
        ).astype(float)
        residual = self.rhs - matrix @ self.values
        signs = np.where(residual >= 0.0, 1.0, -1.0)
        self.full = np.hstack([matrix, np.diag(signs)]) if self.m else matrix.reshape(0, self.n)
        self.values = np.concatenate([self.values, np.abs(residual)])

        self.basis = self.n + np.arange(self.m)
        self._crash(matrix, residual)
        self.is_basic = np.zeros(self.n + self.m, dtype=bool)
        self.is_basic[self.basis] = True
        self.at_upper = np.zeros(self.n + self.m, dtype=bool)
        self.at_upper[: self.n] = ~np.isfinite(lower) & np.isfinite(upper)
        self._refactor()

    def _crash(self, matrix: np.ndarray, residual: np.ndarray) -> None:
        """Swap artificials for singleton columns that absorb their row's residual."""
        if not self.m:
            return
        nnz = np.count_nonzero(matrix, axis=0)
        used: set[int] = set()
        for j in np.flatnonzero(nnz == 1):
            i = int(np.flatnonzero(matrix[:, j])[0])
            if i in used:
                continue
            target = self.values[j] + residual[i] / matrix[i, j]
            if self.lower[j] - 1e-12 <= target <= self.upper[j] + 1e-12:
                self.values[j] = target
                self.values[self.n + i] = 0.0
                self.basis[i] = j
                used.add(i)

    def _refactor(self) -> None:
        if not self.m:
            self.binv = np.zeros((0, 0))
            return
        try:
            self.binv = scipy.linalg.inv(self.full[:, self.basis])
        except (scipy.linalg.LinAlgError, ValueError):
            logger.warning("Basis refactorisation failed; keeping the updated inverse")
            return
        nonbasic = ~self.is_basic
        rest = self.rhs - self.full[:, nonbasic] @ self.values[nonbasic]
        self.values[self.basis] = self.binv @ rest

    def _price(self, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pi = self.binv.T @ g[self.basis]
        return pi, g - self.full.T @ pi

    def _candidates(self, d: np.ndarray, tol: float) -> np.ndarray:
        """Score per column; positive where entering improves the objective."""
        movable = ~self.is_basic & (self.upper > self.lower)
        free = ~np.isfinite(self.lower) & ~np.isfinite(self.upper)
        score = np.where(self.at_upper, d, -d)
        score = np.where(free, np.abs(d), score)
        return np.where(movable & (score > tol), score, 0.0)

    def _run(self, g: np.ndarray, phase: int) -> SolveStatus:
        cfg = self.config
        tol = cfg.optimality_tol * max(1.0, float(np.abs(g).max(initial=0.0)))
        bland = cfg.pricing is PricingRule.BLAND
        degenerate = 0
        since_refactor = 0
        while True:
            if self.iterations >= cfg.max_iterations:
                logger.warning("Simplex iteration cap %d reached in phase %d", cfg.max_iterations, phase)
                return SolveStatus.ITERATION_LIMIT
            pi, d = self._price(g)
            score = self._candidates(d, tol)
            eligible = np.flatnonzero(score)
            if eligible.size == 0:
                return SolveStatus.OPTIMAL
            q = int(eligible[0]) if bland else int(np.argmax(score))
            direction = -1.0 if d[q] > 0 else 1.0

            w = self.binv @ self.full[:, q]
            step, row, hits_upper = self._ratio_test(q, w * direction, bland)
            if step == np.inf:
                return SolveStatus.UNBOUNDED

            self.iterations += 1
            self.values[self.basis] -= step * direction * w
            self.values[q] += step * direction
            if row < 0:
                self.at_upper[q] = not self.at_upper[q]
                self.values[q] = self.upper[q] if self.at_upper[q] else self.lower[q]
            else:
                self._pivot(q, row, w, hits_upper)
                since_refactor += 1
                if since_refactor >= cfg.refactor_every:
                    self._refactor()
                    since_refactor = 0

            degenerate = degenerate + 1 if step <= _STEP_ZERO else 0
            if not bland and degenerate >= cfg.degenerate_run:
                logger.debug("Degenerate run of %d pivots; switching to Bland's rule", degenerate)
                bland = True

    def _ratio_test(self, q: int, move: np.ndarray, bland: bool) -> tuple[float, int, bool]:
        """Largest step along the entering direction.

        Returns ``(step, row, hits_upper)``; ``row = -1`` means the entering
        variable flips to its opposite bound.
        """
        pivot_tol = self.config.pivot_tol
        flip = self.upper[q] - self.lower[q]
        if not self.m:
            return flip, -1, False
        basic_vals = self.values[self.basis]
        lo, hi = self.lower[self.basis], self.upper[self.basis]
        with np.errstate(divide="ignore", invalid="ignore"):
            down = np.where((move > pivot_tol) & np.isfinite(lo), (basic_vals - lo) / move, np.inf)
            up = np.where((move < -pivot_tol) & np.isfinite(hi), (hi - basic_vals) / -move, np.inf)
        ratios = np.maximum(np.minimum(down, up), 0.0)
        best = float(ratios.min())
        if flip <= best:
            return flip, -1, False
        ties = np.flatnonzero(ratios <= best + _STEP_ZERO * max(1.0, best))
        if bland:
            row = int(ties[np.argmin(self.basis[ties])])
        else:
            row = int(ties[np.argmax(np.abs(move[ties]))])
        return best, row, bool(up[row] <= down[row])

    def _pivot(self, q: int, row: int, w: np.ndarray, hits_upper: bool) -> None:
        leaving = int(self.basis[row])
        self.values[leaving] = self.upper[leaving] if hits_upper else self.lower[leaving]
        self.at_upper[leaving] = hits_upper
        self.is_basic[leaving] = False
        self.is_basic[q] = True
        self.at_upper[q] = False
        self.basis[row] = q
        pivot_row = self.binv[row] / w[row]
        self.binv -= np.outer(w, pivot_row)
        self.binv[row] = pivot_row

    def solve(self) -> EngineResult:
        """Run both phases and return the clipped solution with its duals."""
        cfg = self.config
        n = self.n
        artificial_cost = np.concatenate([np.zeros(n), np.ones(self.m)])
        status = SolveStatus.OPTIMAL
        if np.any(self.basis >= n):
            status = self._run(artificial_cost, phase=1)
            infeasibility = float(self.values[n:].sum())
            limit = cfg.feasibility_tol * max(1.0, float(np.abs(self.rhs).max(initial=0.0)))
            if status is SolveStatus.OPTIMAL and infeasibility > limit:
                logger.info("Phase 1 ended with infeasibility %.3e", infeasibility)
                status = SolveStatus.INFEASIBLE
        self.upper[n:] = 0.0
        self.values[n:] = np.clip(self.values[n:], 0.0, 0.0)
        self.at_upper[n:] = False

        g = np.concatenate([self.cost, np.zeros(self.m)])
        if status is SolveStatus.OPTIMAL:
            self._refactor()
            status = self._run(g, phase=2)
        self._refactor()
        pi, d = self._price(g)
        values = np.clip(self.values[:n], self.lower[:n], self.upper[:n])
        logger.debug("Simplex %s after %d iterations (%d x %d)", status.value, self.iterations, self.m, n)
        return EngineResult(
            status=status,
            values=values,
            objective=float(self.cost @ values),
            row_duals=pi,
            reduced_costs=d[:n],
            iterations=self.iterations,
        )
