"""Linear and quadratic program containers and solve results."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike
from scipy import sparse

Matrix = Union[np.ndarray, sparse.csc_array]


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    INFEASIBLE_OR_UNBOUNDED = "infeasible_or_unbounded"
    ITERATION_LIMIT = "iteration_limit"


class InfeasibleModelError(RuntimeError):
    """Raised when a program that must be solved has no optimal solution."""

    def __init__(self, message: str, status: SolveStatus = SolveStatus.INFEASIBLE) -> None:
        super().__init__(message)
        self.status = status


def _bounds(n: int, lower: Optional[ArrayLike], upper: Optional[ArrayLike]) -> tuple[np.ndarray, np.ndarray]:
    lo = np.zeros(n) if lower is None else np.asarray(lower, dtype=float).ravel().copy()
    hi = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float).ravel().copy()
    if lo.size != n or hi.size != n:
        raise ValueError(f"Bounds must have {n} entries")
    if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo == np.inf) or np.any(hi == -np.inf):
        raise ValueError("Invalid variable bounds")
    if np.any(lo > hi):
        raise ValueError("A lower bound exceeds its upper bound")
    return lo, hi


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """min c'x  s.t.  A_i x (<=, =, >=) b_i,  lower <= x <= upper.

    ``matrix`` may be dense or a scipy sparse array; sparse input is kept in
    CSC form. Bounds default to ``0 <= x < inf``.
    """

    objective: np.ndarray
    matrix: Matrix
    relations: tuple[Relation, ...]
    rhs: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        c = np.asarray(self.objective, dtype=float).ravel()
        n = c.size
        if sparse.issparse(self.matrix):
            a = sparse.csc_array(self.matrix, dtype=float)
            a.eliminate_zeros()
            finite = np.all(np.isfinite(a.data))
        else:
            a = np.asarray(self.matrix, dtype=float)
            if a.size == 0:
                a = a.reshape(0, n)
            a = np.atleast_2d(a)
            finite = np.all(np.isfinite(a))
        b = np.asarray(self.rhs, dtype=float).ravel()
        rel = tuple(Relation(r) for r in self.relations)
        if a.shape[1] != n:
            raise ValueError(f"Constraint matrix has {a.shape[1]} columns for {n} variables")
        if a.shape[0] != b.size or b.size != len(rel):
            raise ValueError(
                f"{a.shape[0]} rows, {b.size} right-hand sides and {len(rel)} relations"
            )
        if not (finite and np.all(np.isfinite(c)) and np.all(np.isfinite(b))):
            raise ValueError("Program coefficients must be finite")
        lo, hi = _bounds(n, self.lower, self.upper)
        if self.names is not None and len(self.names) != n:
            raise ValueError(f"{len(self.names)} names for {n} variables")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_rows(
        cls,
        objective: ArrayLike,
        rows: Sequence[tuple[ArrayLike, Union[Relation, str], float]] = (),
        bounds: Optional[Sequence[tuple[float, float]]] = None,
    ) -> LinearProgram:
        """Build from ``(row, relation, rhs)`` triples and ``(lower, upper)`` pairs."""
        c = np.asarray(objective, dtype=float).ravel()
        matrix = np.array([np.asarray(r, dtype=float).ravel() for r, _, _ in rows]).reshape(len(rows), c.size)
        lower = upper = None
        if bounds is not None:
            lower = np.array([lo for lo, _ in bounds], dtype=float)
            upper = np.array([hi for _, hi in bounds], dtype=float)
        return cls(
            objective=c,
            matrix=matrix,
            relations=tuple(Relation(rel) for _, rel, _ in rows),
            rhs=np.array([rhs for _, _, rhs in rows], dtype=float),
            lower=lower,
            upper=upper,
        )

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.rhs.size

    def relation_codes(self) -> np.ndarray:
        """+1 for >=, -1 for <=, 0 for = rows."""
        lookup = {Relation.GE: 1, Relation.LE: -1, Relation.EQ: 0}
        return np.fromiter((lookup[r] for r in self.relations), dtype=int, count=self.n_rows)

    def max_violation(self, x: ArrayLike) -> float:
        """Largest constraint or bound violation at ``x``."""
        x = np.asarray(x, dtype=float)
        worst = float(max(0.0, np.max(self.lower - x, initial=0.0), np.max(x - self.upper, initial=0.0)))
        if self.n_rows == 0:
            return worst
        act = self.matrix @ x
        codes = self.relation_codes()
        gap = act - self.rhs
        viol = np.where(codes > 0, -gap, np.where(codes < 0, gap, np.abs(gap)))
        return max(worst, float(np.max(viol, initial=0.0)))


@dataclass(frozen=True, eq=False)
class QuadraticProgram:
    """min 1/2 x'Hx + f'x under the same constraint form as LinearProgram."""

    hessian: np.ndarray
    linear: np.ndarray
    matrix: np.ndarray
    relations: tuple[Relation, ...]
    rhs: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        h = np.atleast_2d(np.asarray(self.hessian, dtype=float))
        n = h.shape[0]
        if h.shape != (n, n):
            raise ValueError(f"Hessian must be square, got {h.shape}")
        scale = max(1.0, float(np.abs(h).max(initial=0.0)))
        if np.abs(h - h.T).max(initial=0.0) > 1e-12 * scale:
            raise ValueError("Hessian is not symmetric")
        if n and scipy.linalg.eigvalsh(h).min() < -1e-9 * scale:
            raise ValueError("Hessian is not positive semidefinite")
        object.__setattr__(self, "hessian", (h + h.T) / 2.0)
        # Validate the constraint part through LinearProgram.
        lp = self.feasibility_program(np.asarray(self.linear, dtype=float).ravel())
        object.__setattr__(self, "linear", lp.objective)
        object.__setattr__(self, "matrix", np.asarray(lp.matrix.toarray() if sparse.issparse(lp.matrix) else lp.matrix))
        object.__setattr__(self, "relations", lp.relations)
        object.__setattr__(self, "rhs", lp.rhs)
        object.__setattr__(self, "lower", lp.lower)
        object.__setattr__(self, "upper", lp.upper)

    def feasibility_program(self, objective: Optional[np.ndarray] = None) -> LinearProgram:
        n = self.hessian.shape[0]
        return LinearProgram(
            objective=np.zeros(n) if objective is None else objective,
            matrix=self.matrix,
            relations=self.relations,
            rhs=self.rhs,
            lower=self.lower,
            upper=self.upper,
        )

    def value(self, x: np.ndarray) -> float:
        return float(0.5 * x @ self.hessian @ x + self.linear @ x)


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Outcome of a solve.

    ``duals`` are row multipliers, >= 0 on >= rows and <= 0 on <= rows.
    ``dual_objective`` is rebuilt from them and the bounds.
    """

    status: SolveStatus
    x: np.ndarray
    objective: float
    iterations: int
    duals: Optional[np.ndarray] = None
    dual_objective: Optional[float] = None
    method: str = ""
    kkt_residual: Optional[float] = None

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def require_optimal(self, what: str = "program") -> SolveResult:
        """Return self, or raise InfeasibleModelError for any other status."""
        if not self.optimal:
            raise InfeasibleModelError(f"{what} is {self.status.value}", self.status)
        return self
