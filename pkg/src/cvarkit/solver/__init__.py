"""Embedded LP and QP solvers."""

from cvarkit.solver.lp import solve_lp
from cvarkit.solver.lp_writer import write_lp
from cvarkit.solver.programs import (
    InfeasibleModelError,
    LinearProgram,
    QuadraticProgram,
    Relation,
    SolveResult,
    SolveStatus,
)
from cvarkit.solver.qp import solve_qp

__all__ = [
    "InfeasibleModelError",
    "LinearProgram",
    "QuadraticProgram",
    "Relation",
    "SolveResult",
    "SolveStatus",
    "solve_lp",
    "solve_qp",
    "write_lp",
]
