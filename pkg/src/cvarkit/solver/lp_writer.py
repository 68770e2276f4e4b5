"""CPLEX-style LP text dump of a LinearProgram (write-only)."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from scipy import sparse

from cvarkit.solver.programs import LinearProgram, Relation

logger = logging.getLogger(__name__)

_LINE_TERMS = 8


def _name(program: LinearProgram, j: int) -> str:
    return program.names[j] if program.names else f"x{j + 1}"


def _expression(program: LinearProgram, coefs: np.ndarray, cols: np.ndarray) -> list[str]:
    terms = []
    for k, (j, a) in enumerate(zip(cols, coefs)):
        sign = "-" if a < 0 else ("+" if k else "")
        terms.append(f"{sign} {float(abs(a))!r} {_name(program, int(j))}".strip())
    if not terms:
        terms = [f"0 {_name(program, 0)}"]
    lines = [" ".join(terms[i : i + _LINE_TERMS]) for i in range(0, len(terms), _LINE_TERMS)]
    return lines


def _bound_line(program: LinearProgram, j: int) -> str | None:
    lo, hi, name = program.lower[j], program.upper[j], _name(program, j)
    if lo == 0.0 and np.isinf(hi):
        return None
    if np.isinf(lo) and np.isinf(hi):
        return f"{name} free"
    if lo == hi:
        return f"{name} = {float(lo)!r}"
    low = "-inf" if np.isinf(lo) else repr(float(lo))
    high = "+inf" if np.isinf(hi) else repr(float(hi))
    return f"{low} <= {name} <= {high}"


def write_lp(program: LinearProgram, path: Path) -> Path:
    """Write ``program`` as Minimize / Subject To / Bounds / End sections.

    Returns:
        The path written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix = sparse.csr_array(program.matrix)
    nz = np.flatnonzero(program.objective)
    lines = ["\\ written by cvarkit", "Minimize", " obj: " + "\n      ".join(_expression(program, program.objective[nz], nz))]
    lines.append("Subject To")
    ops = {Relation.LE: "<=", Relation.EQ: "=", Relation.GE: ">="}
    for i in range(program.n_rows):
        start, stop = matrix.indptr[i], matrix.indptr[i + 1]
        body = "\n      ".join(_expression(program, matrix.data[start:stop], matrix.indices[start:stop]))
        lines.append(f" c{i + 1}: {body} {ops[program.relations[i]]} {float(program.rhs[i])!r}")
    bounds = [b for b in (_bound_line(program, j) for j in range(program.n_vars)) if b]
    if bounds:
        lines.append("Bounds")
        lines.extend(f" {b}" for b in bounds)
    lines.append("End")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote LP with %d rows and %d columns to %s", program.n_rows, program.n_vars, path)
    return path
