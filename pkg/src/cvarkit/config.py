"""Configuration management for cvarkit."""

from __future__ import annotations

import os
from enum import Enum
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

DEFAULT_SEED = 20150722


def _default_threads() -> int:
    return os.cpu_count() or 1


class LpMethod(str, Enum):
    """Which simplex path solve_lp takes."""

    AUTO = "auto"
    PRIMAL = "primal"
    DUAL = "dual"


class PricingRule(str, Enum):
    """Entering-variable rule of the simplex engine."""

    DANTZIG = "dantzig"
    BLAND = "bland"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class SolverConfig(BaseModel):
    """Tolerances and limits shared by the LP and QP solvers."""

    method: LpMethod = LpMethod.AUTO
    pricing: PricingRule = PricingRule.DANTZIG
    pivot_tol: float = 1e-9
    feasibility_tol: float = 1e-8
    optimality_tol: float = 1e-9
    bound_clamp: float = 1e-10
    refactor_every: int = Field(default=50, ge=1)
    degenerate_run: int = Field(default=50, ge=1)
    max_iterations: int = Field(default=200_000, ge=1)
    kkt_tol: float = 1e-7
    duality_gap_tol: float = 1e-7
    qp_max_iterations: int = Field(default=500, ge=1)
    # Dense primal fallback is refused above this many matrix entries.
    dense_limit: int = 25_000_000


class RunConfig(BaseModel):
    """Settings of a single CLI run."""

    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    output: Optional[Path] = None
    output_format: OutputFormat = OutputFormat.CSV
    threads: int = Field(default_factory=_default_threads, ge=1)


class Config(BaseModel):
    """Application configuration loaded from environment variables."""

    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    threads: int = Field(default_factory=_default_threads, ge=1)
    output_dir: Path = Path("./output")
    output_format: OutputFormat = OutputFormat.CSV
    solver: SolverConfig = Field(default_factory=SolverConfig)

    @classmethod
    def from_env(cls) -> Config:
        """Load configuration from environment variables."""
        solver = SolverConfig(
            method=LpMethod(os.getenv("CVARKIT_LP_METHOD", LpMethod.AUTO.value)),
            max_iterations=int(os.getenv("CVARKIT_LP_MAX_ITER", "200000")),
        )
        threads_raw = os.getenv("CVARKIT_THREADS", "")
        return cls(
            seed=int(os.getenv("CVARKIT_SEED", str(DEFAULT_SEED))),
            threads=int(threads_raw) if threads_raw else _default_threads(),
            output_dir=Path(os.getenv("CVARKIT_OUTPUT_DIR", "./output")),
            output_format=OutputFormat(os.getenv("CVARKIT_FORMAT", OutputFormat.CSV.value)),
            solver=solver,
        )

    def run_config(
        self,
        seed: Optional[int] = None,
        output: Optional[Path] = None,
        output_format: Optional[OutputFormat] = None,
        threads: Optional[int] = None,
    ) -> RunConfig:
        """Merge command-line overrides on top of the environment defaults.

        A bare file name such as ``risk.json`` is placed under ``output_dir``;
        directories and paths with a directory part are used as given.
        """
        if output is not None and output.suffix and not output.is_absolute() and output.parent == Path("."):
            output = self.output_dir / output
        return RunConfig(
            seed=self.seed if seed is None else seed,
            output=output,
            output_format=output_format or self.output_format,
            threads=threads or self.threads,
        )
