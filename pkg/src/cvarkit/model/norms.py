"""Inputs and results of the CVaR-norm computations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class NormQuery(BaseModel):
    """A vector and the parameter alpha every norm characterization is evaluated at."""

    model_config = ConfigDict(frozen=True)

    x: tuple[float, ...] = Field(min_length=1)
    alpha: float = Field(ge=0.0, le=1.0)

    @field_validator("x")
    @classmethod
    def _finite(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not np.all(np.isfinite(value)):
            raise ValueError("Vector entries must be finite")
        return value

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def magnitudes(self) -> np.ndarray:
        """|x_i| sorted ascending (stable)."""
        return np.sort(np.abs(np.asarray(self.x, dtype=float)), kind="stable")


@dataclass(frozen=True)
class NormBreakdown:
    """Value of a norm and how it was interpolated.

    ``bracket`` is ``(alpha_j, alpha_j+1)`` when alpha falls strictly between
    grid points and ``None`` when it sits on the grid or in the max branch.
    ``weight`` is the interpolation weight on the lower grid point.
    """

    value: float
    bracket: Optional[tuple[float, float]]
    weight: float

    @property
    def on_grid(self) -> bool:
        return self.bracket is None


@dataclass(frozen=True)
class ProximityResult:
    """Bounds lower <= C_alpha(x) / ||x||_p <= upper."""

    lower: float
    upper: float
    ratio: float
    kappa: float
