"""Atom sets, recovery instances and sweep results."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator


class AlphaBracket(str, Enum):
    """Alpha ranges on which the CVaR norm has a two-term closed form."""

    HIGH = "high"  # (p-2)/p < alpha < (p-1)/p
    LOW = "low"  # 0 < alpha < 1/p


class AtomSet(BaseModel):
    """Unit vectors and scaled sign vectors of dimension p.

    Members are ``+-e_i`` and ``b / (p (1 - alpha))`` for every
    ``b in {-1, +1}^p``; membership is tested structurally.
    """

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(ge=2)
    alpha: float

    @model_validator(mode="after")
    def _check_bracket(self) -> AtomSet:
        p = self.dimension
        high = (p - 2) / p < self.alpha < (p - 1) / p
        low = 0.0 < self.alpha < 1.0 / p
        if not (high or low):
            raise ValueError(
                f"alpha={self.alpha} is outside both ((p-2)/p, (p-1)/p) and (0, 1/p) for p={p}"
            )
        return self

    @property
    def bracket(self) -> AlphaBracket:
        p = self.dimension
        if (p - 2) / p < self.alpha < (p - 1) / p:
            return AlphaBracket.HIGH
        return AlphaBracket.LOW

    @property
    def binary_scale(self) -> float:
        return 1.0 / (self.dimension * (1.0 - self.alpha))


class AtomKind(str, Enum):
    UNIT = "unit"
    BINARY = "binary"
    NONE = "none"


@dataclass(frozen=True)
class AtomLabel:
    """Which atom a point was classified as.

    ``index`` is zero-based; the printed label is one-based (``+e1``).
    """

    kind: AtomKind
    index: Optional[int] = None
    sign: Optional[int] = None
    signs: Optional[tuple[int, ...]] = None

    @property
    def label(self) -> str:
        if self.kind is AtomKind.UNIT:
            return f"{'+' if self.sign > 0 else '-'}e{self.index + 1}"
        if self.kind is AtomKind.BINARY:
            return "b(" + ",".join("+1" if s > 0 else "-1" for s in self.signs) + ")"
        return "other"


class NormKind(str, Enum):
    """Norm minimized by a recovery program."""

    CVAR = "cvar"
    L1 = "l1"
    LINF = "linf"


@dataclass(frozen=True, eq=False)
class RecoveryInstance:
    """Measurement map, observation and norm of one recovery solve."""

    phi: np.ndarray
    y: np.ndarray
    norm: NormKind
    alpha: Optional[float] = None
    noise_bound: float = 0.0

    def __post_init__(self) -> None:
        phi = np.atleast_2d(np.asarray(self.phi, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if phi.shape[0] != y.size:
            raise ValueError(f"Phi has {phi.shape[0]} rows but y has {y.size} entries")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(y))):
            raise ValueError("Recovery data must be finite")
        if self.noise_bound < 0:
            raise ValueError(f"noise_bound must be >= 0, got {self.noise_bound}")
        norm = NormKind(self.norm)
        if norm is NormKind.CVAR and (self.alpha is None or not 0.0 <= self.alpha < 1.0):
            raise ValueError("The CVaR norm needs alpha in [0, 1)")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "norm", norm)

    @property
    def n_measurements(self) -> int:
        return self.phi.shape[0]

    @property
    def dimension(self) -> int:
        return self.phi.shape[1]


@dataclass(frozen=True, eq=False)
class RecoveryOutcome:
    x_hat: np.ndarray
    objective: float
    residual: float
    success: Optional[bool] = None
    cuts: int = 0


@dataclass(frozen=True)
class SweepRow:
    norm: str
    signal: str
    n: int
    trials: int
    successes: int

    @property
    def probability(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class SweepResult:
    """Empirical recovery probability per (norm, signal, n)."""

    rows: tuple[SweepRow, ...]
    eps_rec: float

    def probability(self, n: int, norm: Optional[str] = None) -> float:
        for row in self.rows:
            if row.n == n and (norm is None or row.norm == norm):
                return row.probability
        raise KeyError(f"No sweep row for n={n}, norm={norm}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "norm": r.norm,
                    "signal": r.signal,
                    "n": r.n,
                    "trials": r.trials,
                    "successes": r.successes,
                    "probability": r.probability,
                }
                for r in self.rows
            ],
            columns=["norm", "signal", "n", "trials", "successes", "probability"],
        )
