"""Asset universes, scenario sets, option quotes and books."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_SPC = 100.0


class AssetUniverse(BaseModel):
    """Expected losses and covariance of N assets (negative loss = profit)."""

    expected_losses: list[float]
    covariance: list[list[float]]
    names: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_shapes(self) -> AssetUniverse:
        n = len(self.expected_losses)
        if n == 0:
            raise ValueError("Universe needs at least one asset")
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (n, n):
            raise ValueError(f"Covariance shape {cov.shape} does not match {n} assets")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(self.expected_losses)):
            raise ValueError("Universe entries must be finite")
        scale = max(1.0, float(np.abs(cov).max()))
        if np.abs(cov - cov.T).max() > 1e-12 * scale:
            raise ValueError("Covariance matrix is not symmetric")
        if np.linalg.eigvalsh(cov).min() < -1e-10 * scale:
            raise ValueError("Covariance matrix is not positive semidefinite")
        if self.names and len(self.names) != n:
            raise ValueError(f"{len(self.names)} names for {n} assets")
        return self

    @property
    def n_assets(self) -> int:
        return len(self.expected_losses)

    @property
    def mu(self) -> np.ndarray:
        return np.asarray(self.expected_losses, dtype=float)

    @property
    def sigma(self) -> np.ndarray:
        return np.asarray(self.covariance, dtype=float)

    @property
    def std_devs(self) -> np.ndarray:
        return np.sqrt(np.diag(self.sigma))

    @property
    def labels(self) -> list[str]:
        return self.names or [f"asset_{i + 1}" for i in range(self.n_assets)]

    @classmethod
    def from_json(cls, path: Path) -> AssetUniverse:
        """Load a ``{"expected_losses": [...], "covariance": [[...]]}`` file."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a JSON object")
        return cls.model_validate(data)


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    """K equally weighted samples of the N-asset loss vector."""

    losses: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.losses, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"Scenario matrix must be K x N with K >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Scenario losses must be finite")
        object.__setattr__(self, "losses", arr)

    @property
    def n_scenarios(self) -> int:
        return self.losses.shape[0]

    @property
    def n_assets(self) -> int:
        return self.losses.shape[1]

    def portfolio_losses(self, weights: np.ndarray) -> np.ndarray:
        return self.losses @ np.asarray(weights, dtype=float)


@dataclass(frozen=True, eq=False)
class OptimalPortfolio:
    """Weights of an optimal portfolio plus the risk figures of its program.

    ``var`` and ``cvar`` are only set by the CVaR program.
    """

    weights: np.ndarray
    std_dev: float
    expected_loss: float
    return_slack: float
    var: Optional[float] = None
    cvar: Optional[float] = None

    def binding(self, tol: float = 1e-7) -> bool:
        """Whether the required-return constraint is active."""
        return self.return_slack <= tol


class OptionKind(str, Enum):
    CALL = "call"
    PUT = "put"


class Side(str, Enum):
    LONG = "long"
    SHORT = "short"


class OptionQuote(BaseModel):
    """Mid price of a European option (no spread)."""

    model_config = ConfigDict(frozen=True)

    underlying: str
    kind: OptionKind
    strike: float = Field(gt=0)
    price: float = Field(ge=0)

    @property
    def key(self) -> tuple[str, OptionKind, float]:
        return (self.underlying, self.kind, self.strike)


class Position(BaseModel):
    """Signed number of contracts held in one option."""

    underlying: str
    kind: OptionKind
    strike: float = Field(gt=0)
    contracts: float

    @property
    def key(self) -> tuple[str, OptionKind, float]:
        return (self.underlying, self.kind, self.strike)


class Book(BaseModel):
    """A trader's option positions."""

    positions: list[Position] = Field(default_factory=list)
    spc: float = Field(default=DEFAULT_SPC, gt=0)

    def contracts_for(self, quotes: list[OptionQuote]) -> np.ndarray:
        """Contracts aligned with ``quotes``; zero where no position is held.

        Raises:
            ValueError: If a position refers to an option that is not quoted.
        """
        index = {q.key: i for i, q in enumerate(quotes)}
        contracts = np.zeros(len(quotes))
        for pos in self.positions:
            if pos.key not in index:
                raise ValueError(
                    f"No quote for {pos.underlying} {pos.kind.value} {pos.strike}"
                )
            contracts[index[pos.key]] += pos.contracts
        return contracts


@dataclass(frozen=True, eq=False)
class HedgeProblem:
    """Inputs of the CVaR hedge program.

    Attributes:
        book: Current positions.
        adjust_caps: Per-quote bound ``a`` on the adjustment, ``-a <= y <= a``.
        scenarios: M x U simulated terminal prices, columns ordered as ``underlyings``.
        underlyings: Identifier of each scenario column.
        alpha: Confidence level of the CVaR objective.
    """

    book: Book
    adjust_caps: np.ndarray
    scenarios: np.ndarray
    underlyings: tuple[str, ...]
    alpha: float = 0.95

    def __post_init__(self) -> None:
        caps = np.asarray(self.adjust_caps, dtype=float).ravel()
        prices = np.asarray(self.scenarios, dtype=float)
        if np.any(caps < 0) or not np.all(np.isfinite(caps)):
            raise ValueError("Adjustment caps must be finite and non-negative")
        if prices.ndim != 2 or prices.shape[0] < 1:
            raise ValueError(f"Scenario prices must be M x U with M >= 1, got {prices.shape}")
        if prices.shape[1] != len(self.underlyings):
            raise ValueError(
                f"{prices.shape[1]} price columns for {len(self.underlyings)} underlyings"
            )
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        object.__setattr__(self, "adjust_caps", caps)
        object.__setattr__(self, "scenarios", prices)
        object.__setattr__(self, "underlyings", tuple(self.underlyings))


class LossReport(BaseModel):
    """Scenario loss statistics of a book."""

    mean_loss: float
    min_loss: float
    max_loss: float
    prob_loss: float
    var: float
    cvar: float


@dataclass(frozen=True, eq=False)
class HedgeResult:
    adjustments: np.ndarray
    before: LossReport
    after: LossReport
    objective: float
    var: float = float("nan")
