"""Loss distributions and the tail/risk summaries computed from them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, model_validator

PROB_TOL = 1e-12


class DiscreteLoss(BaseModel):
    """A finite loss distribution.

    Outcomes are stored sorted ascending with duplicate values merged
    (their probabilities summed), so every quantile computation can walk
    the cumulative distribution directly.
    """

    model_config = ConfigDict(frozen=True)

    outcomes: tuple[float, ...]
    probs: tuple[float, ...]

    @model_validator(mode="before")
    @classmethod
    def _merge_outcomes(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        outcomes = np.asarray(data.get("outcomes", ()), dtype=float).ravel()
        probs = np.asarray(data.get("probs", ()), dtype=float).ravel()
        if outcomes.size == 0:
            raise ValueError("A loss distribution needs at least one outcome")
        if outcomes.shape != probs.shape:
            raise ValueError(
                f"{outcomes.size} outcomes but {probs.size} probabilities"
            )
        if not np.all(np.isfinite(outcomes)):
            raise ValueError("Outcomes must be finite")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError("Probabilities must be finite and non-negative")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"Probabilities sum to {total!r}, expected 1")
        values, inverse = np.unique(outcomes, return_inverse=True)
        merged = np.bincount(inverse.ravel(), weights=probs, minlength=values.size)
        return {"outcomes": tuple(values.tolist()), "probs": tuple(merged.tolist())}

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.outcomes, dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def cdf(self, z: float) -> float:
        """P(X <= z)."""
        mask = self.values <= z
        return float(min(1.0, self.weights[mask].sum()))

    def mean(self) -> float:
        return float(self.weights @ self.values)

    @classmethod
    def from_sample(cls, values: ArrayLike) -> DiscreteLoss:
        """Equal-probability distribution over a sample."""
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("Sample must be non-empty")
        return cls(outcomes=arr, probs=np.full(arr.size, 1.0 / arr.size))

    @classmethod
    def from_json(cls, path: Path) -> DiscreteLoss:
        """Load a ``{"outcomes": [...], "probs": [...]}`` file."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a JSON object")
        return cls(outcomes=data.get("outcomes", []), probs=data.get("probs", []))


@dataclass(frozen=True)
class TailDecomposition:
    """VaR, CVaR+ and their convex combination CVaR = lam*var + (1-lam)*cvar_plus.

    When VaR is the largest outcome there is no strict tail; then
    ``lam`` is 1 and ``cvar_plus`` repeats ``var``.
    """

    var: float
    cvar_plus: float
    lam: float
    cvar: float


class RiskReport(BaseModel):
    """Summary statistics of a loss distribution at one confidence level."""

    alpha: float
    mean: float
    std: float
    expected_loss: float
    var: float
    cvar: float
