"""Shipped fixtures and their loaders."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from cvarkit.analytics.stats import scale_horizon
from cvarkit.model.distributions import DiscreteLoss
from cvarkit.model.market import AssetUniverse, Book, OptionQuote
from cvarkit.optimization.hedging import load_book, load_option_chain

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent

CHAIN_FILES = ("yhoo_options.csv", "goog_options.csv")
BOOK_FILE = "book.csv"
MARKET_FILE = "market.json"

PathLike = Union[str, Path]


def resolve_fixture(path: PathLike) -> Path:
    """Return ``path`` if it exists, else the shipped fixture of that name.

    Raises:
        FileNotFoundError: If neither exists.
    """
    candidate = Path(path)
    if candidate.exists():
        return candidate
    shipped = DATA_DIR / candidate.name
    if shipped.exists():
        return shipped
    raise FileNotFoundError(f"Fixture not found: {path}")


class MarketData(BaseModel):
    """Spot prices, daily log-return covariance and hedge settings of the option desk."""

    underlyings: list[str] = Field(min_length=1)
    spot: list[float]
    daily_covariance: list[list[float]]
    horizon_days: int = Field(default=1, ge=1)
    bands: dict[str, tuple[float, float]] = Field(default_factory=dict)
    caps: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_shapes(self) -> MarketData:
        n = len(self.underlyings)
        if len(self.spot) != n or any(s <= 0 for s in self.spot):
            raise ValueError(f"Need {n} positive spot prices")
        if np.asarray(self.daily_covariance, dtype=float).shape != (n, n):
            raise ValueError(f"Daily covariance must be {n} x {n}")
        return self

    @property
    def horizon_covariance(self) -> np.ndarray:
        return scale_horizon(np.asarray(self.daily_covariance, dtype=float), self.horizon_days)

    def variance_of(self, underlying: str) -> float:
        i = self.underlyings.index(underlying)
        return float(self.horizon_covariance[i, i])

    def spot_of(self, underlying: str) -> float:
        return self.spot[self.underlyings.index(underlying)]


def load_market(path: Optional[PathLike] = None) -> MarketData:
    source = resolve_fixture(path or MARKET_FILE)
    data = json.loads(source.read_text(encoding="utf-8"))
    market = MarketData.model_validate(data)
    logger.debug("Loaded market data for %s from %s", ", ".join(market.underlyings), source)
    return market


def load_universe(path: PathLike) -> AssetUniverse:
    """Load an asset universe by path or by shipped name (``scenario1.json``)."""
    return AssetUniverse.from_json(resolve_fixture(path))


def load_distribution(path: PathLike) -> DiscreteLoss:
    return DiscreteLoss.from_json(resolve_fixture(path))


def load_quotes(paths: Optional[list[PathLike]] = None) -> list[OptionQuote]:
    """All quotes of the given chains, shipped chains by default."""
    quotes: list[OptionQuote] = []
    for p in paths or CHAIN_FILES:
        quotes.extend(load_option_chain(resolve_fixture(p)))
    return quotes


def load_default_book(path: Optional[PathLike] = None) -> Book:
    return load_book(resolve_fixture(path or BOOK_FILE))
