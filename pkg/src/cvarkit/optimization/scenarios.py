"""Seeded Monte Carlo scenario generation for asset losses."""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

from cvarkit.model.market import AssetUniverse, ScenarioSet
from cvarkit.rng import Stream, stream

logger = logging.getLogger(__name__)


class ShapeKind(str, Enum):
    NORMAL = "normal"
    SKEWED = "skewed"


class ScenarioShape(BaseModel):
    """Marginal shape of sampled losses.

    ``skew`` applies to every asset of a skewed draw. ``kurtosis`` is the
    requested value; the gamma generator matches mean, variance and skew
    only and logs the kurtosis it actually implies.
    """

    model_config = ConfigDict(frozen=True)

    kind: ShapeKind = ShapeKind.NORMAL
    skew: float = 0.0
    kurtosis: float = Field(default=3.0, gt=0.0)

    @classmethod
    def skewed(cls, skew: float, kurtosis: float = 3.0) -> ScenarioShape:
        return cls(kind=ShapeKind.SKEWED, skew=skew, kurtosis=kurtosis)


def psd_factor(cov: np.ndarray) -> np.ndarray:
    """A matrix L with L L' = cov.

    Uses Cholesky when cov is positive definite and the symmetric
    eigen-decomposition (negative eigenvalues clipped) when it is only
    semidefinite.

    Raises:
        ValueError: If cov has an eigenvalue below -1e-10 times its scale.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    scale = max(1.0, float(np.abs(cov).max(initial=0.0)))
    try:
        return scipy.linalg.cholesky(cov, lower=True)
    except scipy.linalg.LinAlgError:
        vals, vecs = scipy.linalg.eigh(cov)
        if vals.min() < -1e-10 * scale:
            raise ValueError(f"Covariance is not positive semidefinite (min eigenvalue {vals.min():.3e})")
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


def _skewed_losses(
    rng: np.random.Generator, mu: np.ndarray, variances: np.ndarray, skew: float, k_draws: int
) -> np.ndarray:
    """Independent shifted gamma draws matched to (mean, variance, skew) per asset."""
    if skew == 0.0:
        return mu + rng.standard_normal((k_draws, mu.size)) * np.sqrt(variances)
    shape = 4.0 / skew**2
    theta = np.sqrt(variances / shape)
    g = rng.gamma(shape, 1.0, size=(k_draws, mu.size))
    logger.debug("Gamma shape %.4f implies kurtosis %.4f", shape, 3.0 + 6.0 / shape)
    return mu + np.sign(skew) * theta * (g - shape)


def sample_scenarios(
    universe: AssetUniverse,
    k_draws: int,
    seed: int,
    shape: ScenarioShape | None = None,
) -> ScenarioSet:
    """Draw K equally weighted loss scenarios.

    Normal draws are correlated through a factor of the covariance matrix.
    Skewed draws are independent per asset and use only its variance.

    Args:
        universe: Expected losses and covariance.
        k_draws: Number of scenarios K (>= 1).
        seed: Master seed; draws come from the SCENARIOS stream.
        shape: Marginal shape, normal by default.

    Raises:
        ValueError: If K < 1 or the covariance is not PSD.
    """
    if k_draws < 1:
        raise ValueError(f"Need at least one scenario, got {k_draws}")
    shape = shape or ScenarioShape()
    rng = stream(seed, Stream.SCENARIOS)
    mu, cov = universe.mu, universe.sigma
    if shape.kind is ShapeKind.NORMAL:
        factor = psd_factor(cov)
        losses = mu + rng.standard_normal((k_draws, mu.size)) @ factor.T
    else:
        psd_factor(cov)
        losses = _skewed_losses(rng, mu, np.diag(cov).copy(), shape.skew, k_draws)
        if shape.skew != 0.0 and abs(3.0 + 1.5 * shape.skew**2 - shape.kurtosis) > 1e-9:
            logger.info(
                "Requested kurtosis %.3f; gamma draws with skew %.3f have kurtosis %.3f",
                shape.kurtosis,
                shape.skew,
                3.0 + 1.5 * shape.skew**2,
            )
    logger.info("Sampled %d %s scenarios for %d assets", k_draws, shape.kind.value, mu.size)
    return ScenarioSet(losses)
