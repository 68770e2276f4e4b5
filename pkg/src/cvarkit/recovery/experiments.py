"""Recovery experiments: signals, measurement maps, sweeps and bounds.

Signals are drawn from the SIGNAL stream indexed by trial and measurement
maps from the PHI stream indexed by ``(n, trial)``, so every norm in a
sweep sees the same ``(x*, Phi)`` pairs.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import isotonic_regression
from scipy.special import gammaln

from cvarkit.config import SolverConfig
from cvarkit.model.recovery import AtomSet, NormKind, RecoveryInstance, SweepResult, SweepRow
from cvarkit.recovery.atoms import atoms, classify_atom
from cvarkit.recovery.programs import EPS_REC, project_hyperplane, recover
from cvarkit.rng import Stream, stream

logger = logging.getLogger(__name__)

HYPERPLANE_OFFSET = 5.0
MAX_LISTED_DIMENSION = 12


class SignalKind(str, Enum):
    SPARSE = "sparse"  # sum of k signed unit vectors on distinct coordinates
    BINARY_SUM = "binary_sum"  # sum of k signed scaled sign vectors
    MIXED = "mixed"  # +e_i, -e_j and one scaled sign vector
    SINGLE_ATOM = "single_atom"  # one scaled sign vector


class SignalSpec(BaseModel):
    """What kind of true signal a sweep tries to recover."""

    model_config = ConfigDict(frozen=True)

    kind: SignalKind
    k: int = Field(default=1, ge=1)
    alpha: Optional[float] = Field(default=None, gt=0.0, lt=1.0)

    @property
    def label(self) -> str:
        if self.kind in (SignalKind.SPARSE, SignalKind.BINARY_SUM):
            return f"{self.kind.value}_k{self.k}"
        return self.kind.value

    def binary_scale(self, p: int) -> float:
        if self.alpha is None:
            raise ValueError(f"{self.kind.value} signals need alpha for the sign-vector scale")
        return 1.0 / (p * (1.0 - self.alpha))


def generate_signal(spec: SignalSpec, p: int, seed: int, trial: int) -> np.ndarray:
    """Draw the true signal of one trial."""
    rng = stream(seed, Stream.SIGNAL, trial)
    x = np.zeros(p)
    if spec.kind is SignalKind.SPARSE:
        if spec.k > p:
            raise ValueError(f"Cannot place {spec.k} spikes in dimension {p}")
        support = rng.choice(p, size=spec.k, replace=False)
        x[support] = rng.choice([-1.0, 1.0], size=spec.k)
        return x
    scale = spec.binary_scale(p)
    if spec.kind is SignalKind.MIXED:
        i, j = rng.choice(p, size=2, replace=False)
        x[i], x[j] = 1.0, -1.0
        return x + scale * rng.choice([-1.0, 1.0], size=p)
    count = spec.k if spec.kind is SignalKind.BINARY_SUM else 1
    for _ in range(count):
        x += rng.choice([-1.0, 1.0]) * scale * rng.choice([-1.0, 1.0], size=p)
    return x


def measurement_matrix(n: int, p: int, seed: int, trial: int) -> np.ndarray:
    """n x p map with i.i.d. N(0, 1/n) entries."""
    if n < 1 or p < 1:
        raise ValueError(f"Need n >= 1 and p >= 1, got n={n}, p={p}")
    return stream(seed, Stream.PHI, n, trial).normal(0.0, 1.0 / math.sqrt(n), size=(n, p))


def sweep(
    p: int,
    signal: SignalSpec,
    norms: Sequence[NormKind],
    n_grid: Iterable[int],
    trials: int,
    seed: int,
    alpha: Optional[float] = None,
    threads: int = 1,
    config: Optional[SolverConfig] = None,
) -> SweepResult:
    """Empirical exact-recovery probability per (norm, n).

    Raises:
        ValueError: If a grid point is outside [1, p] or trials < 1.
    """
    grid = [int(n) for n in n_grid]
    if any(not 1 <= n <= p for n in grid):
        raise ValueError(f"Measurement counts must lie in [1, {p}], got {grid}")
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")
    kinds = [NormKind(k) for k in norms]

    def run(task: tuple[int, int]) -> dict[NormKind, bool]:
        n, trial = task
        truth = generate_signal(signal, p, seed, trial)
        phi = measurement_matrix(n, p, seed, trial)
        y = phi @ truth
        outcome = {}
        for kind in kinds:
            instance = RecoveryInstance(
                phi=phi, y=y, norm=kind, alpha=alpha if kind is NormKind.CVAR else None
            )
            outcome[kind] = recover(instance, truth, config=config).success
        return outcome

    tasks = [(n, t) for n in grid for t in range(trials)]
    if threads <= 1:
        results = [run(task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))

    successes: Counter = Counter()
    for (n, _), outcome in zip(tasks, results):
        for kind, ok in outcome.items():
            successes[(kind, n)] += int(ok)
    rows = tuple(
        SweepRow(norm=kind.value, signal=signal.label, n=n, trials=trials, successes=successes[(kind, n)])
        for kind in kinds
        for n in grid
    )
    for row in rows:
        logger.info("%s %s n=%d: %d/%d recovered", row.norm, row.signal, row.n, row.successes, row.trials)
    return SweepResult(rows=rows, eps_rec=EPS_REC)


def projection_experiment(
    p: int,
    alpha: float,
    trials: int,
    seed: int,
    threads: int = 1,
    config: Optional[SolverConfig] = None,
) -> pd.DataFrame:
    """Share of random hyperplane projections landing on each atom.

    Every atom is listed for ``p <= 12`` (only observed atoms above),
    followed by ``other``.

    Returns:
        Frame with columns ``atom_label, ratio``.
    """
    atomset = AtomSet(dimension=p, alpha=alpha)
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")

    def run(trial: int) -> str:
        g = stream(seed, Stream.HYPERPLANE, trial).standard_normal(p)
        return classify_atom(project_hyperplane(g, HYPERPLANE_OFFSET, alpha, config), atomset).label

    if threads <= 1:
        labels = [run(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            labels = list(pool.map(run, range(trials)))
    counts = Counter(labels)
    if p <= MAX_LISTED_DIMENSION:
        order = [label.label for label, _ in atoms(atomset)]
    else:
        order = sorted(k for k in counts if k != "other")
    order.append("other")
    logger.info("Projection p=%d alpha=%g: %d of %d trials off the atom set", p, alpha, counts["other"], trials)
    return pd.DataFrame(
        {"atom_label": order, "ratio": [counts[label] / trials for label in order]},
        columns=["atom_label", "ratio"],
    )


def binary_share(projections: pd.DataFrame) -> float:
    """Total ratio of sign-vector atoms in a projection table."""
    return float(projections.loc[projections["atom_label"].str.startswith("b("), "ratio"].sum())


def monotonicity_residual(probabilities: ArrayLike) -> float:
    """Largest distance between a probability curve and its nondecreasing fit."""
    y = np.asarray(probabilities, dtype=float)
    if y.size == 0:
        return 0.0
    fit = isotonic_regression(y).x
    return float(np.max(np.abs(y - fit)))


def measurement_bounds(w_squared: float, epsilon: Optional[float] = None) -> float:
    """Measurements sufficient for recovery given the squared Gaussian width.

    Exact recovery needs ``n >= w^2 + 1``; robust recovery with error
    parameter epsilon needs ``n >= (w^2 + 3/2) / (1 - epsilon)^2``.
    """
    if w_squared < 0:
        raise ValueError(f"Squared width must be >= 0, got {w_squared}")
    if epsilon is None:
        return w_squared + 1.0
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return (w_squared + 1.5) / (1.0 - epsilon) ** 2


def l1_bound(p: int, k: int) -> float:
    """``2 k ln(p / k) + 5/4 k + 1`` measurements for a k-sparse signal under L1."""
    if not 1 <= k <= p:
        raise ValueError(f"Need 1 <= k <= p, got k={k}, p={p}")
    return 2.0 * k * math.log(p / k) + 1.25 * k + 1.0


def expected_gaussian_norm(k: int) -> float:
    """E||g||_2 for g ~ N(0, I_k)."""
    if k < 1:
        raise ValueError(f"Need k >= 1, got {k}")
    return float(math.sqrt(2.0) * math.exp(gammaln((k + 1) / 2.0) - gammaln(k / 2.0)))


def lambda_bounds(k: int) -> tuple[float, float]:
    """``k / sqrt(k + 1) <= E||g||_2 <= sqrt(k)``."""
    if k < 1:
        raise ValueError(f"Need k >= 1, got {k}")
    return k / math.sqrt(k + 1.0), math.sqrt(k)


def success_probability_bound(n: int, width: float, epsilon: float = 0.0) -> float:
    """``1 - exp(-[lambda_n - w - sqrt(n) epsilon]^2 / 2)``; 0 when the bracket is not positive."""
    gap = expected_gaussian_norm(n) - width - math.sqrt(n) * epsilon
    if gap <= 0:
        return 0.0
    return 1.0 - math.exp(-0.5 * gap * gap)
