"""Named, counter-based random streams.

Every random draw in cvarkit comes from a Philox generator keyed by
``(seed, stream, *index)``. Trials pass their own index, so a trial's
draws never depend on which worker thread ran it or in which order.
"""

from __future__ import annotations

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Stream identifiers, one per kind of experiment input."""

    SCENARIOS = 1
    PRICES = 2
    PHI = 3
    SIGNAL = 4
    HYPERPLANE = 5
    BENCHMARK = 6


def stream(seed: int, name: Stream, *index: int) -> np.random.Generator:
    """Return the generator for ``name`` at the given sub-stream index.

    Args:
        seed: Master seed of the run (64-bit, non-negative).
        name: Which stream to draw from.
        *index: Optional sub-stream coordinates, e.g. ``(n, trial)``.

    Returns:
        A fresh ``numpy.random.Generator`` over ``Philox``.
    """
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    key = [int(seed), int(name), *(int(i) for i in index)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))
