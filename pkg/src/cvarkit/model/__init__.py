"""Domain models shared across cvarkit modules."""

from cvarkit.model.distributions import DiscreteLoss, RiskReport, TailDecomposition
from cvarkit.model.market import (
    AssetUniverse,
    Book,
    HedgeProblem,
    HedgeResult,
    LossReport,
    OptimalPortfolio,
    OptionKind,
    OptionQuote,
    Position,
    ScenarioSet,
    Side,
)
from cvarkit.model.norms import NormBreakdown, NormQuery, ProximityResult
from cvarkit.model.recovery import (
    AlphaBracket,
    AtomKind,
    AtomLabel,
    AtomSet,
    NormKind,
    RecoveryInstance,
    RecoveryOutcome,
    SweepResult,
    SweepRow,
)

__all__ = [
    "AlphaBracket",
    "AssetUniverse",
    "AtomKind",
    "AtomLabel",
    "AtomSet",
    "Book",
    "DiscreteLoss",
    "HedgeProblem",
    "HedgeResult",
    "LossReport",
    "NormBreakdown",
    "NormKind",
    "NormQuery",
    "OptimalPortfolio",
    "OptionKind",
    "OptionQuote",
    "Position",
    "ProximityResult",
    "RecoveryInstance",
    "RecoveryOutcome",
    "RiskReport",
    "ScenarioSet",
    "Side",
    "SweepResult",
    "SweepRow",
    "TailDecomposition",
]
