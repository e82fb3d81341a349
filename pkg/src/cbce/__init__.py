"""Parameter-free coin-betting meta algorithms for changing environments."""

from .baselines import ATV, SAOL, FixedShare
from .blackbox import FTRL, OGD, CoinBettingLEA, OCOConfig
from .intervals import DataStreaming, GeometricCovering, Interval
from .meta import CBCE, PriorKind
from .potentials import ANPotential, BettorState, KTPotential
from .regret import RegretLedger
from .scenarios import LEAScenario, OCOScenario

__version__ = "0.1.0"

__all__ = [
    "ANPotential", "ATV", "BettorState", "CBCE", "CoinBettingLEA", "DataStreaming",
    "FTRL", "FixedShare", "GeometricCovering", "Interval", "KTPotential", "LEAScenario",
    "OCOConfig", "OCOScenario", "OGD", "PriorKind", "RegretLedger", "SAOL",
]
