"""Sleeping-experts aggregation driven by coin betting (Sleeping CB).

Each expert runs an independent coin-betting game on its own awake clock.
At each step the awake experts' wagers are clipped at zero, multiplied by the
prior, and normalized into a prediction; when every clipped wager is zero the
prediction falls back to the prior restricted to the awake set. After the
loss vector arrives, each awake expert's flip is its instantaneous regret
h - l_i, truncated to its positive part when the expert's wager was
nonpositive; sleeping experts receive flip 0 and their state is untouched.

Experts are batched: one BettorState with length-N array fields carries all
N per-expert games.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .potentials import BettorState, KTPotential, PotentialKind, bettor_step, fresh_state, wager

# Test hook for the check-bounds negative control: when set, update() swaps
# the two truncation branches, which breaks the aggregator's guarantees.
FLIP_TRUNCATION_FAULT = False


@dataclass(frozen=True)
class ExpertPrediction:
    """Distribution over experts (zero on sleeping ones) plus the awake mask."""

    weights: np.ndarray
    awake_mask: np.ndarray


@dataclass(frozen=True)
class SleepingCBState:
    """Prior over N experts plus their batched bettor states."""

    prior: np.ndarray
    bettors: BettorState
    kind: PotentialKind

    @property
    def n_experts(self) -> int:
        return len(self.prior)


def make_state(prior, kind: PotentialKind) -> SleepingCBState:
    prior = np.asarray(prior, dtype=float)
    if prior.ndim != 1 or np.any(prior < 0) or abs(prior.sum() - 1.0) > 1e-12:
        raise ValueError("prior must be a 1-d probability vector")
    return SleepingCBState(prior=prior, bettors=fresh_state(len(prior)), kind=kind)


def uniform_state(n_experts: int, kind: PotentialKind) -> SleepingCBState:
    return make_state(np.full(n_experts, 1.0 / n_experts), kind)


def predict(state: SleepingCBState, awake_mask) -> ExpertPrediction:
    """Weights proportional to prior * clipped wager over awake experts."""
    awake = np.asarray(awake_mask, dtype=bool)
    if awake.shape != state.prior.shape:
        raise ValueError("awake mask length must match the number of experts")
    if not awake.any():
        raise ValueError("at least one expert must be awake")

    w = wager(state.bettors, state.kind)
    hat = state.prior * awake * np.maximum(w, 0.0)
    total = hat.sum()
    if total > 0.0:
        weights = hat / total
    else:
        weights = state.prior * awake
        weights = weights / weights.sum()
    return ExpertPrediction(weights=weights, awake_mask=awake)


def update(state: SleepingCBState, pred: ExpertPrediction, losses) -> SleepingCBState:
    """Feed the loss vector back: truncated-regret flips advance every bettor."""
    losses = np.asarray(losses, dtype=float)
    if losses.shape != state.prior.shape:
        raise ValueError("loss vector length must match the number of experts")
    if np.any(losses < 0.0) or np.any(losses > 1.0):
        raise ValueError("losses must lie in [0, 1]")

    h = float(losses @ pred.weights)
    w = wager(state.bettors, state.kind)
    r = h - losses
    if FLIP_TRUNCATION_FAULT:
        g = np.where(w > 0.0, np.maximum(r, 0.0), r)
    else:
        g = np.where(w > 0.0, r, np.maximum(r, 0.0))
    z = np.where(pred.awake_mask, g, 0.0)
    return replace(state, bettors=bettor_step(state.bettors, pred.awake_mask, z, state.kind))


def step(state: SleepingCBState, awake_mask, losses):
    """predict + update in one call; returns (prediction, new state)."""
    pred = predict(state, awake_mask)
    return pred, update(state, pred, losses)


def regret_bound(kind: PotentialKind, prior_j: float, awake_steps: int, horizon: int, wealth_mass: float | None = None) -> float:
    """Upper bound on the sleeping regret against expert j.

    KT: sqrt(2 * S * (ln(1/pi_j) + ln(T)/2 + 2)) with S the expert's awake
    steps and T the horizon. AN: sqrt(2 * W * (ln(1/pi_j) + ln(W)/2)) with
    W = 1 + (expert's absolute flip mass), passed as wealth_mass.
    """
    if not 0.0 < prior_j <= 1.0:
        raise ValueError("prior_j must lie in (0, 1]")
    kl = math.log(1.0 / prior_j)
    if isinstance(kind, KTPotential):
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        return math.sqrt(2.0 * awake_steps * (kl + 0.5 * math.log(horizon) + 2.0))
    if wealth_mass is None:
        raise ValueError("AN bound needs wealth_mass = 1 + abs flip mass of expert j")
    return math.sqrt(2.0 * wealth_mass * (kl + 0.5 * math.log(wealth_mass)))
