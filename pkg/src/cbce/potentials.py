"""Coin-betting potentials (Krichevsky-Trofimov and AdaptiveNormal).

A bettor starts with wealth 1 and at each awake step wagers a signed fraction
of its wealth on the next flip z in [-1, 1]; wealth evolves as
wealth' = wealth * (1 + z * beta). The potential F of the flip history is a
lower bound on the wealth achieved by betting the potential's own fraction.

Betting fractions use the closed forms

    KT:  beta = flip_sum / (awake_count + delta)
    AN:  beta = 2*sigmoid(2*flip_sum / (xi + abs_flip_sum + 1)) - 1

where for KT the awake count includes the step currently being bet on, while
flip sums reflect history strictly before it.

All state fields may be scalars or aligned numpy arrays; every operation is
elementwise, so one BettorState can batch any number of independent bettors.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln


@dataclass(frozen=True)
class KTPotential:
    """Krichevsky-Trofimov potential; delta is the nonnegative time shift."""

    delta: float = 0.0

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


@dataclass(frozen=True)
class ANPotential:
    """AdaptiveNormal potential; xi > 0 is a minor smoothing parameter."""

    xi: float = 1.0

    def __post_init__(self):
        if self.xi <= 0:
            raise ValueError(f"xi must be > 0, got {self.xi}")


PotentialKind = KTPotential | ANPotential


@dataclass(frozen=True)
class BettorState:
    """Per-bettor coin-betting state (fields scalar or aligned arrays).

    flip_sum:      sum of signed flips z seen so far
    abs_flip_sum:  sum of |z| seen so far
    awake_count:   number of awake steps so far
    wealth:        1 + sum of z_s * w_s over past steps
    pending_wager: wager used at the most recent awake step
    an_penalty:    running AN penalty sum |z_s| / (2*(xi + abs_before + 1)),
                   maintained incrementally so potential evaluation is O(1)
    """

    flip_sum: float | np.ndarray = 0.0
    abs_flip_sum: float | np.ndarray = 0.0
    awake_count: int | np.ndarray = 0
    wealth: float | np.ndarray = 1.0
    pending_wager: float | np.ndarray = 0.0
    an_penalty: float | np.ndarray = 0.0


def fresh_state(n: int | None = None) -> BettorState:
    """A zero-history bettor; batched over n bettors when n is given."""
    if n is None:
        return BettorState()
    z = np.zeros(n)
    return BettorState(
        flip_sum=z.copy(),
        abs_flip_sum=z.copy(),
        awake_count=np.zeros(n, dtype=int),
        wealth=np.ones(n),
        pending_wager=z.copy(),
        an_penalty=z.copy(),
    )


class PotentialOverflowError(OverflowError):
    """Potential value exceeds the double exponent range; carries the log."""

    def __init__(self, log_value):
        super().__init__(f"potential overflows double precision; log value {log_value}")
        self.log_value = log_value


def betting_fraction(state: BettorState, kind: PotentialKind):
    """Signed betting fraction in (-1, 1).

    For KT, state.awake_count must already include the step being bet on;
    for AN, all fields reflect history through the previous step.
    """
    if isinstance(kind, KTPotential):
        return state.flip_sum / (state.awake_count + kind.delta)
    return np.tanh(state.flip_sum / (kind.xi + state.abs_flip_sum + 1.0))


def wager(state: BettorState, kind: PotentialKind):
    """Amount wagered at the current step by an awake bettor: beta * wealth.

    state reflects history through the previous step; the KT awake-count
    shift (current step included in the clock) is applied here.
    """
    if isinstance(kind, KTPotential):
        beta = state.flip_sum / (state.awake_count + 1 + kind.delta)
    else:
        beta = betting_fraction(state, kind)
    return beta * state.wealth


def log_potential_value(state: BettorState, kind: PotentialKind):
    """log F of the complete flip history recorded in state."""
    if isinstance(kind, KTPotential):
        s = np.asarray(state.awake_count, dtype=float)
        z = np.asarray(state.flip_sum, dtype=float)
        d = kind.delta
        half = (s + d + 1.0) / 2.0
        out = (
            s * math.log(2.0)
            + gammaln(d + 1.0)
            + gammaln(half + z / 2.0)
            + gammaln(half - z / 2.0)
            - 2.0 * gammaln((d + 1.0) / 2.0)
            - gammaln(s + d + 1.0)
        )
    else:
        z = np.asarray(state.flip_sum, dtype=float)
        out = z * z / (2.0 * (kind.xi + np.asarray(state.abs_flip_sum, dtype=float))) - state.an_penalty
    return out if out.ndim else float(out)


def potential_value(state: BettorState, kind: PotentialKind):
    """F of the complete flip history; raises PotentialOverflowError if exp overflows."""
    log_f = log_potential_value(state, kind)
    if np.any(np.asarray(log_f) > 709.0):
        raise PotentialOverflowError(log_f)
    out = np.exp(log_f)
    return out if np.ndim(out) else float(out)


def bettor_step(state: BettorState, awake, z, kind: PotentialKind) -> BettorState:
    """Advance one step: bet wager(state), observe flip z, settle wealth.

    awake and z may be scalars or arrays; asleep positions must carry z = 0
    and are left untouched.
    """
    z = np.asarray(z) if np.ndim(z) else z
    if np.any(np.abs(z) > 1.0):
        raise ValueError("flips must lie in [-1, 1]")
    if np.any(np.logical_and(np.logical_not(awake), np.asarray(z) != 0.0)):
        raise ValueError("sleeping steps must carry z = 0")

    w = wager(state, kind)
    xi = kind.xi if isinstance(kind, ANPotential) else 1.0
    penalty_inc = np.abs(z) / (2.0 * (xi + state.abs_flip_sum + 1.0))

    def pick(new, old):
        if np.ndim(awake) == 0:
            return new if awake else old
        return np.where(awake, new, old)

    return BettorState(
        flip_sum=pick(state.flip_sum + z, state.flip_sum),
        abs_flip_sum=pick(state.abs_flip_sum + np.abs(z), state.abs_flip_sum),
        awake_count=pick(state.awake_count + 1, state.awake_count),
        wealth=pick(state.wealth + z * w, state.wealth),
        pending_wager=pick(w, state.pending_wager),
        an_penalty=pick(state.an_penalty + penalty_inc, state.an_penalty),
    )


def extend_history(state: BettorState, z, kind: PotentialKind) -> BettorState:
    """State for the history with one extra awake flip z appended.

    Bookkeeping only (no wealth settlement): used to evaluate the potential
    of hypothetical continuations, e.g. the ratio form of the fraction.
    """
    xi = kind.xi if isinstance(kind, ANPotential) else 1.0
    return dataclasses.replace(
        state,
        flip_sum=state.flip_sum + z,
        abs_flip_sum=state.abs_flip_sum + abs(z),
        awake_count=state.awake_count + 1,
        an_penalty=state.an_penalty + abs(z) / (2.0 * (xi + state.abs_flip_sum + 1.0)),
    )


def fraction_from_ratio(state: BettorState, kind: PotentialKind):
    """Betting fraction via the potential ratio (F(z,+1)-F(z,-1))/(F(z,+1)+F(z,-1)).

    Evaluated in log space: the ratio equals tanh((log F+ - log F-)/2).
    state reflects history through the previous step; for KT the current
    awake step is appended here, matching the sleeping clock convention.
    """
    log_up = log_potential_value(extend_history(state, +1.0, kind), kind)
    log_dn = log_potential_value(extend_history(state, -1.0, kind), kind)
    return np.tanh((log_up - log_dn) / 2.0)
