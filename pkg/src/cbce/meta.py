"""Coin Betting for Changing Environments (CBCE).

The meta algorithm runs an independent copy of a base learner on every
schedule interval and treats each live run as a sleeping expert: a run is
awake exactly on its interval. Run weights come from the coin-betting wagers
(prior * clipped wager, normalized, prior fallback when all wagers clip to
zero); the combined decision is the weighted average of the runs' decisions.
After the loss is revealed, each live run's flip is the meta loss minus the
run's loss, truncated to its positive part when the run's wager was
nonpositive, and each run's base learner sees the loss signal too.

RunSchedule carries the lifecycle shared with the baseline metas: spawning
runs at every interval start, retiring them when their interval ends, and
optional per-run loss logging for regret decomposition checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .intervals import Interval, ScheduleKind, starts_at
from .potentials import BettorState, PotentialKind, bettor_step, wager


class PriorKind(Enum):
    UNIFORM = "uniform"
    BAR_PI = "barpi"


def prior_weight(prior_kind: PriorKind, start: int) -> float:
    """Unnormalized prior mass of a run starting at the given time.

    The decaying prior is 1 / (start^2 * (1 + floor(log2 start))); its
    normalizer cancels when weights are renormalized over the active runs,
    so it is omitted.
    """
    if start < 1:
        raise ValueError("run start must be >= 1")
    if prior_kind is PriorKind.UNIFORM:
        return 1.0
    return 1.0 / (start * start * (1 + int(math.log2(start))))


@dataclass
class Run:
    """One live base-learner run tied to a schedule interval."""

    interval: Interval
    blackbox: object
    prior_weight: float
    bettor: BettorState = field(default_factory=BettorState)
    # per-step extras used by the baseline metas
    weight: float = 0.0
    signed_regret: float = 0.0
    abs_regret: float = 0.0
    loss_log: list | None = None


@dataclass(frozen=True)
class MetaDecision:
    """Combined decision plus the weighting over live runs."""

    point: np.ndarray
    run_weights: dict[Interval, float]


class RunSchedule:
    """Spawn/retire lifecycle of interval runs, shared by all meta algorithms."""

    def __init__(self, schedule: ScheduleKind, blackbox_factory, warm_start: bool = False,
                 prior_kind: PriorKind = PriorKind.UNIFORM, record_run_losses: bool = False):
        self.schedule = schedule
        self.blackbox_factory = blackbox_factory
        self.warm_start = warm_start
        self.prior_kind = prior_kind
        self.record = record_run_losses
        self.runs: list[Run] = []
        self.archived_logs: dict[Interval, tuple[int, list[float]]] = {}
        self._next_t = 1

    def advance(self, t: int, warm_hint) -> list[Run]:
        """Retire runs that ended before t, spawn the runs starting at t."""
        if t != self._next_t:
            raise RuntimeError(f"steps must be driven in order; expected t={self._next_t}, got {t}")
        self._next_t += 1
        for run in self.runs:
            if run.interval.end < t and run.loss_log is not None:
                self.archived_logs[run.interval] = (run.interval.start, run.loss_log)
        self.runs = [r for r in self.runs if r.interval.end >= t]
        hint = warm_hint if (self.warm_start and t >= 2) else None
        for iv in starts_at(self.schedule, t):
            self.runs.append(Run(
                interval=iv,
                blackbox=self.blackbox_factory(t, hint),
                prior_weight=prior_weight(self.prior_kind, t),
                loss_log=[] if self.record else None,
            ))
        return self.runs

    def run_loss_logs(self) -> dict[Interval, tuple[int, list[float]]]:
        """Per-run losses recorded so far (live runs included)."""
        logs = dict(self.archived_logs)
        for run in self.runs:
            if run.loss_log is not None:
                logs[run.interval] = (run.interval.start, run.loss_log)
        return logs


class CBCE:
    """CBCE meta algorithm over a run schedule."""

    def __init__(self, schedule: ScheduleKind, potential: PotentialKind, blackbox_factory,
                 prior_kind: PriorKind = PriorKind.UNIFORM, warm_start: bool = False,
                 record_run_losses: bool = False):
        self.potential = potential
        self.runs = RunSchedule(schedule, blackbox_factory, warm_start=warm_start,
                                prior_kind=prior_kind, record_run_losses=record_run_losses)
        self.meta_losses: list[float] = []
        self._prev_point = None
        self._pending = None

    def predict(self, t: int) -> MetaDecision:
        if self._pending is not None:
            raise RuntimeError("predict called twice without observe")
        live = self.runs.advance(t, self._prev_point)
        decisions = [run.blackbox.predict(t) for run in live]
        wagers = np.array([wager(run.bettor, self.potential) for run in live])
        priors = np.array([run.prior_weight for run in live])
        hat = priors * np.maximum(wagers, 0.0)
        total = hat.sum()
        weights = hat / total if total > 0.0 else priors / priors.sum()
        point = sum(p * d for p, d in zip(weights, decisions))
        self._pending = (t, live, decisions, wagers, weights, point)
        return MetaDecision(point=point, run_weights={r.interval: float(p) for r, p in zip(live, weights)})

    def observe(self, t: int, loss) -> float:
        """Settle step t against the revealed loss; returns the meta loss."""
        if self._pending is None or self._pending[0] != t:
            raise RuntimeError("observe must follow predict for the same step")
        _, live, decisions, wagers, _, point = self._pending
        self._pending = None

        meta_loss = _checked_loss(loss.value(point))
        for run, x, w in zip(live, decisions, wagers):
            run_loss = _checked_loss(loss.value(x))
            if run.loss_log is not None:
                run.loss_log.append(run_loss)
            r = meta_loss - run_loss
            g = r if w > 0.0 else max(r, 0.0)
            run.bettor = bettor_step(run.bettor, True, g, self.potential)
            run.blackbox.observe(t, loss)

        self.meta_losses.append(meta_loss)
        self._prev_point = point
        return meta_loss

    def run_loss_logs(self):
        return self.runs.run_loss_logs()


def _checked_loss(value: float) -> float:
    value = float(value)
    # tolerate float dust from convex combinations; reject real violations
    if not -1e-9 <= value <= 1.0 + 1e-9:
        raise ValueError(f"loss evaluator returned {value}, outside [0, 1]")
    return min(1.0, max(0.0, value))


def meta_regret_bound(potential: PotentialKind, run_interval: Interval) -> float:
    """Bound on the meta regret against the run living on a schedule interval:
    sqrt(|J| * (7 ln J_end + 5)). Stated for the KT potential with the
    decaying prior; returned for AN as well (its sharper data-dependent form
    has no explicit constants)."""
    size = len(run_interval)
    return math.sqrt(size * (7.0 * math.log(run_interval.end) + 5.0))


def sa_regret_bound(interval: Interval, alpha: float, a1: float) -> float:
    """Bound on interval regret of the combined algorithm when the base
    learner's anytime regret is a1 * t^alpha:
    4/(2^alpha - 1) * a1 * |I|^alpha + 8 * sqrt(|I| * (7 ln I_end + 5))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if a1 <= 0:
        raise ValueError("a1 must be > 0")
    size = len(interval)
    return (4.0 / (2.0**alpha - 1.0)) * a1 * size**alpha + 8.0 * math.sqrt(size * (7.0 * math.log(interval.end) + 5.0))
