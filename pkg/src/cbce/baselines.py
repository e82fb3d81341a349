"""Baseline meta algorithms: SAOL, AdaNormalHedge.TV, and Fixed Share.

SAOL and ATV share CBCE's run lifecycle (RunSchedule) and differ only in how
live runs are weighted and updated:

  * SAOL keeps a multiplicative weight per run, initialized to the run's
    learning rate eta_I = min(1/2, 1/sqrt(|I|)); prediction weights are the
    clipped weights normalized over the live runs, and after the loss the
    weight multiplies by (1 + eta_I * r) with r the meta-vs-run instantaneous
    regret clipped to [-1, 1].
  * ATV weights each run by the AdaNormalHedge potential of its accumulated
    signed regret R and absolute regret C:
      weight(R, C) = (Phi(R+1, C+1) - Phi(R-1, C+1)) / 2,
      Phi(R, C) = exp([R]_+^2 / (3C)), Phi(., 0) = 1.

Fixed Share is the classical N-expert tracker (no run schedule): exponential
reweighting by the losses followed by mixing alpha of the uniform back in.
Its recommended parameters need the horizon T and the shift count m.
"""

from __future__ import annotations

import math

import numpy as np

from .intervals import ScheduleKind
from .meta import MetaDecision, PriorKind, RunSchedule, _checked_loss


def saol_rate(interval_size: int) -> float:
    return min(0.5, 1.0 / math.sqrt(interval_size))


class SAOL:
    """Strongly-adaptive online learner: multiplicative weights over runs."""

    def __init__(self, schedule: ScheduleKind, blackbox_factory, warm_start: bool = False,
                 record_run_losses: bool = False):
        self.runs = RunSchedule(schedule, blackbox_factory, warm_start=warm_start,
                                record_run_losses=record_run_losses)
        self.meta_losses: list[float] = []
        self._prev_point = None
        self._pending = None

    def predict(self, t: int) -> MetaDecision:
        if self._pending is not None:
            raise RuntimeError("predict called twice without observe")
        live = self.runs.advance(t, self._prev_point)
        for run in live:
            if run.interval.start == t:
                run.weight = saol_rate(len(run.interval))
        decisions = [run.blackbox.predict(t) for run in live]
        clipped = np.array([max(run.weight, 0.0) for run in live])
        total = clipped.sum()
        weights = clipped / total if total > 0.0 else np.full(len(live), 1.0 / len(live))
        point = sum(p * d for p, d in zip(weights, decisions))
        self._pending = (t, live, decisions, point)
        return MetaDecision(point=point, run_weights={r.interval: float(p) for r, p in zip(live, weights)})

    def observe(self, t: int, loss) -> float:
        if self._pending is None or self._pending[0] != t:
            raise RuntimeError("observe must follow predict for the same step")
        _, live, decisions, point = self._pending
        self._pending = None

        meta_loss = _checked_loss(loss.value(point))
        for run, x in zip(live, decisions):
            run_loss = _checked_loss(loss.value(x))
            if run.loss_log is not None:
                run.loss_log.append(run_loss)
            r = min(1.0, max(-1.0, meta_loss - run_loss))
            run.weight = run.weight * (1.0 + saol_rate(len(run.interval)) * r)
            run.blackbox.observe(t, loss)

        self.meta_losses.append(meta_loss)
        self._prev_point = point
        return meta_loss


def anh_potential(r: float, c: float) -> float:
    """AdaNormalHedge potential Phi(R, C) = exp([R]_+^2 / (3C)), Phi(., 0) = 1."""
    if c == 0.0:
        return 1.0
    return math.exp(max(r, 0.0) ** 2 / (3.0 * c))


def anh_weight(r: float, c: float) -> float:
    return 0.5 * (anh_potential(r + 1.0, c + 1.0) - anh_potential(r - 1.0, c + 1.0))


class ATV:
    """AdaNormalHedge.TV as a meta algorithm over schedule-interval restarts."""

    def __init__(self, schedule: ScheduleKind, blackbox_factory, warm_start: bool = False,
                 prior_kind: PriorKind = PriorKind.UNIFORM, record_run_losses: bool = False):
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
        priors = np.array([run.prior_weight for run in live])
        raw = priors * np.array([anh_weight(run.signed_regret, run.abs_regret) for run in live])
        total = raw.sum()
        weights = raw / total if total > 0.0 else priors / priors.sum()
        point = sum(p * d for p, d in zip(weights, decisions))
        self._pending = (t, live, decisions, point)
        return MetaDecision(point=point, run_weights={r.interval: float(p) for r, p in zip(live, weights)})

    def observe(self, t: int, loss) -> float:
        if self._pending is None or self._pending[0] != t:
            raise RuntimeError("observe must follow predict for the same step")
        _, live, decisions, point = self._pending
        self._pending = None

        meta_loss = _checked_loss(loss.value(point))
        for run, x in zip(live, decisions):
            run_loss = _checked_loss(loss.value(x))
            if run.loss_log is not None:
                run.loss_log.append(run_loss)
            r = meta_loss - run_loss
            run.signed_regret += r
            run.abs_regret += abs(r)
            run.blackbox.observe(t, loss)

        self.meta_losses.append(meta_loss)
        self._prev_point = point
        return meta_loss


def fixed_share_parameters(n_experts: int, shifts: int, horizon: int) -> tuple[float, float]:
    """(alpha, eta) for a known shift count m and horizon T:
    alpha = m/(T-1), eta = sqrt(8 (m ln N + (m+1)) / T)."""
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    alpha = shifts / (horizon - 1)
    eta = math.sqrt(8.0 * (shifts * math.log(n_experts) + (shifts + 1)) / horizon)
    return alpha, eta


def fixed_share_step(weights: np.ndarray, losses: np.ndarray, eta: float, alpha: float) -> np.ndarray:
    """One Fixed Share update: exponential reweighting, then uniform mixing."""
    v = weights * np.exp(-eta * np.asarray(losses, dtype=float))
    v = v / v.sum()
    return alpha / len(weights) + (1.0 - alpha) * v


class FixedShare:
    """Fixed Share tracker wrapped in the predict/observe protocol."""

    def __init__(self, n_experts: int, eta: float, alpha: float):
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if eta <= 0:
            raise ValueError("eta must be > 0")
        self.weights = np.full(n_experts, 1.0 / n_experts)
        self.eta = eta
        self.alpha = alpha
        self.meta_losses: list[float] = []

    @classmethod
    def with_recommended_parameters(cls, n_experts: int, shifts: int, horizon: int) -> "FixedShare":
        alpha, eta = fixed_share_parameters(n_experts, shifts, horizon)
        return cls(n_experts, eta=eta, alpha=alpha)

    def predict(self, t: int) -> MetaDecision:
        return MetaDecision(point=self.weights.copy(), run_weights={})

    def observe(self, t: int, loss) -> float:
        meta_loss = _checked_loss(loss.value(self.weights))
        self.weights = fixed_share_step(self.weights, loss.vector, self.eta, self.alpha)
        self.meta_losses.append(meta_loss)
        return meta_loss
