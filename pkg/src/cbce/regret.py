"""Regret accounting over recorded loss trajectories.

A RegretLedger pairs the algorithm's per-step losses with per-comparator
losses over the same horizon. From it:

  * sa_regret: interval regret against the best fixed comparator on that
    interval;
  * m_shift_regret: regret against the best comparator sequence with at most
    m changes, by dynamic programming over (time, comparator, shifts used)
    with per-shift-count running minima (O(T * N * m) total);
  * conversion_bound: the generic interval-regret to shifting-regret
    conversion c * sqrt((m+1) * T * ln T).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .intervals import Interval


@dataclass(frozen=True)
class RegretLedger:
    """Per-step losses of the algorithm and of each comparator, in [0, 1]."""

    algo_losses: np.ndarray  # shape (T,)
    expert_losses: np.ndarray  # shape (T, N)

    def __post_init__(self):
        algo = np.asarray(self.algo_losses, dtype=float)
        experts = np.asarray(self.expert_losses, dtype=float)
        object.__setattr__(self, "algo_losses", algo)
        object.__setattr__(self, "expert_losses", experts)
        if algo.ndim != 1 or experts.ndim != 2 or experts.shape[0] != algo.shape[0]:
            raise ValueError("need algo losses (T,) and expert losses (T, N)")
        eps = 1e-9
        if min(algo.min(initial=0.0), experts.min(initial=0.0)) < -eps or \
           max(algo.max(initial=0.0), experts.max(initial=0.0)) > 1.0 + eps:
            raise ValueError("ledger losses must lie in [0, 1]")

    @property
    def horizon(self) -> int:
        return len(self.algo_losses)


def sa_regret(ledger: RegretLedger, interval: Interval) -> float:
    """Interval loss of the algorithm minus the best comparator's interval loss."""
    if interval.end > ledger.horizon:
        raise ValueError(f"interval {interval} exceeds horizon {ledger.horizon}")
    sl = slice(interval.start - 1, interval.end)
    return float(ledger.algo_losses[sl].sum() - ledger.expert_losses[sl].sum(axis=0).min())


def best_shifting_loss(expert_losses: np.ndarray, m: int) -> float:
    """Minimum total loss over comparator sequences changing at most m times."""
    expert_losses = np.asarray(expert_losses, dtype=float)
    horizon, _ = expert_losses.shape
    # cost[k][i]: best total loss through t ending at comparator i with <= k shifts
    cost = np.tile(expert_losses[0], (m + 1, 1))
    for t in range(1, horizon):
        best_prev = cost.min(axis=1)  # per shift budget
        stay = cost
        switch = np.concatenate(([np.inf], best_prev[:-1]))[:, None]
        cost = np.minimum(stay, switch) + expert_losses[t]
    return float(cost[m].min())


def m_shift_regret(ledger: RegretLedger, m: int) -> float:
    """Total algorithm loss minus the best at-most-m-shift comparator loss."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return float(ledger.algo_losses.sum()) - best_shifting_loss(ledger.expert_losses, m)


def conversion_bound(c: float, m: int, horizon: int) -> float:
    """c * sqrt((m+1) * T * ln T): shifting-regret bound implied by a
    per-interval bound of c * sqrt(|I| * ln(I_end))."""
    if c <= 0:
        raise ValueError("c must be > 0")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    return c * math.sqrt((m + 1) * horizon * math.log(horizon))


def load_run_csv(path) -> dict[tuple[int, str], np.ndarray]:
    """Read the experiment CSV into per-(seed, algorithm) instant-loss arrays."""
    rows: dict[tuple[int, str], list[tuple[int, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = ["seed", "t", "algorithm", "instant_loss", "cum_loss"]
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}; need {expected}")
        for row in reader:
            key = (int(row["seed"]), row["algorithm"])
            rows.setdefault(key, []).append((int(row["t"]), float(row["instant_loss"])))
    out = {}
    for key, entries in rows.items():
        entries.sort()
        out[key] = np.array([loss for _, loss in entries])
    return out


def ledger_from_csv(path, seed: int, algorithm: str, comparators: list[str]) -> RegretLedger:
    """Build a ledger from the experiment CSV, with other recorded algorithms
    serving as the comparator columns."""
    series = load_run_csv(path)
    algo = series[(seed, algorithm)]
    experts = np.column_stack([series[(seed, name)] for name in comparators])
    return RegretLedger(algo_losses=algo, expert_losses=experts)
