"""Randomized verification sweeps: realized quantities vs. their bounds.

Each sweep draws seeded random instances, measures the realized quantity and
the corresponding bound (or exact law), and reports the worst margin
observed. These back the check-bounds CLI command and the acceptance tests;
a failure indicates an implementation bug, since every inequality checked
here holds deterministically for faithful implementations.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import sleeping
from .blackbox import OCOConfig, OGD, cb_lea_factory
from .intervals import (
    DataStreaming,
    GeometricCovering,
    Interval,
    active,
    partition_ds,
    partition_gc,
    starts_at,
)
from .meta import CBCE, PriorKind, meta_regret_bound, sa_regret_bound
from .potentials import (
    ANPotential,
    KTPotential,
    betting_fraction,
    bettor_step,
    fraction_from_ratio,
    fresh_state,
    potential_value,
    wager,
)
from .regret import RegretLedger, sa_regret
from .scenarios import LinearLoss


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    violations: int = 0
    worst_margin: float = math.inf  # min over cases of (bound - realized)
    lines: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, bound: float, realized: float, tol: float = 1e-9):
        self.checked += 1
        margin = bound - realized
        if margin < self.worst_margin:
            self.worst_margin = margin
        if realized > bound + tol:
            self.violations += 1

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        worst = "n/a" if self.checked == 0 else f"{self.worst_margin:.6g}"
        return f"[{status}] {self.name}: {self.checked} cases, {self.violations} violations, worst margin {worst}"


def _random_bettor_history(rng, kind, horizon):
    n = int(rng.integers(1, horizon + 1))
    awake = rng.random(n) < 0.75
    flips = np.where(awake, rng.uniform(-1, 1, n), 0.0)
    state = fresh_state()
    for a, z in zip(awake, flips):
        state = bettor_step(state, bool(a), float(z), kind)
    return state


def check_wealth_dominance(samples: int = 1000, horizon: int = 64, seed: int = 0) -> CheckReport:
    """Final wealth >= potential value of the same flip history."""
    report = CheckReport("wealth dominance (wealth >= potential)")
    rng = np.random.default_rng(seed)
    kinds = (KTPotential(), ANPotential())
    for i in range(samples):
        kind = kinds[i % 2]
        state = _random_bettor_history(rng, kind, horizon)
        # wealth plays the bound role: violation iff potential > wealth + tol
        report.record(float(state.wealth), float(potential_value(state, kind)))
    return report


def check_fraction_agreement(samples: int = 1000, seed: int = 1) -> CheckReport:
    """Closed-form fractions match the potential-ratio form to 1e-8."""
    report = CheckReport("betting fraction closed form vs potential ratio")
    rng = np.random.default_rng(seed)
    kinds = (KTPotential(), ANPotential())
    for i in range(samples):
        kind = kinds[i % 2]
        state = _random_bettor_history(rng, kind, 64)
        if isinstance(kind, KTPotential):
            closed = betting_fraction(dataclasses.replace(state, awake_count=state.awake_count + 1), kind)
        else:
            closed = betting_fraction(state, kind)
        delta = abs(float(closed) - float(fraction_from_ratio(state, kind)))
        report.record(1e-8, delta, tol=0.0)
    return report


def check_active_cardinality(t_max: int = 65536) -> CheckReport:
    """|active(GC, t)| == floor(log2 t) + 1, exactly."""
    report = CheckReport("GC active-set cardinality law")
    gc = GeometricCovering()
    for t in range(1, t_max + 1):
        expected = int(math.log2(t)) + 1
        got = len(active(gc, t))
        report.record(0.0, abs(got - expected), tol=0.0)
    return report


def _gc_partition_ok(target: Interval) -> bool:
    blocks = partition_gc(target)
    if blocks[0].start != target.start or blocks[-1].end != target.end:
        return False
    for a, b in zip(blocks, blocks[1:]):
        if b.start != a.end + 1:
            return False
    for j in blocks:
        size = len(j)
        if size & (size - 1) or j.start % size or j.start < size:
            return False
    lengths = [len(j) for j in blocks]
    n = len(lengths)
    for split in range(n):
        pre = all(lengths[i + 1] >= 2 * lengths[i] for i in range(split))
        post = all(2 * lengths[i + 1] <= lengths[i] for i in range(split + 1, n - 1))
        if pre and post:
            return True
    return n <= 1


def _ds_partition_ok(target: Interval, g: int) -> bool:
    blocks = partition_ds(target, g)
    if blocks[0].start != target.start or blocks[-1].end != target.end:
        return False
    for a, b in zip(blocks, blocks[1:]):
        if b.start != a.end + 1:
            return False
    for j in blocks:
        full = starts_at(DataStreaming(g), j.start)[0]
        if j.end > full.end:
            return False
    lengths = [len(j) for j in blocks]
    return all(lengths[i + 1] >= 2 * lengths[i] for i in range(len(lengths) - 2))


def check_partitions(samples: int = 1000, max_t: int = 16384, seed: int = 2) -> CheckReport:
    """Cover/disjointness/membership and ratio laws of both partitions."""
    report = CheckReport("GC and DS partition laws")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a = int(rng.integers(1, max_t + 1))
        b = int(rng.integers(a, max_t + 1))
        g = int(rng.integers(1, 4))
        target = Interval(a, b)
        ok = _gc_partition_ok(target) and _ds_partition_ok(target, g)
        report.record(0.0, 0.0 if ok else 1.0, tol=0.0)
    return report


def check_sleeping_bound(instances: int = 200, max_experts: int = 8, max_horizon: int = 512,
                         seed: int = 3) -> CheckReport:
    """Realized sleeping regret vs the KT and AN bounds, for every expert;
    also asserts the per-step non-expansiveness of weighted truncated flips."""
    report = CheckReport("sleeping aggregator regret bounds (KT and AN)")
    rng = np.random.default_rng(seed)
    for i in range(instances):
        kind = KTPotential() if i % 2 == 0 else ANPotential()
        n = int(rng.integers(2, max_experts + 1))
        horizon = int(rng.integers(8, max_horizon + 1))
        state = sleeping.uniform_state(n, kind)
        regret = np.zeros(n)
        awake_steps = np.zeros(n, dtype=int)
        for _ in range(horizon):
            awake = rng.random(n) < 0.7
            if not awake.any():
                awake[int(rng.integers(n))] = True
            losses = rng.uniform(0, 1, n)
            pred = sleeping.predict(state, awake)
            w = wager(state.bettors, kind)
            state = sleeping.update(state, pred, losses)
            h = float(losses @ pred.weights)
            g = np.where(w > 0.0, h - losses, np.maximum(h - losses, 0.0))
            if sleeping.FLIP_TRUNCATION_FAULT:
                g = np.where(w > 0.0, np.maximum(h - losses, 0.0), h - losses)
            report.record(0.0, float(np.sum(state.prior * awake * g * w)), tol=1e-12)
            regret += awake * (h - losses)
            awake_steps += awake
        for j in range(n):
            if isinstance(kind, KTPotential):
                bound = sleeping.regret_bound(kind, 1.0 / n, int(awake_steps[j]), horizon)
            else:
                mass = 1.0 + float(state.bettors.abs_flip_sum[j])
                bound = sleeping.regret_bound(kind, 1.0 / n, int(awake_steps[j]), horizon, wealth_mass=mass)
            report.record(bound, float(regret[j]))
    return report


def _gc_intervals_within(horizon: int) -> list[Interval]:
    out = []
    size = 1
    while size <= horizon:
        start = size
        while start + size - 1 <= horizon:
            out.append(Interval(start, start + size - 1))
            start += size
        size *= 2
    return out


def check_meta_bound(instances: int = 100, max_experts: int = 8, horizon: int = 256,
                     sub_intervals: int = 100, seed: int = 4) -> CheckReport:
    """CBCE(KT) over the geometric covering with a coin-betting base learner:
    per-run meta regret vs the interval bound on every GC interval, and
    interval regret vs the combined bound on random sub-intervals."""
    report = CheckReport("CBCE meta regret and interval regret bounds")
    rng = np.random.default_rng(seed)
    kt = KTPotential()
    gc_all = _gc_intervals_within(horizon)
    for i in range(instances):
        n = int(rng.integers(2, max_experts + 1))
        losses = rng.uniform(0, 1, (horizon, n))
        algo = CBCE(GeometricCovering(), kt, cb_lea_factory(n, kt),
                    prior_kind=PriorKind.BAR_PI, record_run_losses=True)
        for t in range(1, horizon + 1):
            algo.predict(t)
            algo.observe(t, LinearLoss(losses[t - 1]))
        meta_losses = np.array(algo.meta_losses)
        logs = algo.run_loss_logs()
        for j in gc_all:
            realized = float(meta_losses[j.start - 1 : j.end].sum() - np.sum(logs[j][1]))
            report.record(meta_regret_bound(kt, j), realized)
        if i < max(1, instances // 10):  # interval sweep on a subset of instances
            ledger = RegretLedger(meta_losses, losses)
            for _ in range(sub_intervals):
                a = int(rng.integers(1, horizon + 1))
                b = int(rng.integers(a, horizon + 1))
                interval = Interval(a, b)
                a1 = math.sqrt(2.0 * (math.log(n) + 0.5 * math.log(len(interval)) + 2.0))
                report.record(sa_regret_bound(interval, 0.5, a1), sa_regret(ledger, interval))
    return report


def check_ogd_regret(instances: int = 100, horizon: int = 1024, seed: int = 5) -> CheckReport:
    """OGD static regret on 1-d piecewise-linear losses vs 1.5 * B * G * sqrt(T)."""
    report = CheckReport("OGD static regret vs 1.5*B*G*sqrt(T)")
    rng = np.random.default_rng(seed)
    cfg = OCOConfig(diameter=2.0, lipschitz=1.0, dimension=1)
    grid = np.linspace(-cfg.radius, cfg.radius, 801)
    for _ in range(instances):
        targets = rng.uniform(-cfg.radius, cfg.radius, horizon)
        ogd = OGD(cfg)
        total = 0.0
        for t in range(1, horizon + 1):
            x = float(ogd.predict(t)[0])
            total += abs(x - targets[t - 1])
            ogd.step([float(np.sign(x - targets[t - 1]))])
        best = float(np.abs(grid[None, :] - targets[:, None]).sum(axis=0).min())
        report.record(1.5 * cfg.diameter * cfg.lipschitz * math.sqrt(horizon), total - best)
    return report


ALL_CHECKS = {
    "wealth-dominance": check_wealth_dominance,
    "fraction-agreement": check_fraction_agreement,
    "active-cardinality": check_active_cardinality,
    "partitions": check_partitions,
    "sleeping-bound": check_sleeping_bound,
    "meta-bound": check_meta_bound,
    "ogd-regret": check_ogd_regret,
}
