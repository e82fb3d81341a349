"""Experiment runner: simulate configured algorithms on shared loss streams.

Within one seed every algorithm sees the identical loss stream (losses are a
pure function of (seed, t)), so per-seed comparisons are paired. Seeds can be
simulated in parallel worker processes; a single writer emits rows ordered by
(seed, algorithm, t) so the CSV bytes are reproducible for a fixed config.

CSV schema: header ``seed,t,algorithm,instant_loss,cum_loss``, decimal values
with 12 significant digits.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from .baselines import ATV, SAOL, FixedShare
from .blackbox import OCOConfig, cb_lea_factory, ftrl_factory, ogd_factory
from .intervals import DataStreaming, GeometricCovering
from .meta import CBCE, PriorKind
from .potentials import ANPotential, KTPotential
from .scenarios import (
    LEAScenario,
    LinearLoss,
    default_segments,
    gen_oco_loss,
    lea_loss_matrix,
    make_oco_scenario,
)

CSV_HEADER = "seed,t,algorithm,instant_loss,cum_loss"


@dataclass(frozen=True)
class RunConfig:
    """One experiment: which algorithms, on which scenario, on which seeds."""

    metas: tuple[str, ...] = ("cbce",)
    potential: str = "an"            # meta potential for cbce
    blackbox_potential: str = "an"   # base-learner potential (LEA)
    schedule: str = "ds"
    g: int = 2
    prior: str = "uniform"
    warm_start: bool = True
    seeds: tuple[int, ...] = (0,)
    workers: int = 1
    # LEA scenario knobs
    n_experts: int = 1000
    horizon: int = 900
    n_segments: int = 3
    noise_sigma: float = 0.5
    favored_bonus: float = 0.5
    favored_floor: float = 0.0
    base_offset: float = 0.0
    favored_level: float | None = None
    # OCO scenario knobs
    oco_blackbox: str = "ftrl"
    dimension: int = 2
    oco_scale: float = 4.0
    oco_floor: float = 0.0
    oco_jitter: float = 0.0

    def __post_init__(self):
        known = {"cbce", "saol", "atv", "fixedshare"}
        bad = set(self.metas) - known
        if bad:
            raise ValueError(f"unknown meta algorithms {sorted(bad)}; choose from {sorted(known)}")
        if self.potential not in {"kt", "an"} or self.blackbox_potential not in {"kt", "an"}:
            raise ValueError("potential must be 'kt' or 'an'")
        if self.schedule not in {"gc", "ds"}:
            raise ValueError("schedule must be 'gc' or 'ds'")
        if self.prior not in {"uniform", "barpi"}:
            raise ValueError("prior must be 'uniform' or 'barpi'")
        if self.oco_blackbox not in {"ftrl", "ogd"}:
            raise ValueError("oco blackbox must be 'ftrl' or 'ogd'")
        if self.g < 1 or self.horizon < 1 or self.n_experts < 1:
            raise ValueError("g, horizon, n_experts must be positive")


def _potential(token: str):
    return KTPotential() if token == "kt" else ANPotential()


def _schedule(config: RunConfig):
    return GeometricCovering() if config.schedule == "gc" else DataStreaming(config.g)


def _prior_kind(config: RunConfig) -> PriorKind:
    return PriorKind.UNIFORM if config.prior == "uniform" else PriorKind.BAR_PI


def algorithm_name(config: RunConfig, meta: str) -> str:
    return f"cbce_{config.potential}" if meta == "cbce" else meta


def lea_scenario(config: RunConfig, seed: int) -> LEAScenario:
    # tiny smoke configs may not fit the requested segment count
    n_segments = min(config.n_segments, config.n_experts, config.horizon)
    return LEAScenario(
        n_experts=config.n_experts,
        horizon=config.horizon,
        segments=default_segments(config.horizon, n_segments),
        noise_sigma=config.noise_sigma,
        favored_bonus=config.favored_bonus,
        favored_floor=config.favored_floor,
        base_offset=config.base_offset,
        favored_level=config.favored_level,
        seed=seed,
    )


def build_lea_algorithm(config: RunConfig, meta: str, scenario: LEAScenario):
    factory = cb_lea_factory(scenario.n_experts, _potential(config.blackbox_potential))
    if meta == "cbce":
        return CBCE(_schedule(config), _potential(config.potential), factory,
                    prior_kind=_prior_kind(config), warm_start=config.warm_start)
    if meta == "saol":
        return SAOL(_schedule(config), factory, warm_start=config.warm_start)
    if meta == "atv":
        return ATV(_schedule(config), factory, warm_start=config.warm_start)
    shifts = len(scenario.segments) - 1
    return FixedShare.with_recommended_parameters(scenario.n_experts, shifts, scenario.horizon)


def build_oco_algorithm(config: RunConfig, meta: str, oco_config: OCOConfig):
    factory = ftrl_factory(oco_config) if config.oco_blackbox == "ftrl" else ogd_factory(oco_config)
    if meta == "cbce":
        return CBCE(_schedule(config), _potential(config.potential), factory,
                    prior_kind=_prior_kind(config), warm_start=config.warm_start)
    if meta == "saol":
        return SAOL(_schedule(config), factory, warm_start=config.warm_start)
    if meta == "atv":
        return ATV(_schedule(config), factory, warm_start=config.warm_start)
    raise ValueError("fixedshare is expert-advice only")


def simulate(algo, losses_by_step) -> np.ndarray:
    """Drive one algorithm over per-step loss signals; returns instant losses."""
    out = np.empty(len(losses_by_step))
    for t, loss in enumerate(losses_by_step, start=1):
        algo.predict(t)
        out[t - 1] = algo.observe(t, loss)
    return out


def simulate_lea_seed(config: RunConfig, seed: int) -> dict[str, np.ndarray]:
    scenario = lea_scenario(config, seed)
    loss_matrix = lea_loss_matrix(scenario)
    signals = [LinearLoss(row) for row in loss_matrix]
    return {
        algorithm_name(config, meta): simulate(build_lea_algorithm(config, meta, scenario), signals)
        for meta in config.metas
    }


def oco_feasible_config(config: RunConfig, radius: float = 1.0) -> OCOConfig:
    # the clamp zeroes the gradient where ||x - c||^2 >= scale, so the
    # gradient norm is at most 2/sqrt(scale) everywhere
    lipschitz = 2.0 / config.oco_scale**0.5
    return OCOConfig(diameter=2.0 * radius, lipschitz=lipschitz,
                     smoothness_lipschitz=lipschitz, dimension=config.dimension)


def simulate_oco_seed(config: RunConfig, seed: int) -> dict[str, np.ndarray]:
    scenario = make_oco_scenario(dimension=config.dimension, horizon=config.horizon,
                                 n_segments=min(config.n_segments, config.horizon), scale=config.oco_scale,
                                 floor=config.oco_floor, jitter_sigma=config.oco_jitter, seed=seed)
    signals = [gen_oco_loss(scenario, t) for t in range(1, scenario.horizon + 1)]
    oco_cfg = oco_feasible_config(config)
    return {
        algorithm_name(config, meta): simulate(build_oco_algorithm(config, meta, oco_cfg), signals)
        for meta in config.metas
    }


def _seed_rows(args) -> list[str]:
    config, seed, problem = args
    runner = simulate_lea_seed if problem == "lea" else simulate_oco_seed
    results = runner(config, seed)
    rows = []
    for name in sorted(results):
        cum = 0.0
        for t, loss in enumerate(results[name], start=1):
            cum += float(loss)
            rows.append(f"{seed},{t},{name},{loss:.12g},{cum:.12g}")
    return rows


def run_experiment(config: RunConfig, problem: str = "lea", out=None) -> list[str]:
    """Simulate all (seed, algorithm) pairs and return/write the CSV rows."""
    jobs = [(config, seed, problem) for seed in config.seeds]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            blocks = list(pool.map(_seed_rows, jobs))
    else:
        blocks = [_seed_rows(job) for job in jobs]
    rows = [CSV_HEADER]
    for block in blocks:
        rows.extend(block)
    if out is not None:
        with open(out, "w", newline="\n") as fh:
            fh.write("\n".join(rows) + "\n")
    return rows


def summarize_totals(results: dict[str, np.ndarray]) -> dict[str, float]:
    return {name: float(losses.sum()) for name, losses in results.items()}


def sign_test_p_value(wins: int, trials: int) -> float:
    """One-sided sign test: P(Bin(trials, 1/2) >= wins)."""
    if not 0 <= wins <= trials:
        raise ValueError("need 0 <= wins <= trials")
    total = sum(comb(trials, k) for k in range(wins, trials + 1))
    return total / 2.0**trials
