"""Reproducible synthetic environments.

The expert-advice scenario follows the shifting-experts benchmark: per-step
losses are |N(0, sigma^2)| samples capped at 1, and within each segment one
favored expert has a bonus subtracted before the positive part is taken, so
the favored expert is the segment's best. Optionally a constant floor is
added to the favored expert's loss (used by the first-order comparisons).

The convex-optimization scenario is a piecewise-stationary family of clamped
quadratics f(x) = min(1, floor + ||x - c_k||^2 / scale) with one minimizer
c_k per segment.

Loss streams are deterministic functions of (seed, t): each step draws from a
fresh generator keyed by both, so any step can be regenerated independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .intervals import Interval


def _step_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=(seed, t, 0x5EED))))


def normalize_loss(raw: float, scale: float) -> float:
    """Scale a raw loss and clamp it into [0, 1]."""
    if scale <= 0:
        raise ValueError("scale must be > 0")
    return min(1.0, max(0.0, raw * scale))


def default_segments(horizon: int = 900, n_segments: int = 3) -> tuple[tuple[Interval, int], ...]:
    """Equal segments favoring experts 0, 1, 2, ... in turn."""
    size = horizon // n_segments
    return tuple(
        (Interval(k * size + 1, horizon if k == n_segments - 1 else (k + 1) * size), k)
        for k in range(n_segments)
    )


@dataclass(frozen=True)
class LEAScenario:
    """Shifting-experts linear-loss scenario (favored experts are 0-indexed)."""

    n_experts: int = 1000
    horizon: int = 900
    segments: tuple[tuple[Interval, int], ...] = field(default_factory=default_segments)
    noise_sigma: float = 0.5
    favored_bonus: float = 0.5
    favored_floor: float = 0.0
    base_offset: float = 0.0
    # when set, the favored expert's loss is min(1, 2*level*U_t) instead of the
    # bonus-subtracted draw: a loss process whose per-step level is the knob
    favored_level: float | None = None
    seed: int = 0

    def __post_init__(self):
        covered = 0
        for iv, j in self.segments:
            if iv.start != covered + 1:
                raise ValueError("segments must be disjoint and cover [1..horizon] in order")
            if not 0 <= j < self.n_experts:
                raise ValueError("favored expert out of range")
            covered = iv.end
        if covered != self.horizon:
            raise ValueError("segments must cover exactly [1..horizon]")

    def favored_expert(self, t: int) -> int:
        for iv, j in self.segments:
            if t in iv:
                return j
        raise ValueError(f"t={t} outside horizon")

    def shift_times(self) -> list[int]:
        return [iv.start for iv, _ in self.segments[1:]]


def gen_lea_losses(scenario: LEAScenario, t: int) -> np.ndarray:
    """Loss vector for step t; deterministic given (scenario.seed, t)."""
    if not 1 <= t <= scenario.horizon:
        raise ValueError(f"t={t} outside [1..{scenario.horizon}]")
    rng = _step_rng(scenario.seed, t)
    raw = np.abs(rng.normal(0.0, scenario.noise_sigma, scenario.n_experts))
    if scenario.base_offset:
        raw += scenario.base_offset
    j = scenario.favored_expert(t)
    if scenario.favored_level is None:
        raw[j] = max(raw[j] - scenario.base_offset - scenario.favored_bonus, 0.0) + scenario.favored_floor
    else:
        # the uniform draw is shared across paired variants; only the level scales it
        raw[j] = 2.0 * scenario.favored_level * rng.uniform()
    return np.minimum(raw, 1.0)


def lea_loss_matrix(scenario: LEAScenario) -> np.ndarray:
    """All per-step loss vectors stacked into shape (horizon, n_experts)."""
    return np.stack([gen_lea_losses(scenario, t) for t in range(1, scenario.horizon + 1)])


@dataclass(frozen=True)
class LinearLoss:
    """LEA loss signal: value is the inner product with the loss vector."""

    vector: np.ndarray

    def value(self, weights) -> float:
        return float(np.asarray(weights) @ self.vector)


@dataclass(frozen=True)
class ClampedQuadraticLoss:
    """f(x) = min(1, floor + ||x - center||^2 / scale); gradient 0 when clamped."""

    center: np.ndarray
    scale: float
    floor: float = 0.0

    def value(self, x) -> float:
        d = np.asarray(x, dtype=float) - self.center
        return min(1.0, self.floor + float(d @ d) / self.scale)

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        d = x - self.center
        if self.floor + float(d @ d) / self.scale >= 1.0:
            return np.zeros_like(x)
        return 2.0 * d / self.scale


@dataclass(frozen=True)
class OCOScenario:
    """Piecewise-stationary clamped quadratics; one minimizer per segment.

    jitter_sigma > 0 perturbs the per-step minimizer around the segment
    center, so the center's expected per-step loss is d * jitter_sigma^2 /
    scale; the perturbation directions are shared across paired variants.
    """

    dimension: int = 2
    horizon: int = 300
    segments: tuple[tuple[Interval, tuple[float, ...]], ...] = ()
    scale: float = 4.0
    floor: float = 0.0
    jitter_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.segments:
            raise ValueError("segments must be provided (use make_oco_scenario)")
        covered = 0
        for iv, c in self.segments:
            if iv.start != covered + 1 or len(c) != self.dimension:
                raise ValueError("segments must tile [1..horizon] with dimension-d centers")
            covered = iv.end
        if covered != self.horizon:
            raise ValueError("segments must cover exactly [1..horizon]")


def make_oco_scenario(dimension: int = 2, horizon: int = 300, n_segments: int = 3,
                      radius: float = 0.8, scale: float = 4.0, floor: float = 0.0,
                      jitter_sigma: float = 0.0, seed: int = 0) -> OCOScenario:
    """Random well-separated segment minimizers inside the radius ball."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=(seed, 0xC0C0))))
    size = horizon // n_segments
    segments = []
    for k in range(n_segments):
        c = rng.normal(0.0, 1.0, dimension)
        c = c / np.linalg.norm(c) * radius
        end = horizon if k == n_segments - 1 else (k + 1) * size
        segments.append((Interval(k * size + 1, end), tuple(float(v) for v in c)))
    return OCOScenario(dimension=dimension, horizon=horizon, segments=tuple(segments),
                       scale=scale, floor=floor, jitter_sigma=jitter_sigma, seed=seed)


def segment_center(scenario: OCOScenario, t: int) -> np.ndarray:
    for iv, c in scenario.segments:
        if t in iv:
            return np.array(c)
    raise ValueError(f"t={t} outside horizon")


def gen_oco_loss(scenario: OCOScenario, t: int) -> ClampedQuadraticLoss:
    """Loss function handle for step t (exact value and gradient)."""
    if not 1 <= t <= scenario.horizon:
        raise ValueError(f"t={t} outside [1..{scenario.horizon}]")
    center = segment_center(scenario, t)
    if scenario.jitter_sigma > 0.0:
        rng = _step_rng(scenario.seed, t)
        center = center + scenario.jitter_sigma * rng.normal(0.0, 1.0, scenario.dimension)
    return ClampedQuadraticLoss(center=center, scale=scenario.scale, floor=scenario.floor)
