"""Base learners pluggable into the meta algorithms.

Every black box follows the run lifecycle: constructed at its interval's
first step (optionally warm-started from the meta's previous decision), then
predict(t) / observe(t, loss) strictly alternating while the run is alive.
Loss signals carry whatever the learner needs: LEA learners read the loss
vector, OCO learners query the gradient at their own point.

Implemented learners:
  * CoinBettingLEA - coin-betting expert aggregation (sleeping machinery with
    an all-awake mask), optionally seeded with a non-uniform prior.
  * OGD - projected online gradient descent on a centered Euclidean ball,
    step size B / (G * sqrt(tau)) on the run's local clock tau.
  * FTRL - follow-the-regularized-leader on linearized losses with an
    adaptive quadratic regularizer sqrt(L^2 + sum ||g||^2)/2 * ||x||^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sleeping
from .potentials import ANPotential, PotentialKind


@dataclass(frozen=True)
class OCOConfig:
    """Feasible-set and loss-regularity constants for the OCO learners."""

    diameter: float
    lipschitz: float
    smoothness_lipschitz: float = 1.0
    dimension: int = 1

    def __post_init__(self):
        if min(self.diameter, self.lipschitz, self.smoothness_lipschitz) <= 0:
            raise ValueError("diameter, lipschitz, smoothness_lipschitz must be > 0")

    @property
    def radius(self) -> float:
        return self.diameter / 2.0


def project_to_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """Radial projection onto the origin-centered ball of the given radius."""
    norm = float(np.linalg.norm(x))
    if norm <= radius:
        return x
    return x * (radius / norm)


class CoinBettingLEA:
    """Expert aggregation by coin betting; equals the sleeping aggregator
    with every expert awake at every step."""

    def __init__(self, n_experts: int, kind: PotentialKind = ANPotential(), prior=None, start_time: int = 1):
        if prior is None:
            prior = np.full(n_experts, 1.0 / n_experts)
        self.state = sleeping.make_state(prior, kind)
        self._all_awake = np.ones(n_experts, dtype=bool)
        self._pending = None
        self.start_time = start_time

    def predict(self, t: int) -> np.ndarray:
        pred = sleeping.predict(self.state, self._all_awake)
        self._pending = pred
        return pred.weights

    def observe(self, t: int, loss) -> None:
        if self._pending is None:
            raise RuntimeError("observe called before predict")
        self.state = sleeping.update(self.state, self._pending, loss.vector)
        self._pending = None

    def step(self, loss_vector):
        """Convenience: one predict/observe round on a bare loss vector."""
        weights = self.predict(0)
        self.observe(0, _VectorOnly(np.asarray(loss_vector, dtype=float)))
        return weights


@dataclass(frozen=True)
class _VectorOnly:
    vector: np.ndarray


class OGD:
    """Projected online gradient descent on the ball of diameter B."""

    def __init__(self, config: OCOConfig, start_time: int = 1, x0=None):
        self.config = config
        if x0 is None:
            x = np.zeros(config.dimension)
        else:
            x = project_to_ball(np.asarray(x0, dtype=float).copy(), config.radius)
        self.x = x
        self.tau = 1  # local step clock, 1 at the run's first step
        self.start_time = start_time

    def predict(self, t: int) -> np.ndarray:
        return self.x

    def observe(self, t: int, loss) -> None:
        self.step(loss.gradient(self.x))

    def step(self, gradient) -> np.ndarray:
        gradient = np.asarray(gradient, dtype=float)
        norm = float(np.linalg.norm(gradient))
        if norm > self.config.lipschitz * (1.0 + 1e-12):
            raise ValueError(f"gradient norm {norm} exceeds the Lipschitz bound {self.config.lipschitz}")
        eta = self.config.diameter / (self.config.lipschitz * np.sqrt(self.tau))
        self.x = project_to_ball(self.x - eta * gradient, self.config.radius)
        self.tau += 1
        return self.x


class FTRL:
    """FTRL on linearized losses with the adaptive quadratic regularizer;
    the iterate has the closed form -(sum of gradients)/sqrt(L^2 + sum ||g||^2)."""

    def __init__(self, config: OCOConfig, start_time: int = 1, x0=None):
        self.config = config
        self.grad_sum = np.zeros(config.dimension)
        self.sq_norm_sum = 0.0
        self.start_time = start_time
        # x0 shifts the anchor so a warm-started run begins at the hint.
        self.anchor = np.zeros(config.dimension) if x0 is None else project_to_ball(np.asarray(x0, dtype=float).copy(), config.radius)

    def current_point(self) -> np.ndarray:
        raw = self.anchor - self.grad_sum / np.sqrt(self.config.smoothness_lipschitz**2 + self.sq_norm_sum)
        return project_to_ball(raw, self.config.radius)

    def predict(self, t: int) -> np.ndarray:
        return self.current_point()

    def observe(self, t: int, loss) -> None:
        self.step(loss.gradient(self.current_point()))

    def step(self, gradient) -> np.ndarray:
        gradient = np.asarray(gradient, dtype=float)
        self.grad_sum = self.grad_sum + gradient
        self.sq_norm_sum += float(gradient @ gradient)
        return self.current_point()


def cb_lea_factory(n_experts: int, kind: PotentialKind = ANPotential(), warm_mix: float | None = None):
    """Run factory: warm-start hint (a distribution) becomes the run's prior.

    The hint is mixed with the uniform distribution at weight warm_mix
    (default 1/n_experts). Aggregation weights are prior * clipped wager, so
    an expert with exactly zero prior could never regain weight inside the
    run; hints routinely carry exact zeros (experts whose wagers are clipped),
    and injecting them unsmoothed permanently freezes every new run onto the
    stale support.
    """
    if warm_mix is None:
        warm_mix = 1.0 / n_experts
    if not 0.0 <= warm_mix <= 1.0:
        raise ValueError("warm_mix must lie in [0, 1]")

    def make(start_time: int, hint=None):
        prior = None
        if hint is not None:
            prior = np.asarray(hint, dtype=float)
            total = prior.sum()
            if total > 0:
                prior = (1.0 - warm_mix) * (prior / total) + warm_mix / n_experts
            else:
                prior = None
        return CoinBettingLEA(n_experts, kind=kind, prior=prior, start_time=start_time)

    return make


def ogd_factory(config: OCOConfig):
    """Run factory: warm-start hint (a point) becomes the run's start iterate."""

    def make(start_time: int, hint=None):
        return OGD(config, start_time=start_time, x0=hint)

    return make


def ftrl_factory(config: OCOConfig):
    def make(start_time: int, hint=None):
        return FTRL(config, start_time=start_time, x0=hint)

    return make
