"""Synthetic sensed-attribute field.

Each node samples a temperature-like value per round: a clamped random walk
around a per-node baseline. Nodes in the leftmost strip of the field get
the hot baseline, everyone else the cold one, so the hard-threshold
crossing rate can be controlled per region.
"""

from dataclasses import dataclass

import numpy as np

from .network import ConfigError, Network

# Stream tag keeping environment draws disjoint from other seeded streams.
ENV_STREAM_TAG = 7


@dataclass
class EnvConfig:
    baseline_low: float = 95.0
    baseline_high: float = 120.0
    hot_region_fraction: float = 0.5
    step_magnitude: float = 5.0
    noise_seed: int = 0

    def validate(self):
        if self.baseline_low > self.baseline_high:
            raise ConfigError(
                f"env.baseline_low {self.baseline_low} > baseline_high {self.baseline_high}")
        if not 0 <= self.hot_region_fraction <= 1:
            raise ConfigError(
                f"env.hot_region_fraction must be in [0, 1], got {self.hot_region_fraction}")
        if self.step_magnitude < 0:
            raise ConfigError(f"env.step_magnitude must be >= 0, got {self.step_magnitude}")

    def clamp_bounds(self, baseline):
        """Walk bounds: baseline +- 10 * step_magnitude."""
        span = 10.0 * self.step_magnitude
        return baseline - span, baseline + span


def assign_regions(network: Network, config: EnvConfig) -> np.ndarray:
    """Per-node baseline: hot for x < fraction*M, cold otherwise."""
    config.validate()
    cut = config.hot_region_fraction * network.field.side_length
    xs = np.array([node.x for node in network.nodes])
    return np.where(xs < cut, config.baseline_high, config.baseline_low)


def _delta_stream(config: EnvConfig) -> np.random.Generator:
    return np.random.default_rng([config.noise_seed, ENV_STREAM_TAG])


def step_deltas(config: EnvConfig, rounds: int, n_nodes: int) -> np.ndarray:
    """Walk increments for rounds 0..rounds-1, shape (rounds, n_nodes).

    Row r is a pure function of (noise_seed, r, node id): the stream always
    yields n_nodes draws per round in node-id order.
    """
    d = config.step_magnitude
    return _delta_stream(config).uniform(-d, d, size=(rounds, n_nodes))


def cv_trace(baselines: np.ndarray, config: EnvConfig, rounds: int) -> np.ndarray:
    """Sensed values for all nodes over `rounds` rounds, shape (rounds, n)."""
    config.validate()
    n = len(baselines)
    lo, hi = config.clamp_bounds(np.asarray(baselines, dtype=float))
    deltas = step_deltas(config, rounds, n)
    out = np.empty((rounds, n))
    cv = np.asarray(baselines, dtype=float).copy()
    for r in range(rounds):
        cv = np.clip(cv + deltas[r], lo, hi)
        out[r] = cv
    return out


def sample_cv(node_id: int, round_index: int, baseline: float,
              config: EnvConfig, n_nodes: int) -> float:
    """Sensed value of one node at one round (replays the walk from round 0)."""
    config.validate()
    lo, hi = config.clamp_bounds(baseline)
    deltas = step_deltas(config, round_index + 1, n_nodes)[:, node_id]
    cv = baseline
    for d in deltas:
        cv = min(max(cv + d, lo), hi)
    return float(cv)
