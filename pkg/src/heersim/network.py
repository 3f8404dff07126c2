"""Field, node, and deployment model.

Nodes live on an M x M square with the base station fixed at the field
center. Two-level heterogeneity gives a fraction `m` of nodes ("advanced")
an initial energy of e0*(1+a); an explicit per-node factor list switches
the network to multi-level mode.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np


class ConfigError(ValueError):
    """Raised for invalid or inconsistent configuration."""


@dataclass
class FieldConfig:
    side_length: float = 100.0
    node_count: int = 100
    bs_position: Optional[tuple] = None  # None -> field center
    advanced_fraction: float = 0.1
    energy_factor: float = 1.0
    initial_energy: float = 0.5
    multi_level_factors: Optional[list] = None

    def validate(self):
        if self.side_length <= 0:
            raise ConfigError(f"field.side_length must be > 0, got {self.side_length}")
        if self.node_count <= 0:
            raise ConfigError(f"field.node_count must be > 0, got {self.node_count}")
        if not 0 <= self.advanced_fraction < 1:
            raise ConfigError(
                f"field.advanced_fraction must be in [0, 1), got {self.advanced_fraction}")
        if self.energy_factor < 0:
            raise ConfigError(f"field.energy_factor must be >= 0, got {self.energy_factor}")
        if self.initial_energy <= 0:
            raise ConfigError(f"field.initial_energy must be > 0, got {self.initial_energy}")
        if self.multi_level_factors is not None:
            if len(self.multi_level_factors) != self.node_count:
                raise ConfigError(
                    "field.multi_level_factors length "
                    f"{len(self.multi_level_factors)} != node_count {self.node_count}")
            if any(a < 0 for a in self.multi_level_factors):
                raise ConfigError("field.multi_level_factors entries must be >= 0")

    @property
    def bs(self) -> tuple:
        if self.bs_position is not None:
            return self.bs_position
        return (self.side_length / 2.0, self.side_length / 2.0)

    @property
    def advanced_count(self) -> int:
        return int(round(self.advanced_fraction * self.node_count))


@dataclass
class Node:
    id: int
    x: float
    y: float
    initial_energy: float
    residual_energy: float
    advanced: bool = False
    energy_factor: float = 0.0  # heterogeneity level a_i of this node
    alive: bool = True
    chosen_ch_count: int = 0
    rotation_state: Optional[int] = None  # rounds since last CH term, None = never


@dataclass
class Network:
    nodes: list
    field: FieldConfig
    round_index: int = 0


def deploy(config: FieldConfig, rng: np.random.Generator) -> Network:
    """Place nodes i.i.d. uniform on the square and assign energy classes.

    Exactly round(m*N) advanced nodes are chosen by the first indices of a
    seeded shuffle; with multi_level_factors set, node i gets e0*(1+a_i).
    """
    config.validate()
    n = config.node_count
    xs = rng.uniform(0.0, config.side_length, n)
    ys = rng.uniform(0.0, config.side_length, n)

    if config.multi_level_factors is not None:
        factors = np.asarray(config.multi_level_factors, dtype=float)
        advanced = factors > 0
    else:
        factors = np.zeros(n)
        order = rng.permutation(n)
        advanced = np.zeros(n, dtype=bool)
        advanced[order[:config.advanced_count]] = True
        factors[advanced] = config.energy_factor

    nodes = []
    for i in range(n):
        e0 = config.initial_energy * (1.0 + factors[i])
        nodes.append(Node(
            id=i, x=float(xs[i]), y=float(ys[i]),
            initial_energy=e0, residual_energy=e0,
            advanced=bool(advanced[i]), energy_factor=float(factors[i]),
        ))
    return Network(nodes=nodes, field=config)


def total_energy_two_level(config: FieldConfig) -> float:
    """Total initial energy N*e0*(1 + a*m) of a two-level network."""
    if config.multi_level_factors is not None:
        raise ConfigError("two-level total requested for a multi-level config")
    return config.node_count * config.initial_energy * (
        1.0 + config.energy_factor * config.advanced_fraction)


def total_energy_multi_level(config: FieldConfig) -> float:
    """Total initial energy e0*(N + sum(a_i)) of a multi-level network."""
    if config.multi_level_factors is None:
        raise ConfigError("multi-level total requested without per-node factors")
    config.validate()
    return config.initial_energy * (config.node_count + float(np.sum(config.multi_level_factors)))


def expected_dist_to_ch(side_length: float, cluster_count: int) -> float:
    """Expected member-to-CH distance M/sqrt(2*pi*k) under uniform density."""
    if cluster_count < 1:
        raise ValueError("cluster_count must be >= 1")
    return side_length / math.sqrt(2.0 * math.pi * cluster_count)


def expected_dist_to_bs(side_length: float) -> float:
    """Average CH-to-base-station distance 0.765*M/2 for a centered sink."""
    return 0.765 * side_length / 2.0


def network_average_energy(network: Network) -> float:
    """Mean residual energy over all N nodes, dead nodes counted at 0 J."""
    if not network.nodes:
        raise ValueError("network has no nodes")
    total = sum(max(node.residual_energy, 0.0) for node in network.nodes)
    return total / len(network.nodes)
