"""Cluster-head election and reactive transmission rules.

Election follows the LEACH rotation threshold. TEEN draws with the uniform
reference probability; DEEC and both HEER variants weight it by the node's
residual energy relative to the network average. The hard/soft threshold
pair gates transmissions for the reactive protocols.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .network import FieldConfig, Network, Node


class ProtocolKind(Enum):
    TEEN = "teen"
    DEEC = "deec"
    HEER_HARD = "heer_hard"
    HEER_SOFT = "heer_soft"

    @property
    def reactive(self) -> bool:
        return self is not ProtocolKind.DEEC

    @property
    def classification(self) -> str:
        return "Reactive" if self.reactive else "Proactive"

    @property
    def energy_weighted(self) -> bool:
        """Whether election probability scales with residual energy."""
        return self is not ProtocolKind.TEEN

    @property
    def uses_soft_threshold(self) -> bool:
        return self in (ProtocolKind.TEEN, ProtocolKind.HEER_SOFT)


@dataclass(frozen=True)
class Thresholds:
    ht: float = 100.0
    st: float = 2.0

    def __post_init__(self):
        if not math.isfinite(self.ht):
            raise ValueError(f"thresholds.ht must be finite, got {self.ht}")
        if not (self.st >= 0 and math.isfinite(self.st)):
            raise ValueError(f"thresholds.st must be >= 0, got {self.st}")


@dataclass(frozen=True)
class SensorState:
    """Current sensed value plus the value stored at the last transmission."""
    cv: float
    sv: Optional[float] = None


@dataclass(frozen=True)
class ElectionParams:
    p_opt: float = 0.1

    def __post_init__(self):
        if not 0 < self.p_opt < 1:
            raise ValueError(f"election.p_opt must be in (0, 1), got {self.p_opt}")


def ch_probability(node: Node, avg_energy: float, params: ElectionParams,
                   field: FieldConfig) -> float:
    """Per-round CH probability of `node` given the network average energy.

    Two-level mode weights advanced nodes by (1+a) over the (1+a*m)
    normalization; multi-level mode uses N*(1+a_i)/(N + sum(a_j)). Dead
    nodes get 0; the result is clamped to [0, 1].
    """
    if not node.alive or node.residual_energy <= 0:
        return 0.0
    if avg_energy <= 0:
        return 0.0
    if field.multi_level_factors is not None:
        n = field.node_count
        total_a = float(np.sum(field.multi_level_factors))
        weight = n * (1.0 + node.energy_factor) / (n + total_a)
    else:
        a, m = field.energy_factor, field.advanced_fraction
        weight = (1.0 + a if node.advanced else 1.0) / (1.0 + a * m)
    p = params.p_opt * weight * node.residual_energy / avg_energy
    return min(max(p, 0.0), 1.0)


def rotation_epoch(p: float) -> int:
    """Number of rounds a fresh CH stays ineligible: round(1/p), at least 1."""
    return max(int(round(1.0 / p)), 1)


def election_threshold(p: float, round_index: int) -> float:
    """LEACH rotation threshold p / (1 - p*(r mod round(1/p)))."""
    if p <= 0:
        return 0.0
    if p >= 1:
        return 1.0
    denom = 1.0 - p * (round_index % rotation_epoch(p))
    if denom <= 0:
        return 1.0
    return min(p / denom, 1.0)


def is_eligible(node: Node, p: float) -> bool:
    """A node may stand for election once round(1/p) rounds passed since its last CH term."""
    if node.rotation_state is None:
        return True
    return node.rotation_state >= rotation_epoch(p)


def select_cluster_heads(network: Network, kind: ProtocolKind,
                         params: ElectionParams, rng: np.random.Generator) -> set:
    """Run one election round, mutating rotation state of elected nodes.

    Each alive, eligible node draws uniform(0,1) against its rotation
    threshold. If nobody self-elects, the alive node with the most residual
    energy (lowest id on ties) is forced CH. Returns the set of CH ids;
    empty only when every node is dead.
    """
    from .network import network_average_energy

    avg = network_average_energy(network)
    r = network.round_index
    chs = set()
    draws = rng.random(len(network.nodes))
    for node, draw in zip(network.nodes, draws):
        if not node.alive:
            continue
        if kind.energy_weighted:
            p = ch_probability(node, avg, params, network.field)
        else:
            p = params.p_opt
        if p <= 0 or not is_eligible(node, p):
            continue
        if draw < election_threshold(p, r):
            chs.add(node.id)
            node.rotation_state = 0
            node.chosen_ch_count += 1

    if not chs:
        alive = [n for n in network.nodes if n.alive]
        if not alive:
            return set()
        forced = max(alive, key=lambda n: (n.residual_energy, -n.id))
        chs.add(forced.id)
        forced.rotation_state = 0
        forced.chosen_ch_count += 1
    return chs


def form_clusters(network: Network, chs: set) -> dict:
    """Assign every alive node to its Euclidean-nearest CH (lowest id on ties)."""
    if not chs:
        raise ValueError("cluster formation requires at least one CH")
    heads = sorted(chs)
    assignment = {}
    for node in network.nodes:
        if not node.alive:
            continue
        if node.id in chs:
            assignment[node.id] = node.id
            continue
        best, best_d = None, float("inf")
        for ch_id in heads:
            head = network.nodes[ch_id]
            d = math.hypot(node.x - head.x, node.y - head.y)
            if d < best_d:
                best, best_d = ch_id, d
        assignment[node.id] = best
    return assignment


def should_transmit(state: SensorState, thresholds: Thresholds,
                    kind: ProtocolKind):
    """Decide whether a node transmits this round and return its new state.

    DEEC always transmits. Reactive protocols first trigger when the sensed
    value reaches the hard threshold; afterwards TEEN and soft HEER require
    the value to move by at least the soft threshold from the stored one,
    while hard HEER keeps re-applying the hard threshold alone.
    """
    if kind is ProtocolKind.DEEC:
        return True, state
    if state.sv is None:
        if state.cv >= thresholds.ht:
            return True, SensorState(cv=state.cv, sv=state.cv)
        return False, state
    if kind.uses_soft_threshold:
        fire = abs(state.cv - state.sv) >= thresholds.st
    else:
        fire = state.cv >= thresholds.ht
    if fire:
        return True, SensorState(cv=state.cv, sv=state.cv)
    return False, state
