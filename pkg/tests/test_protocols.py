"""Election probabilities, rotation threshold, clustering, and threshold gating."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heersim.network import FieldConfig, Network, Node, deploy
from heersim.protocols import (ElectionParams, ProtocolKind, SensorState,
                               Thresholds, ch_probability, election_threshold,
                               form_clusters, is_eligible, rotation_epoch,
                               select_cluster_heads, should_transmit)

P10 = ElectionParams(p_opt=0.1)


def make_node(energy, advanced=False, factor=0.0, alive=True, node_id=0):
    return Node(id=node_id, x=0.0, y=0.0, initial_energy=1.0,
                residual_energy=energy, advanced=advanced,
                energy_factor=factor, alive=alive)


def test_ch_probability_homogeneous_reduces_to_p_opt():
    field = FieldConfig(advanced_fraction=0.0, energy_factor=0.0)
    node = make_node(0.5)
    assert ch_probability(node, 0.5, P10, field) == pytest.approx(0.1)


def test_ch_probability_two_level_frozen_values():
    field = FieldConfig(advanced_fraction=0.1, energy_factor=1.0)
    normal = make_node(0.25)
    advanced = make_node(0.25, advanced=True, factor=1.0)
    # p_opt * E / ((1+a*m) * avg) and the (1+a)-weighted advanced form
    assert ch_probability(normal, 0.5, P10, field) == pytest.approx(
        0.1 * 0.25 / (1.1 * 0.5), abs=1e-9)
    assert ch_probability(normal, 0.5, P10, field) == pytest.approx(0.045454545, abs=1e-8)
    assert ch_probability(advanced, 0.5, P10, field) == pytest.approx(0.090909090, abs=1e-8)


def test_ch_probability_advanced_ratio_exact():
    field = FieldConfig(advanced_fraction=0.1, energy_factor=1.0)
    normal = make_node(0.37)
    advanced = make_node(0.23, advanced=True, factor=1.0)
    ratio = ch_probability(advanced, 0.5, P10, field) / ch_probability(normal, 0.5, P10, field)
    assert ratio == pytest.approx((1.0 + 1.0) * 0.23 / 0.37, rel=1e-12)


def test_ch_probability_multi_level_normalization():
    factors = [0.0, 1.0, 2.0]
    field = FieldConfig(node_count=3, multi_level_factors=factors)
    node = make_node(0.4, factor=2.0)
    expected = 0.1 * 3 * (1 + 2.0) * 0.4 / ((3 + 3.0) * 0.5)
    assert ch_probability(node, 0.5, P10, field) == pytest.approx(expected, rel=1e-12)


def test_ch_probability_dead_node_is_zero():
    field = FieldConfig(advanced_fraction=0.0)
    assert ch_probability(make_node(0.0, alive=False), 0.5, P10, field) == 0.0


def test_ch_probability_clamped_to_unit_interval():
    field = FieldConfig(advanced_fraction=0.0, energy_factor=0.0)
    assert ch_probability(make_node(100.0), 1e-3, P10, field) == 1.0


def test_election_threshold_frozen_values():
    assert election_threshold(0.1, 0) == pytest.approx(0.1)
    assert election_threshold(0.1, 9) == pytest.approx(1.0, abs=1e-9)
    assert election_threshold(0.1, 10) == pytest.approx(0.1)
    assert election_threshold(1.0, 5) == 1.0
    assert election_threshold(1.5, 5) == 1.0


@given(p=st.floats(min_value=0.01, max_value=0.99),
       r=st.integers(min_value=0, max_value=10_000))
def test_election_threshold_in_unit_interval(p, r):
    assert 0.0 <= election_threshold(p, r) <= 1.0


def fresh_homogeneous(n=100, seed=0):
    config = FieldConfig(node_count=n, advanced_fraction=0.0, energy_factor=0.0)
    return deploy(config, np.random.default_rng(seed))


def test_select_cluster_heads_expected_count():
    rng = np.random.default_rng(123)
    counts = []
    for _ in range(1000):
        net = fresh_homogeneous()
        counts.append(len(select_cluster_heads(net, ProtocolKind.DEEC, P10, rng)))
    assert 8 <= np.mean(counts) <= 12


def test_select_cluster_heads_fraction_within_three_sigma():
    # Empirical CH fraction over 1000 fresh elections vs the Bernoulli model.
    rng = np.random.default_rng(99)
    trials, n = 1000, 100
    total = 0
    for _ in range(trials):
        net = fresh_homogeneous(n=n)
        total += len(select_cluster_heads(net, ProtocolKind.TEEN, P10, rng))
    fraction = total / (trials * n)
    sigma = math.sqrt(0.1 * 0.9 / (trials * n))
    assert abs(fraction - 0.1) <= 3 * sigma


def test_single_alive_node_is_forced_ch():
    net = fresh_homogeneous(n=5)
    for node in net.nodes[1:]:
        node.alive = False
        node.residual_energy = 0.0
    chs = select_cluster_heads(net, ProtocolKind.HEER_HARD, P10, np.random.default_rng(0))
    assert chs == {0}


def test_all_dead_yields_empty_set():
    net = fresh_homogeneous(n=5)
    for node in net.nodes:
        node.alive = False
        node.residual_energy = 0.0
    assert select_cluster_heads(net, ProtocolKind.DEEC, P10, np.random.default_rng(0)) == set()


def test_forced_ch_prefers_max_energy_lowest_id():
    net = fresh_homogeneous(n=4)
    for node in net.nodes:
        node.rotation_state = 0  # nobody eligible, force the fallback
        node.residual_energy = 0.25
    net.nodes[1].residual_energy = 0.3
    net.nodes[2].residual_energy = 0.3
    chs = select_cluster_heads(net, ProtocolKind.DEEC, P10, np.random.default_rng(0))
    assert chs == {1}


def test_epoch_fairness_no_reelection_within_epoch():
    net = fresh_homogeneous()
    rng = np.random.default_rng(5)
    seen = set()
    for r in range(rotation_epoch(0.1)):
        net.round_index = r
        chs = select_cluster_heads(net, ProtocolKind.TEEN, P10, rng)
        assert not (chs & seen)
        seen |= chs
        for node in net.nodes:
            if node.rotation_state is not None:
                node.rotation_state += 1


def test_is_eligible_rotation_gate():
    node = make_node(0.5)
    assert is_eligible(node, 0.1)
    node.rotation_state = 0
    assert not is_eligible(node, 0.1)
    node.rotation_state = 9
    assert not is_eligible(node, 0.1)
    node.rotation_state = 10
    assert is_eligible(node, 0.1)


def test_form_clusters_single_head():
    net = fresh_homogeneous(n=10)
    assignment = form_clusters(net, {3})
    assert set(assignment) == set(range(10))
    assert set(assignment.values()) == {3}


def test_form_clusters_tie_breaks_to_lowest_id():
    config = FieldConfig(node_count=3, advanced_fraction=0.0)
    net = deploy(config, np.random.default_rng(0))
    net.nodes[0].x, net.nodes[0].y = 50.0, 50.0
    net.nodes[1].x, net.nodes[1].y = 40.0, 50.0  # CH at distance 10
    net.nodes[2].x, net.nodes[2].y = 60.0, 50.0  # CH at distance 10
    assignment = form_clusters(net, {1, 2})
    assert assignment[0] == 1


def test_form_clusters_matches_bruteforce_scan():
    net = fresh_homogeneous(n=100, seed=11)
    chs = set(np.random.default_rng(1).choice(100, size=10, replace=False).tolist())
    assignment = form_clusters(net, chs)
    xs = np.array([n.x for n in net.nodes])
    ys = np.array([n.y for n in net.nodes])
    heads = sorted(chs)
    d = np.hypot(xs[:, None] - xs[heads][None, :], ys[:, None] - ys[heads][None, :])
    for i in range(100):
        if i in chs:
            assert assignment[i] == i
        else:
            assert assignment[i] == heads[int(np.argmin(d[i]))]


TH = Thresholds(ht=100.0, st=2.0)


def test_should_transmit_first_trigger_stores_value():
    fire, state = should_transmit(SensorState(cv=105.0), TH, ProtocolKind.HEER_SOFT)
    assert fire and state.sv == 105.0


def test_should_transmit_below_hard_threshold():
    fire, state = should_transmit(SensorState(cv=99.0), TH, ProtocolKind.HEER_SOFT)
    assert not fire and state.sv is None


def test_should_transmit_soft_threshold_sequence():
    fire, state = should_transmit(SensorState(cv=104.0, sv=105.0), TH, ProtocolKind.HEER_SOFT)
    assert not fire and state.sv == 105.0
    fire, state = should_transmit(SensorState(cv=101.0, sv=105.0), TH, ProtocolKind.HEER_SOFT)
    assert fire and state.sv == 101.0


def test_should_transmit_hard_variant_ignores_soft_threshold():
    fire, state = should_transmit(SensorState(cv=104.0, sv=105.0), TH, ProtocolKind.HEER_HARD)
    assert fire and state.sv == 104.0
    fire, _ = should_transmit(SensorState(cv=99.0, sv=105.0), TH, ProtocolKind.HEER_HARD)
    assert not fire


def test_should_transmit_deec_is_unconditional():
    state = SensorState(cv=-1e9)
    fire, new_state = should_transmit(state, TH, ProtocolKind.DEEC)
    assert fire and new_state == state


def test_should_transmit_is_pure():
    state = SensorState(cv=104.0, sv=105.0)
    first = should_transmit(state, TH, ProtocolKind.TEEN)
    second = should_transmit(state, TH, ProtocolKind.TEEN)
    assert first == second
    assert state.sv == 105.0  # input untouched


def run_trace(trace, thresholds, kind):
    """Number of transmissions over a sensed-value trace."""
    state = SensorState(cv=trace[0])
    count = 0
    for cv in trace:
        fire, state = should_transmit(SensorState(cv=cv, sv=state.sv), thresholds, kind)
        count += fire
    return count


def first_triggers(trace, ht):
    state = SensorState(cv=trace[0])
    for cv in trace:
        fire, state = should_transmit(SensorState(cv=cv, sv=state.sv),
                                      Thresholds(ht=ht, st=0.0), ProtocolKind.HEER_HARD)
        if fire:
            return 1
    return 0


trace_strategy = st.lists(st.floats(min_value=0, max_value=200, allow_nan=False),
                          min_size=1, max_size=60)


@settings(max_examples=200)
@given(trace=trace_strategy,
       st1=st.floats(min_value=0, max_value=50),
       st2=st.floats(min_value=0, max_value=50))
def test_raising_soft_threshold_never_increases_transmissions(trace, st1, st2):
    lo, hi = sorted((st1, st2))
    kind = ProtocolKind.HEER_SOFT
    assert run_trace(trace, Thresholds(ht=100.0, st=hi), kind) <= \
           run_trace(trace, Thresholds(ht=100.0, st=lo), kind)


@settings(max_examples=200)
@given(trace=trace_strategy,
       ht1=st.floats(min_value=0, max_value=200),
       ht2=st.floats(min_value=0, max_value=200))
def test_raising_hard_threshold_never_increases_first_triggers(trace, ht1, ht2):
    lo, hi = sorted((ht1, ht2))
    assert first_triggers(trace, hi) <= first_triggers(trace, lo)
