"""Round loop, energy bookkeeping, and lifetime metrics.

Each round: elect cluster heads, form clusters, broadcast thresholds,
sample the environment, apply the protocol's transmission rule, then charge
radio costs and record deaths. The whole run is a pure function of the
configuration (including the master seed).

Seeded streams are kept disjoint: deployment and election derive from the
master seed with distinct tags, environment noise from the noise seed.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import environment, network as netmod, protocols, radio
from .config import SimConfig

DEPLOY_STREAM_TAG = 11
ELECTION_STREAM_TAG = 13

_NEVER_CH = 1 << 30
_DRAW_BLOCK = 1024


@dataclass
class RoundMetrics:
    round: int
    alive_count: int
    ch_count: int
    packets_to_ch: int
    packets_to_bs: int
    total_residual: float
    forced_ch: bool


@dataclass
class SimResult:
    config: SimConfig
    per_round: list
    stability_period: int
    instability_period: int
    lifetime: int
    censored: bool
    first_death_round: Optional[int]
    last_death_round: Optional[int]
    packets_to_ch_total: int
    packets_to_bs_total: int
    initial_energy: float
    consumed_energy: float
    max_conservation_error: float

    @property
    def throughput(self) -> int:
        """Packets delivered network-wide: member reports plus CH forwards."""
        return self.packets_to_ch_total + self.packets_to_bs_total


def deployment_rng(config: SimConfig) -> np.random.Generator:
    return np.random.default_rng([config.master_seed, DEPLOY_STREAM_TAG])


def election_rng(config: SimConfig) -> np.random.Generator:
    return np.random.default_rng([config.master_seed, ELECTION_STREAM_TAG])


class _Blocked:
    """Pre-draws fixed-size blocks from a generator to keep per-round cost low."""

    def __init__(self, draw, width):
        self._draw = draw
        self._width = width
        self._block = draw(_DRAW_BLOCK, width)
        self._row = 0

    def next_row(self):
        if self._row == _DRAW_BLOCK:
            self._block = self._draw(_DRAW_BLOCK, self._width)
            self._row = 0
        row = self._block[self._row]
        self._row += 1
        return row


def run(config: SimConfig) -> SimResult:
    """Simulate until every node is dead or max_rounds is reached."""
    config.validate()
    field = config.field
    params = config.radio
    kind = config.protocol
    n = field.node_count
    m_side = field.side_length

    net = netmod.deploy(field, deployment_rng(config))
    xs = np.array([node.x for node in net.nodes])
    ys = np.array([node.y for node in net.nodes])
    energy = np.array([node.residual_energy for node in net.nodes])
    factors = np.array([node.energy_factor for node in net.nodes])
    initial_total = float(energy.sum())

    # Static election weight of each node (multiplies p_opt * E_i / avg).
    if field.multi_level_factors is not None:
        weight = n * (1.0 + factors) / (n + float(np.sum(field.multi_level_factors)))
    else:
        weight = (1.0 + factors) / (1.0 + field.energy_factor * field.advanced_fraction)
    p_opt = config.election.p_opt

    baselines = environment.assign_regions(net, config.env)
    lo, hi = config.env.clamp_bounds(baselines)
    cv = baselines.astype(float).copy()
    sv = np.zeros(n)
    sv_present = np.zeros(n, dtype=bool)
    ht, st = config.thresholds.ht, config.thresholds.st

    bs_x, bs_y = field.bs
    dist_bs = np.hypot(xs - bs_x, ys - bs_y)

    data_bits = config.data_packet_bits
    ctrl_bits = config.control_packet_bits
    sense_energy = config.sense_energy
    e_elec, e_fs, e_mp, e_da = params.e_elec, params.e_fs, params.e_mp, params.e_da
    d0_sq = params.e_fs / params.e_mp

    env_stream = environment._delta_stream(config.env)
    delta = config.env.step_magnitude
    env_rows = _Blocked(lambda r, w: env_stream.uniform(-delta, delta, (r, w)), n)
    elect_stream = election_rng(config)
    elect_rows = _Blocked(lambda r, w: elect_stream.random((r, w)), n)

    alive = energy > 0
    rot = np.full(n, _NEVER_CH, dtype=np.int64)
    consumed = 0.0
    max_cons_err = 0.0

    rounds_out = []
    alive_out = []
    chs_out = []
    pch_out = []
    pbs_out = []
    res_out = []
    forced_out = []

    for r in range(config.max_rounds):
        if not alive.any():
            break
        avg = energy.sum() / n

        # Election: LEACH rotation threshold over the protocol's probability.
        if kind.energy_weighted:
            p = np.clip(p_opt * weight * energy / avg, 0.0, 1.0)
            p[~alive] = 0.0
        else:
            p = np.where(alive, p_opt, 0.0)
        epoch = np.maximum(np.rint(np.divide(1.0, p, out=np.full(n, np.inf),
                                             where=p > 0)), 1.0)
        eligible = rot >= epoch
        denom = 1.0 - p * np.mod(float(r), epoch)  # r mod inf = r, masked below
        thr = np.where(denom > 0, p / np.where(denom > 0, denom, 1.0), 1.0)
        thr = np.minimum(thr, 1.0)
        thr[~eligible | ~alive | (p <= 0)] = 0.0

        draws = elect_rows.next_row()
        ch = draws < thr
        forced = False
        if not ch.any():
            ch[int(np.argmax(energy))] = True
            forced = True
        rot[ch] = 0
        ch_ids = np.flatnonzero(ch)
        k = ch_ids.size

        # Cluster formation: nearest CH, lowest id on ties.
        dx = xs[:, None] - xs[ch_ids][None, :]
        dy = ys[:, None] - ys[ch_ids][None, :]
        d2 = dx * dx + dy * dy
        pick = np.argmin(d2, axis=1)
        assigned = ch_ids[pick]
        assigned[ch_ids] = ch_ids
        dist_ch = np.sqrt(d2[np.arange(n), pick])
        members = alive & ~ch

        # Sensing step of the clamped random walk.
        cv = np.clip(cv + env_rows.next_row(), lo, hi)

        # Transmission decision.
        if kind is protocols.ProtocolKind.DEEC:
            trans = alive.copy()
        else:
            first_fire = cv >= ht
            if kind.uses_soft_threshold:
                later_fire = np.abs(cv - sv) >= st
            else:
                later_fire = cv >= ht
            trans = alive & np.where(sv_present, later_fire, first_fire)
            sv[trans] = cv[trans]
            sv_present |= trans

        # Energy accounting.
        cost = np.zeros(n)
        bcast_d = netmod.expected_dist_to_ch(m_side, k)
        bcast_amp = e_fs * bcast_d ** 2 if bcast_d * bcast_d < d0_sq else e_mp * bcast_d ** 4
        cost[ch] += ctrl_bits * (e_elec + bcast_amp)
        cost[members] += ctrl_bits * e_elec

        tx_members = members & trans
        d = dist_ch[tx_members]
        amp = np.where(d * d < d0_sq, e_fs * d * d, e_mp * d ** 4)
        cost[tx_members] += data_bits * (e_elec + amp)

        reports = np.bincount(assigned[tx_members], minlength=n)
        cost += reports * (data_bits * e_elec)
        signals = reports + (trans & ch)
        active = ch & (signals > 0)
        cost[active] += data_bits * e_da * signals[active]
        d = dist_bs[active]
        amp = np.where(d * d < d0_sq, e_fs * d * d, e_mp * d ** 4)
        cost[active] += data_bits * (e_elec + amp)
        if sense_energy:
            cost[alive] += sense_energy

        before = energy.sum()
        energy = np.maximum(energy - cost, 0.0)
        total_residual = energy.sum()
        consumed += before - total_residual
        alive = energy > 0
        rot += 1

        err = abs(total_residual + consumed - initial_total) / initial_total
        if err > max_cons_err:
            max_cons_err = err

        rounds_out.append(r)
        alive_out.append(int(alive.sum()))
        chs_out.append(int(k))
        pch_out.append(int(tx_members.sum()))
        pbs_out.append(int(active.sum()))
        res_out.append(float(total_residual))
        forced_out.append(forced)

    per_round = [RoundMetrics(*row) for row in zip(
        rounds_out, alive_out, chs_out, pch_out, pbs_out, res_out, forced_out)]
    stability, instability, lifetime, censored = compute_lifetimes(alive_out, n)
    any_death = any(a < n for a in alive_out)
    first_death = stability if any_death else None
    last_death = stability + instability if not censored else None
    return SimResult(
        config=config,
        per_round=per_round,
        stability_period=stability,
        instability_period=instability,
        lifetime=lifetime,
        censored=censored,
        first_death_round=first_death,
        last_death_round=last_death,
        packets_to_ch_total=int(sum(pch_out)),
        packets_to_bs_total=int(sum(pbs_out)),
        initial_energy=initial_total,
        consumed_energy=consumed,
        max_conservation_error=max_cons_err,
    )


def compute_lifetimes(per_round, node_count: int):
    """Stability / instability / lifetime from an alive-count trace.

    Accepts RoundMetrics objects or plain alive counts. Stability is the
    first round with a death, instability runs until the last death. A run
    where nodes remain alive at the end is censored: the simulated horizon
    stands in for the missing death rounds.
    """
    alive = [m.alive_count if hasattr(m, "alive_count") else m for m in per_round]
    if not alive:
        raise ValueError("empty round trace")
    total = len(alive)
    stability = next((i for i, a in enumerate(alive) if a < node_count), None)
    if stability is None:
        return total, 0, total, True
    dead = next((i for i, a in enumerate(alive) if a == 0), None)
    if dead is None:
        return stability, total - stability, total, True
    return stability, dead - stability, dead, False


@dataclass
class BatchStats:
    config: SimConfig
    runs: list
    stability_mean: float
    stability_sd: float
    lifetime_mean: float
    lifetime_sd: float
    throughput_mean: float
    throughput_sd: float


def _mean_sd(values):
    arr = np.asarray(values, dtype=float)
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), sd


def _run_with_seed(args):
    config, seed = args
    from dataclasses import replace
    env = replace(config.env, noise_seed=seed if config.env.noise_seed == config.master_seed
                  else config.env.noise_seed)
    return run(replace(config, master_seed=seed, env=env))


def run_batch(configs, seeds, n_jobs: int = 1):
    """Run every (config, seed) pair and aggregate lifetime statistics.

    Output order is config order; within a config, seed order. Each run
    re-derives its environment noise from the seed unless the config pinned
    an explicit noise seed.
    """
    if not configs or not seeds:
        raise ValueError("run_batch needs at least one config and one seed")
    jobs = [(cfg, seed) for cfg in configs for seed in seeds]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_run_with_seed, jobs))
    else:
        results = [_run_with_seed(job) for job in jobs]

    stats = []
    for i, cfg in enumerate(configs):
        runs = results[i * len(seeds):(i + 1) * len(seeds)]
        st_mean, st_sd = _mean_sd([res.stability_period for res in runs])
        lt_mean, lt_sd = _mean_sd([res.lifetime for res in runs])
        tp_mean, tp_sd = _mean_sd([res.throughput for res in runs])
        stats.append(BatchStats(
            config=cfg, runs=runs,
            stability_mean=st_mean, stability_sd=st_sd,
            lifetime_mean=lt_mean, lifetime_sd=lt_sd,
            throughput_mean=tp_mean, throughput_sd=tp_sd,
        ))
    return stats
