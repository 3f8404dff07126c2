"""Built-in experiment presets.

Each preset expands to one config per protocol (TEEN, DEEC, hard HEER,
soft HEER) over a shared base of overrides, mirroring the captioned
comparison experiments.
"""

from .config import SimConfig, build_sim_config, resolve
from .protocols import ProtocolKind

PROTOCOL_ORDER = [ProtocolKind.TEEN, ProtocolKind.DEEC,
                  ProtocolKind.HEER_HARD, ProtocolKind.HEER_SOFT]

# Shared environment/radio tuning for the comparison presets: a uniform
# attribute field whose walk crosses HT=100 often but not always, a mild
# multipath term so only far corner-to-sink links pay the d^4 rate, a small
# per-round sensing floor so idle nodes eventually die, and a CH duty high
# enough that election policy (uniform vs energy-weighted) separates the
# protocols.
_COMPARISON_BASE = {
    "baseline_high": 145.0,
    "baseline_low": 145.0,
    "hot_region_fraction": 1.0,
    "step_magnitude": 8.0,
    "e_mp": 1.5e-15,
    "sense_energy": 3e-5,
    "p_opt": 0.2,
}

PRESETS = {
    # Homogeneous comparison at HT=100, ST=2.
    "table2": {**_COMPARISON_BASE, "ht": 100.0, "st": 2.0, "m": 0.0},
    # Homogeneous comparison at HT=70, ST=10.
    "fig5": {**_COMPARISON_BASE, "ht": 70.0, "st": 10.0, "m": 0.0},
    # Two-level heterogeneous field: 10% advanced nodes at double energy.
    "hetero": {**_COMPARISON_BASE, "ht": 100.0, "st": 2.0, "m": 0.1, "a": 1.0},
}


def preset_names():
    return sorted(PRESETS)


def preset_configs(name: str) -> list:
    """Resolve a preset to its per-protocol SimConfigs, in Table-2 row order."""
    if name not in PRESETS:
        raise KeyError(name)
    base = PRESETS[name]
    configs = []
    for kind in PROTOCOL_ORDER:
        values = resolve(base, {"protocol": kind.value})
        configs.append(build_sim_config(values))
    return configs
