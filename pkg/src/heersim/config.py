"""Experiment configuration: defaults, flat-file parsing, and overrides.

Config files are flat `key = value` lines with `#` comments. Resolution is
layered: built-in defaults, then file contents, then explicit overrides.
Unknown keys and invariant violations are rejected with the offending key
in the message.
"""

import hashlib
from dataclasses import dataclass, field as dc_field

from .environment import EnvConfig
from .network import ConfigError, FieldConfig
from .protocols import ElectionParams, ProtocolKind, Thresholds
from .radio import RadioParams

# key -> (type, default). noise_seed -1 means "derive from master seed".
SCHEMA = {
    "n": (int, 100),
    "field_size": (float, 100.0),
    "m": (float, 0.1),
    "a": (float, 1.0),
    "e0": (float, 0.5),
    "multi_level_factors": (str, ""),
    "e_elec": (float, 5e-9),
    "e_fs": (float, 10e-12),
    "e_mp": (float, 0.013e-12),
    "e_da": (float, 5e-9),
    "protocol": (str, "heer_soft"),
    "ht": (float, 100.0),
    "st": (float, 2.0),
    "p_opt": (float, 0.1),
    "baseline_low": (float, 95.0),
    "baseline_high": (float, 120.0),
    "hot_region_fraction": (float, 0.5),
    "step_magnitude": (float, 5.0),
    "noise_seed": (int, -1),
    "data_bits": (int, 4000),
    "control_bits": (int, 200),
    "sense_energy": (float, 0.0),
    "max_rounds": (int, 10000),
    "seed": (int, 1),
}


@dataclass
class SimConfig:
    field: FieldConfig
    radio: RadioParams
    protocol: ProtocolKind
    thresholds: Thresholds
    election: ElectionParams
    env: EnvConfig
    data_packet_bits: int = 4000
    control_packet_bits: int = 200
    sense_energy: float = 0.0  # J per alive node per round, 0 = free sensing
    max_rounds: int = 10000
    master_seed: int = 1

    def validate(self):
        if self.sense_energy < 0:
            raise ConfigError(f"sense_energy must be >= 0, got {self.sense_energy}")
        self.field.validate()
        self.env.validate()
        if self.max_rounds < 1:
            raise ConfigError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.data_packet_bits < 1 or self.control_packet_bits < 1:
            raise ConfigError("packet sizes must be >= 1 bit")


def _convert(key: str, raw: str):
    kind, _ = SCHEMA[key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw.strip()
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse {raw!r} as {kind.__name__}")


def parse_config_file(path) -> dict:
    """Read `key = value` lines into a dict of typed values."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in SCHEMA:
                raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
            values[key] = _convert(key, raw)
    return values


def parse_overrides(pairs) -> dict:
    """Parse `key=value` strings from the command line."""
    values = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r}: expected key=value")
        key, raw = (part.strip() for part in pair.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"override: unknown config key '{key}'")
        values[key] = _convert(key, raw)
    return values


def resolve(*layers) -> dict:
    """Merge value dicts over the defaults, later layers winning."""
    values = {key: default for key, (_, default) in SCHEMA.items()}
    for layer in layers:
        values.update(layer)
    return values


def build_sim_config(values: dict) -> SimConfig:
    """Turn a fully resolved value dict into a validated SimConfig."""
    factors = None
    if values["multi_level_factors"].strip():
        try:
            factors = [float(tok) for tok in values["multi_level_factors"].split(",")]
        except ValueError:
            raise ConfigError("config key 'multi_level_factors': expected comma-separated floats")

    try:
        protocol = ProtocolKind(values["protocol"].lower())
    except ValueError:
        names = ", ".join(k.value for k in ProtocolKind)
        raise ConfigError(f"config key 'protocol': {values['protocol']!r} is not one of {names}")

    noise_seed = values["noise_seed"]
    if noise_seed < 0:
        noise_seed = values["seed"]

    try:
        config = SimConfig(
            field=FieldConfig(
                side_length=values["field_size"],
                node_count=values["n"],
                advanced_fraction=values["m"],
                energy_factor=values["a"],
                initial_energy=values["e0"],
                multi_level_factors=factors,
            ),
            radio=RadioParams(
                e_elec=values["e_elec"], e_fs=values["e_fs"],
                e_mp=values["e_mp"], e_da=values["e_da"],
            ),
            protocol=protocol,
            thresholds=Thresholds(ht=values["ht"], st=values["st"]),
            election=ElectionParams(p_opt=values["p_opt"]),
            env=EnvConfig(
                baseline_low=values["baseline_low"],
                baseline_high=values["baseline_high"],
                hot_region_fraction=values["hot_region_fraction"],
                step_magnitude=values["step_magnitude"],
                noise_seed=noise_seed,
            ),
            data_packet_bits=values["data_bits"],
            control_packet_bits=values["control_bits"],
            sense_energy=values["sense_energy"],
            max_rounds=values["max_rounds"],
            master_seed=values["seed"],
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc))
    config.validate()
    return config


def load_config(path=None, overrides=()) -> SimConfig:
    layers = []
    if path is not None:
        layers.append(parse_config_file(path))
    layers.append(parse_overrides(overrides))
    return build_sim_config(resolve(*layers))


def config_values(config: SimConfig) -> dict:
    """Flat key/value view of a SimConfig, inverse of build_sim_config."""
    factors = config.field.multi_level_factors
    return {
        "n": config.field.node_count,
        "field_size": config.field.side_length,
        "m": config.field.advanced_fraction,
        "a": config.field.energy_factor,
        "e0": config.field.initial_energy,
        "multi_level_factors": ",".join(repr(a) for a in factors) if factors else "",
        "e_elec": config.radio.e_elec,
        "e_fs": config.radio.e_fs,
        "e_mp": config.radio.e_mp,
        "e_da": config.radio.e_da,
        "protocol": config.protocol.value,
        "ht": config.thresholds.ht,
        "st": config.thresholds.st,
        "p_opt": config.election.p_opt,
        "baseline_low": config.env.baseline_low,
        "baseline_high": config.env.baseline_high,
        "hot_region_fraction": config.env.hot_region_fraction,
        "step_magnitude": config.env.step_magnitude,
        "noise_seed": config.env.noise_seed,
        "data_bits": config.data_packet_bits,
        "control_bits": config.control_packet_bits,
        "sense_energy": config.sense_energy,
        "max_rounds": config.max_rounds,
        "seed": config.master_seed,
    }


def config_hash(config: SimConfig) -> str:
    """Short stable digest of the fully resolved configuration."""
    blob = "\n".join(f"{k}={v!r}" for k, v in sorted(config_values(config).items()))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]
