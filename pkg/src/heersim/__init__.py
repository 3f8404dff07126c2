"""Round-based wireless sensor network simulator comparing the TEEN, DEEC,
and HEER (hard/soft) clustering protocols under a first-order radio model."""

from .config import SimConfig, load_config
from .engine import RoundMetrics, SimResult, compute_lifetimes, run, run_batch
from .environment import EnvConfig
from .network import ConfigError, FieldConfig, Network, Node, deploy
from .protocols import ElectionParams, ProtocolKind, SensorState, Thresholds
from .radio import RadioParams

__all__ = [
    "ConfigError", "ElectionParams", "EnvConfig", "FieldConfig", "Network",
    "Node", "ProtocolKind", "RadioParams", "RoundMetrics", "SensorState",
    "SimConfig", "SimResult", "Thresholds", "compute_lifetimes", "deploy",
    "load_config", "run", "run_batch",
]
