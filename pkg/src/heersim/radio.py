"""First-order radio energy model.

Transmission cost is linear in bits with a distance-dependent amplifier
term: d^2 below the crossover distance, d^4 above it. Reception and
aggregation are linear in bits. All functions are pure and accept
numpy arrays for the distance argument.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RadioParams:
    """Energy coefficients of the radio hardware.

    e_elec: J/bit spent by TX/RX electronics.
    e_fs:   J/bit/m^2 free-space amplifier coefficient.
    e_mp:   J/bit/m^4 multipath amplifier coefficient.
    e_da:   J/bit/signal spent aggregating one member report.
    """

    e_elec: float = 5e-9
    e_fs: float = 10e-12
    e_mp: float = 0.013e-12
    e_da: float = 5e-9

    def __post_init__(self):
        for name in ("e_elec", "e_fs", "e_mp", "e_da"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"radio.{name} must be strictly positive, got {value!r}")


def crossover_distance(params: RadioParams) -> float:
    """Distance (m) at which the free-space and multipath branches meet."""
    return math.sqrt(params.e_fs / params.e_mp)


def tx_energy(params: RadioParams, bits, distance):
    """Energy (J) to transmit `bits` over `distance` meters.

    Uses the free-space amplifier below the crossover distance and the
    multipath amplifier at or above it.
    """
    d = np.asarray(distance, dtype=float)
    d0 = crossover_distance(params)
    amp = np.where(d < d0, params.e_fs * d * d, params.e_mp * d ** 4)
    out = bits * params.e_elec + bits * amp
    return float(out) if np.ndim(distance) == 0 else out


def rx_energy(params: RadioParams, bits) -> float:
    """Energy (J) to receive `bits`."""
    return bits * params.e_elec


def aggregation_energy(params: RadioParams, bits, signals) -> float:
    """Energy (J) for a cluster head to aggregate `signals` reports of `bits` each."""
    return bits * signals * params.e_da
