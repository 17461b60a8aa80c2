"""Path loss, noise, SNR, and Shannon-rate evaluation for a wearable link.

All internal arithmetic is linear SI (watts, meters, hertz); decibel
quantities exist only at the API boundary.  The conversion helpers
here are shared by the exposure and compliance layers so dB handling
lives in exactly one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .antenna import AntennaConfig, gain_dbi

__all__ = [
    "BOLTZMANN_J_PER_K",
    "LinkScenario",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "fspl_db",
    "noise_power_dbm",
    "snr_db",
    "shannon_rate_bps",
]

BOLTZMANN_J_PER_K = 1.380649e-23  # exact by definition since the 2019 SI revision

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkScenario:
    """One transmitter/receiver pair with its radio parameters.

    The receiver is a fixed scalar gain; only the transmit side
    carries a directional pattern.  ``label`` is free text for
    placement metadata and has no numerical effect.
    """

    carrier_mhz: float
    bandwidth_hz: float
    tx_power_dbm: float
    tx_antenna: AntennaConfig
    rx_gain_dbi: float = 0.0
    noise_figure_db: float = 0.0
    temperature_k: float = 290.0
    label: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.tx_antenna, AntennaConfig):
            raise ValueError("tx_antenna must be an AntennaConfig")
        for name in ("carrier_mhz", "bandwidth_hz", "temperature_k"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be finite and > 0")
        if not math.isfinite(self.tx_power_dbm):
            raise ValueError("tx_power_dbm must be finite")
        if not math.isfinite(self.rx_gain_dbi):
            raise ValueError("rx_gain_dbi must be finite")
        if not (math.isfinite(self.noise_figure_db) and self.noise_figure_db >= 0.0):
            raise ValueError("noise_figure_db must be >= 0")


def db_to_linear(value_db: float) -> float:
    """Power ratio from decibels."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(ratio: float) -> float:
    """Decibels from a positive power ratio."""
    if not ratio > 0.0:
        raise ValueError("ratio must be > 0")
    return 10.0 * math.log10(ratio)


def dbm_to_watts(power_dbm: float) -> float:
    """Watts from dBm."""
    return 10.0 ** ((power_dbm - 30.0) / 10.0)


def watts_to_dbm(power_w: float) -> float:
    """dBm from watts."""
    if not power_w > 0.0:
        raise ValueError("power_w must be > 0")
    return 10.0 * math.log10(power_w) + 30.0


def fspl_db(distance_m: float, carrier_mhz: float) -> float:
    """Free-space path loss in dB for a distance in meters and carrier in MHz.

    Evaluates 20*log10(d) + 20*log10(f) - 27.55.  The formula diverges
    as d -> 0, so non-positive distances are rejected rather than
    returning a huge negative loss.
    """
    if not (math.isfinite(distance_m) and distance_m > 0.0):
        raise ValueError("distance_m must be finite and > 0")
    if not (math.isfinite(carrier_mhz) and carrier_mhz > 0.0):
        raise ValueError("carrier_mhz must be finite and > 0")
    return 20.0 * math.log10(distance_m) + 20.0 * math.log10(carrier_mhz) - 27.55


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float = 0.0,
                    temperature_k: float = 290.0) -> float:
    """Thermal noise power k*T*B referred to 1 mW, plus the noise figure."""
    if not (math.isfinite(bandwidth_hz) and bandwidth_hz > 0.0):
        raise ValueError("bandwidth_hz must be finite and > 0")
    if not (math.isfinite(temperature_k) and temperature_k > 0.0):
        raise ValueError("temperature_k must be finite and > 0")
    if not math.isfinite(noise_figure_db):
        raise ValueError("noise_figure_db must be finite")
    kTB_w = BOLTZMANN_J_PER_K * temperature_k * bandwidth_hz
    return watts_to_dbm(kTB_w) + noise_figure_db


def snr_db(scenario: LinkScenario, distance_m: float,
           theta_deg: float | None = None, phi_deg: float | None = None) -> float:
    """Received SNR in dB at a given distance and transmit direction.

    Chains transmit power, both antenna gains, free-space path loss,
    and the thermal noise floor.  Angles default to the transmit
    boresight, the configuration used for rate curves.
    """
    antenna = scenario.tx_antenna
    if theta_deg is None:
        theta_deg = antenna.boresight_elevation_deg
    if phi_deg is None:
        phi_deg = antenna.boresight_azimuth_deg
    rx_power_dbm = (scenario.tx_power_dbm
                    + gain_dbi(antenna, theta_deg, phi_deg)
                    + scenario.rx_gain_dbi
                    - fspl_db(distance_m, scenario.carrier_mhz))
    noise_dbm = noise_power_dbm(scenario.bandwidth_hz, scenario.noise_figure_db,
                                scenario.temperature_k)
    return rx_power_dbm - noise_dbm


def shannon_rate_bps(bandwidth_hz: float, snr_db: float) -> float:
    """Shannon capacity B*log2(1 + SNR) in bit/s.

    snr_db may be -inf (zero SNR, zero rate); NaN and +inf are
    rejected.
    """
    if not (math.isfinite(bandwidth_hz) and bandwidth_hz > 0.0):
        raise ValueError("bandwidth_hz must be finite and > 0")
    if math.isnan(snr_db) or snr_db == math.inf:
        raise ValueError("snr_db must not be NaN or +inf")
    snr_linear = 10.0 ** (snr_db / 10.0)
    return bandwidth_hz * math.log1p(snr_linear) / _LN2
