"""Directional gain models for wearable transmit antennas.

Two pattern families cover the device archetypes of interest: a
parabolic main-lobe envelope with a sidelobe floor, suited to
patch-style radiators, and a uniform linear array factor for
end-fire element arrays.  Angles are degrees at the API boundary
and radians internally; offsets from boresight are wrapped to the
principal range so every pattern is periodic over a full turn.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["PatternModel", "AntennaConfig", "gain_dbi"]

_TWO_PI = 2.0 * math.pi
# denominators below this magnitude are treated as array-factor singularities
_SIN_EPS = 1e-12


class PatternModel(enum.Enum):
    """Selector for the concrete gain pattern realization."""

    PARABOLIC_ENVELOPE = "parabolic-envelope"
    LINEAR_ARRAY_FACTOR = "linear-array-factor"


@dataclass(frozen=True)
class AntennaConfig:
    """Immutable description of one transmit antenna.

    theta is elevation, phi is azimuth, both in degrees.  With
    ``omni_azimuth`` set, the parabolic envelope drops its azimuth
    term so gain varies with elevation only; the array factor is
    azimuth-flat by construction.  ``sidelobe_floor_db`` is the
    maximum attenuation below boresight, so gain is always inside
    [g_max_dbi - sidelobe_floor_db, g_max_dbi].
    """

    model: PatternModel
    g_max_dbi: float
    n_elements: int = 1
    element_spacing_wavelengths: float = 0.5
    theta_3db_deg: float = 93.0
    sidelobe_floor_db: float = 30.0
    boresight_elevation_deg: float = 0.0
    boresight_azimuth_deg: float = 0.0
    omni_azimuth: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.model, PatternModel):
            raise ValueError(f"model must be a PatternModel member, got {self.model!r}")
        if not math.isfinite(self.g_max_dbi):
            raise ValueError("g_max_dbi must be finite")
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError("n_elements must be an integer >= 1")
        if not (math.isfinite(self.element_spacing_wavelengths)
                and self.element_spacing_wavelengths >= 0.0):
            raise ValueError("element_spacing_wavelengths must be >= 0")
        if not (math.isfinite(self.theta_3db_deg) and 0.0 < self.theta_3db_deg <= 180.0):
            raise ValueError("theta_3db_deg must lie in (0, 180]")
        if not (math.isfinite(self.sidelobe_floor_db) and self.sidelobe_floor_db > 0.0):
            raise ValueError("sidelobe_floor_db must be > 0")
        if not math.isfinite(self.boresight_elevation_deg):
            raise ValueError("boresight_elevation_deg must be finite")
        if not math.isfinite(self.boresight_azimuth_deg):
            raise ValueError("boresight_azimuth_deg must be finite")


def _wrap_rad(angle_rad):
    # principal offset in [-pi, pi); works elementwise on arrays
    return (angle_rad + math.pi) % _TWO_PI - math.pi


def _attenuation_db(config: AntennaConfig, theta_rad, phi_rad) -> np.ndarray:
    """Attenuation below boresight in dB, clipped to [0, sidelobe_floor_db].

    Accepts scalars or broadcastable arrays of absolute angles in
    radians.  The result keeps the broadcast shape of the inputs that
    the selected model actually uses, so a pattern that ignores one
    axis returns an array constant along it.
    """
    dtheta = _wrap_rad(np.asarray(theta_rad, dtype=float)
                       - math.radians(config.boresight_elevation_deg))
    floor_db = config.sidelobe_floor_db

    if config.model is PatternModel.PARABOLIC_ENVELOPE:
        theta_3db = math.radians(config.theta_3db_deg)
        att = 12.0 * (dtheta / theta_3db) ** 2
        if not config.omni_azimuth:
            dphi = _wrap_rad(np.asarray(phi_rad, dtype=float)
                             - math.radians(config.boresight_azimuth_deg))
            att = att + 12.0 * (dphi / theta_3db) ** 2
        return np.minimum(att, floor_db)

    n = config.n_elements
    x = math.pi * config.element_spacing_wavelengths * np.sin(dtheta)
    num = np.sin(n * x)
    den = np.sin(x)
    singular = np.abs(den) < _SIN_EPS
    # sin(n*x)/sin(x) -> +-n wherever sin(x) vanishes (main and grating lobes)
    ratio = np.where(singular, float(n), num / np.where(singular, 1.0, den))
    rel_amp = np.clip(np.abs(ratio) / n, 10.0 ** (-floor_db / 20.0), 1.0)
    return np.minimum(-20.0 * np.log10(rel_amp), floor_db)


def _power_ratio(config: AntennaConfig, theta_rad, phi_rad) -> np.ndarray:
    """Linear power gain relative to boresight, in [10^(-floor/10), 1]."""
    return 10.0 ** (-_attenuation_db(config, theta_rad, phi_rad) / 10.0)


def gain_dbi(config: AntennaConfig, theta_deg: float, phi_deg: float = 0.0) -> float:
    """Gain toward (theta_deg, phi_deg) in dBi.

    Boresight returns g_max_dbi exactly; every other direction is
    attenuated by the selected pattern, never by more than the
    sidelobe floor.
    """
    if not (math.isfinite(theta_deg) and math.isfinite(phi_deg)):
        raise ValueError("angles must be finite")
    att = float(_attenuation_db(config, math.radians(theta_deg), math.radians(phi_deg)))
    return config.g_max_dbi - att
