"""Incident power density, air-skin reflection, and SAR evaluation.

The angle-averaged SAR integrates the transmit pattern over both
angles on [0, 2*pi] with composite trapezoidal quadrature and a
1/(2*pi)^2 normalization.  Distance factors out of that integral, so
the pattern average is computed once per antenna and grid, cached,
and reused; this keeps dense distance scans cheap and makes the
inverse-square behavior of the result exact in floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .antenna import AntennaConfig, _power_ratio
from .link import LinkScenario, db_to_linear, dbm_to_watts

__all__ = [
    "FREE_SPACE_IMPEDANCE_OHMS",
    "QuadratureSpec",
    "TissueProperties",
    "ExposureResult",
    "ConvergenceError",
    "power_density_from_field",
    "power_density",
    "reflection_coefficient",
    "sar_local",
    "sar_boundary",
    "sar_avg",
]

FREE_SPACE_IMPEDANCE_OHMS = 376.73  # plane-wave |E|^2 to W/m^2 conversion

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


class ConvergenceError(RuntimeError):
    """Raised when grid refinement moves the quadrature beyond tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid size and self-convergence tolerance for the angular average.

    ``samples_per_axis`` counts points including both endpoints of
    [0, 2*pi].  Every evaluation is checked against a doubled grid;
    a relative shift above ``convergence_tol`` raises
    ConvergenceError instead of returning a suspect value.
    """

    samples_per_axis: int = 361
    convergence_tol: float = 1e-3

    def __post_init__(self) -> None:
        if int(self.samples_per_axis) != self.samples_per_axis or self.samples_per_axis < 2:
            raise ValueError("samples_per_axis must be an integer >= 2")
        if not (math.isfinite(self.convergence_tol) and self.convergence_tol > 0.0):
            raise ValueError("convergence_tol must be > 0")


@dataclass(frozen=True)
class TissueProperties:
    """Dielectric and geometric skin parameters at the carrier frequency.

    ``rel_permittivity`` follows the engineering convention
    eps' - j*eps'' with a non-negative loss term.  When
    ``reflection_override`` is set it replaces the Fresnel value in
    every boundary calculation; leave it None to derive the
    reflection coefficient from the permittivity.
    """

    rel_permittivity: complex = complex(1.0, 0.0)
    conductivity_s_per_m: float = 0.0
    mass_density_kg_per_m3: float = 1000.0
    penetration_depth_m: float = 1e-3
    reflection_override: float | None = None

    def __post_init__(self) -> None:
        eps = complex(self.rel_permittivity)
        if not (math.isfinite(eps.real) and math.isfinite(eps.imag)):
            raise ValueError("rel_permittivity must be finite")
        if not (math.isfinite(self.conductivity_s_per_m) and self.conductivity_s_per_m >= 0.0):
            raise ValueError("conductivity_s_per_m must be >= 0")
        if not (math.isfinite(self.mass_density_kg_per_m3) and self.mass_density_kg_per_m3 > 0.0):
            raise ValueError("mass_density_kg_per_m3 must be > 0")
        if not (math.isfinite(self.penetration_depth_m) and self.penetration_depth_m > 0.0):
            raise ValueError("penetration_depth_m must be > 0")
        if self.reflection_override is not None:
            if not (math.isfinite(self.reflection_override)
                    and 0.0 <= self.reflection_override < 1.0):
                raise ValueError("reflection_override must lie in [0, 1)")


@dataclass(frozen=True)
class ExposureResult:
    """One distance sample of link and exposure quantities."""

    distance_m: float
    path_loss_db: float
    snr_db: float
    rate_bps: float
    boresight_pd_w_per_m2: float
    boresight_sar_w_per_kg: float
    avg_sar_w_per_kg: float

    def __post_init__(self) -> None:
        if not self.distance_m > 0.0:
            raise ValueError("distance_m must be > 0")
        for name in ("rate_bps", "boresight_pd_w_per_m2",
                     "boresight_sar_w_per_kg", "avg_sar_w_per_kg"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")


def power_density_from_field(e_field_v_per_m: float) -> float:
    """Plane-wave power density |E|^2 / eta_0 in W/m^2."""
    if not (math.isfinite(e_field_v_per_m) and e_field_v_per_m >= 0.0):
        raise ValueError("e_field_v_per_m must be >= 0")
    return e_field_v_per_m * e_field_v_per_m / FREE_SPACE_IMPEDANCE_OHMS


def power_density(tx_power_w: float, gain_linear: float, distance_m: float) -> float:
    """Far-field power density P*G / (4*pi*d^2) in W/m^2."""
    if not (math.isfinite(tx_power_w) and tx_power_w > 0.0):
        raise ValueError("tx_power_w must be > 0")
    if not (math.isfinite(gain_linear) and gain_linear > 0.0):
        raise ValueError("gain_linear must be > 0")
    if not (math.isfinite(distance_m) and distance_m > 0.0):
        raise ValueError("distance_m must be > 0")
    return tx_power_w * gain_linear / (_FOUR_PI * (distance_m * distance_m))


def reflection_coefficient(tissue: TissueProperties) -> float:
    """Field reflection magnitude at the air-skin boundary, in [0, 1).

    Uses the override when present, otherwise the normal-incidence
    Fresnel expression |(sqrt(eps) - 1) / (sqrt(eps) + 1)| with the
    principal complex square root.
    """
    if tissue.reflection_override is not None:
        return tissue.reflection_override
    eps = complex(tissue.rel_permittivity)
    if eps.real <= 0.0:
        raise ValueError("rel_permittivity must have a positive real part")
    root = cmath.sqrt(eps)
    return abs((root - 1.0) / (root + 1.0))


def sar_local(e_field_v_per_m: float, tissue: TissueProperties) -> float:
    """Point SAR sigma*|E|^2 / rho in W/kg for an in-tissue field."""
    if not (math.isfinite(e_field_v_per_m) and e_field_v_per_m >= 0.0):
        raise ValueError("e_field_v_per_m must be >= 0")
    return (tissue.conductivity_s_per_m * e_field_v_per_m * e_field_v_per_m
            / tissue.mass_density_kg_per_m3)


def sar_boundary(pd_w_per_m2: float, tissue: TissueProperties) -> float:
    """SAR at the air-skin boundary for an incident power density.

    The transmitted fraction (1 - gamma^2) of the incident power is
    taken as deposited across one penetration depth of tissue:
    2 * PD * (1 - gamma^2) / (depth * density).
    """
    if not (math.isfinite(pd_w_per_m2) and pd_w_per_m2 >= 0.0):
        raise ValueError("pd_w_per_m2 must be >= 0")
    gamma = reflection_coefficient(tissue)
    transmitted = 1.0 - gamma * gamma
    return 2.0 * pd_w_per_m2 * transmitted / (
        tissue.penetration_depth_m * tissue.mass_density_kg_per_m3)


@lru_cache(maxsize=64)
def _mean_power_ratio(antenna: AntennaConfig, samples: int) -> float:
    """Trapezoid average of the relative power pattern over [0, 2*pi]^2.

    Endpoint weights are halved per axis; with uniform spacing the
    weighted mean equals the normalized double integral.  The
    summation order is fixed, so repeated calls are bit-identical.
    """
    grid = np.linspace(0.0, _TWO_PI, samples)
    ratio = _power_ratio(antenna, grid[:, None], grid[None, :])
    # patterns that ignore an axis come back collapsed along it
    ratio = np.broadcast_to(ratio, (samples, samples))
    weights = np.ones(samples)
    weights[0] = weights[-1] = 0.5
    total = float(np.sum(ratio * (weights[:, None] * weights[None, :])))
    panels = samples - 1
    return total / (panels * panels)


def sar_avg(scenario: LinkScenario, tissue: TissueProperties, distance_m: float,
            quadrature: QuadratureSpec = QuadratureSpec()) -> float:
    """Angle-averaged boundary SAR at one distance, in W/kg.

    Averages the transmit pattern over both angles on [0, 2*pi]^2
    with a 1/(2*pi)^2 normalization, then applies the boundary SAR
    model to the resulting mean power density.  The pattern average
    is validated against a grid with doubled resolution; a relative
    drift above the configured tolerance raises ConvergenceError.
    """
    if not (math.isfinite(distance_m) and distance_m > 0.0):
        raise ValueError("distance_m must be > 0")
    antenna = scenario.tx_antenna
    samples = quadrature.samples_per_axis
    mean_ratio = _mean_power_ratio(antenna, samples)
    refined = _mean_power_ratio(antenna, 2 * (samples - 1) + 1)
    if abs(refined - mean_ratio) > quadrature.convergence_tol * abs(refined):
        raise ConvergenceError(
            f"pattern average moved from {mean_ratio!r} to {refined!r} on grid "
            f"doubling ({samples} to {2 * (samples - 1) + 1} samples per axis), "
            f"beyond relative tolerance {quadrature.convergence_tol!r}")
    mean_gain = db_to_linear(antenna.g_max_dbi) * mean_ratio
    pd_mean = power_density(dbm_to_watts(scenario.tx_power_dbm), mean_gain, distance_m)
    return sar_boundary(pd_mean, tissue)
