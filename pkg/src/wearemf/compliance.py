"""Regulatory SAR limits, minimum safe-distance solving, distance sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .antenna import gain_dbi
from .exposure import (
    ExposureResult,
    QuadratureSpec,
    TissueProperties,
    power_density,
    sar_avg,
    sar_boundary,
)
from .link import LinkScenario, db_to_linear, dbm_to_watts, fspl_db, shannon_rate_bps, snr_db

__all__ = [
    "ComplianceLimit",
    "BUILTIN_LIMITS",
    "COMPLIANT_EVERYWHERE",
    "DistanceSearch",
    "LimitUnreachableError",
    "min_safe_distance",
    "sweep",
]

# the whole search range already complies; there is no crossing to find
COMPLIANT_EVERYWHERE = "compliant-everywhere"


class LimitUnreachableError(RuntimeError):
    """Raised when even the far end of the search range exceeds the limit."""


@dataclass(frozen=True)
class ComplianceLimit:
    """A named regulatory SAR threshold."""

    name: str
    sar_limit_w_per_kg: float
    averaging_mass_note: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("name must be non-empty")
        if not (math.isfinite(self.sar_limit_w_per_kg) and self.sar_limit_w_per_kg > 0.0):
            raise ValueError("sar_limit_w_per_kg must be > 0")


BUILTIN_LIMITS = {
    "ICNIRP": ComplianceLimit("ICNIRP", 2.0, "10-g average"),
    "FCC": ComplianceLimit("FCC", 1.6, "1-g average"),
}


@dataclass(frozen=True)
class DistanceSearch:
    """Bracket and tolerance for the safe-distance bisection."""

    d_lo_m: float = 1e-3
    d_hi_m: float = 1.0
    tol_m: float = 1e-5

    def __post_init__(self) -> None:
        if not (math.isfinite(self.d_lo_m) and self.d_lo_m > 0.0):
            raise ValueError("d_lo_m must be > 0")
        if not (math.isfinite(self.d_hi_m) and self.d_hi_m > self.d_lo_m):
            raise ValueError("d_hi_m must exceed d_lo_m")
        if not (math.isfinite(self.tol_m) and self.tol_m > 0.0):
            raise ValueError("tol_m must be > 0")


def min_safe_distance(
    scenario: LinkScenario,
    tissue: TissueProperties,
    limit: ComplianceLimit,
    search: DistanceSearch = DistanceSearch(),
    quadrature: QuadratureSpec = QuadratureSpec(),
) -> Union[float, str]:
    """Smallest compliant separation in [d_lo_m, d_hi_m], to within tol_m.

    The averaged SAR decreases strictly with distance, so bisection
    brackets the crossing of the limit.  Returns COMPLIANT_EVERYWHERE
    when the near end of the range already complies, and raises
    LimitUnreachableError when the far end does not.  The returned
    distance itself always complies.
    """
    threshold = limit.sar_limit_w_per_kg
    lo = search.d_lo_m
    hi = search.d_hi_m
    if sar_avg(scenario, tissue, lo, quadrature) <= threshold:
        return COMPLIANT_EVERYWHERE
    if sar_avg(scenario, tissue, hi, quadrature) > threshold:
        raise LimitUnreachableError(
            f"averaged SAR still exceeds {threshold} W/kg ({limit.name}) "
            f"at the far end of the search range, {hi} m")
    while hi - lo > search.tol_m:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval no longer splittable in floating point
        if sar_avg(scenario, tissue, mid, quadrature) <= threshold:
            hi = mid
        else:
            lo = mid
    return hi


def sweep(
    scenario: LinkScenario,
    tissue: TissueProperties,
    distances: Sequence[float],
    quadrature: QuadratureSpec = QuadratureSpec(),
) -> list[ExposureResult]:
    """One ExposureResult per distance, boresight link plus averaged SAR.

    Distances must be strictly increasing and positive; an empty
    sequence yields an empty list.  Row order matches input order.
    """
    previous = 0.0
    for d in distances:
        if not (math.isfinite(d) and d > previous):
            raise ValueError("distances must be positive and strictly increasing")
        previous = d

    antenna = scenario.tx_antenna
    boresight_gain_db = gain_dbi(antenna, antenna.boresight_elevation_deg,
                                 antenna.boresight_azimuth_deg)
    boresight_gain = db_to_linear(boresight_gain_db)
    tx_power_w = dbm_to_watts(scenario.tx_power_dbm)

    rows: list[ExposureResult] = []
    for d in distances:
        snr = snr_db(scenario, d)
        pd_boresight = power_density(tx_power_w, boresight_gain, d)
        rows.append(ExposureResult(
            distance_m=d,
            path_loss_db=fspl_db(d, scenario.carrier_mhz),
            snr_db=snr,
            rate_bps=shannon_rate_bps(scenario.bandwidth_hz, snr),
            boresight_pd_w_per_m2=pd_boresight,
            boresight_sar_w_per_kg=sar_boundary(pd_boresight, tissue),
            avg_sar_w_per_kg=sar_avg(scenario, tissue, d, quadrature),
        ))
    return rows
