"""Sectorized cellular layout and the air-to-ground propagation model.

Towers carry three (by default) sector antennas with a mechanical downtilt
sized for ground users, which is what makes low flight see strong serving
signal and high flight see a forest of equally weak cells.  Propagation is
free-space with an altitude-dependent clutter excess: links whose ground
range exceeds a cutoff and whose airborne end sits below the surrounding
rooftop line pay extra loss proportional to how far below the rooftops it
flies.  Shadow fading is a frozen per-cell draw from a counter-based
generator so that runs are reproducible and mode pairs see identical fades.
"""

import math
import statistics
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .antenna import quadratic_rolloff
from .geokin import Direction, EnuPosition, UAVState, bearing_elevation, wrap_180

RE_PER_RB = 12
RB_BANDWIDTH_HZ = 180_000.0


@dataclass(frozen=True)
class SectorPattern:
    """Parametric single-lobe model of a macrocell sector antenna."""

    gain_dbi: float = 15.0
    hpbw_az_deg: float = 65.0
    hpbw_el_deg: float = 10.0
    attenuation_max_db: float = 30.0

    def __post_init__(self):
        if self.hpbw_az_deg <= 0.0 or self.hpbw_el_deg <= 0.0:
            raise ValueError("beamwidths must be > 0")
        if self.attenuation_max_db < 0.0:
            raise ValueError("attenuation_max_db must be >= 0")


@dataclass(frozen=True)
class Sector:
    """One cell: a sector antenna at a tower plus its radio configuration.

    position.up is the antenna height above ground.  azimuth_deg points the
    boresight clockwise from north; downtilt_deg > 0 aims it below the
    horizon.  tx_power_dbm is total power over the whole carrier.
    """

    cell_id: int
    position: EnuPosition
    azimuth_deg: float
    downtilt_deg: float = 6.0
    tx_power_dbm: float = 46.0
    n_rb: int = 50
    carrier_mhz: float = 1800.0
    pattern: SectorPattern = field(default_factory=SectorPattern)

    def __post_init__(self):
        if self.cell_id < 0:
            raise ValueError("cell_id must be >= 0")
        if self.n_rb < 1:
            raise ValueError("n_rb must be >= 1")
        if self.carrier_mhz <= 0.0:
            raise ValueError("carrier_mhz must be > 0")


@dataclass(frozen=True)
class ChannelParams:
    """Propagation constants shared by every link in a scenario."""

    los_cutoff_m: float = 500.0
    rooftop_height_m: float = 30.0
    nlos_slope_db_per_m: float = 1.0
    shadowing_sigma_db: float = 0.0
    noise_figure_ue_db: float = 7.0
    noise_figure_bs_db: float = 5.0

    def __post_init__(self):
        if self.los_cutoff_m < 0.0:
            raise ValueError("los_cutoff_m must be >= 0")
        if self.nlos_slope_db_per_m < 0.0:
            raise ValueError("nlos_slope_db_per_m must be >= 0")
        if self.shadowing_sigma_db < 0.0:
            raise ValueError("shadowing_sigma_db must be >= 0")


def pathloss(distance_m: float, carrier_mhz: float, uav_height_m: float,
             ground_distance_m: float, channel: ChannelParams) -> float:
    """Link pathloss in dB: free-space plus the below-rooftop clutter excess.

    The excess applies only beyond the line-of-sight cutoff range and only
    while the airborne end is below the rooftop line; it grows linearly with
    the height deficit.  At or above rooftop height the link is pure
    free-space at any range.
    """
    if distance_m <= 0.0:
        raise ValueError(f"distance {distance_m!r} must be > 0")
    fspl = (
        32.45
        + 20.0 * math.log10(distance_m / 1000.0)
        + 20.0 * math.log10(carrier_mhz)
    )
    excess = 0.0
    if ground_distance_m > channel.los_cutoff_m:
        excess = max(
            0.0,
            channel.nlos_slope_db_per_m * (channel.rooftop_height_m - uav_height_m),
        )
    return fspl + excess


def sector_gain(pattern: SectorPattern, az_off_deg: float, el_off_deg: float) -> float:
    """Gain (dBi) of a sector antenna at an offset from its boresight."""
    az = wrap_180(az_off_deg)
    return pattern.gain_dbi - quadratic_rolloff(
        az, el_off_deg,
        pattern.hpbw_az_deg, pattern.hpbw_el_deg,
        pattern.attenuation_max_db,
    )


def per_re_tx_power(sector: Sector) -> float:
    """Transmit power per resource element, dBm (power split evenly)."""
    return sector.tx_power_dbm - 10.0 * math.log10(RE_PER_RB * sector.n_rb)


class LinkBudget(NamedTuple):
    """Geometry-dependent parts of one downlink: loss and sector gain."""

    pathloss_db: float
    sector_gain_dbi: float
    uav_to_bs: Direction


def link_budget(sector: Sector, uav_position: EnuPosition,
                channel: ChannelParams, shadow_db: float = 0.0) -> LinkBudget:
    """Pathloss (including shadowing) and sector gain for one link."""
    distance = sector.position.distance(uav_position)
    ground = sector.position.horizontal_distance(uav_position)
    pl = pathloss(distance, sector.carrier_mhz, uav_position.up, ground, channel)
    bs_to_uav = bearing_elevation(sector.position, uav_position)
    az_off = wrap_180(bs_to_uav.bearing - sector.azimuth_deg)
    # Downtilt moves the boresight below the horizon, so a target at the
    # horizon sits +downtilt above it.
    el_off = bs_to_uav.elevation + sector.downtilt_deg
    gain = sector_gain(sector.pattern, az_off, el_off)
    return LinkBudget(pl + shadow_db, gain, bearing_elevation(uav_position, sector.position))


def link_rsrp(sector: Sector, uav: UAVState, port_gain_dbi: float,
              channel: ChannelParams, shadow_db: float = 0.0) -> float:
    """RSRP (dBm) one airborne antenna port would measure from one cell."""
    budget = link_budget(sector, uav.position, channel, shadow_db)
    return (
        per_re_tx_power(sector)
        + budget.sector_gain_dbi
        + port_gain_dbi
        - budget.pathloss_db
    )


def shadow_fading_db(seed: int, cell_id: int, sigma_db: float) -> float:
    """Frozen shadow-fading draw for one cell, dB.

    Counter-based: a Philox4x64-10 block keyed by the scenario seed with the
    cell id as the counter yields one uniform 64-bit word, which is mapped
    through the inverse normal CDF.  The draw depends only on (seed, cell_id),
    never on evaluation order, so paired runs over the same deployment see
    identical fades by construction.
    """
    if sigma_db == 0.0:
        return 0.0
    word = int(np.random.Philox(key=seed, counter=[cell_id, 0, 0, 0]).random_raw(1)[0])
    uniform = (word + 0.5) / 2.0**64
    return sigma_db * statistics.NormalDist().inv_cdf(uniform)


@dataclass(frozen=True)
class Tower:
    """A mast position: expands into one Sector per configured azimuth."""

    position: EnuPosition
    azimuths_deg: tuple[float, ...] = (0.0, 120.0, 240.0)

    def __post_init__(self):
        object.__setattr__(self, "azimuths_deg", tuple(self.azimuths_deg))
        if not self.azimuths_deg:
            raise ValueError("tower needs at least one sector azimuth")


@dataclass(frozen=True)
class Deployment:
    """All cells of a scenario, with ids unique and stable across runs."""

    sectors: tuple[Sector, ...]

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        if not self.sectors:
            raise ValueError("deployment needs at least one sector")
        ids = [s.cell_id for s in self.sectors]
        if len(set(ids)) != len(ids):
            raise ValueError("cell ids must be unique")

    @classmethod
    def from_towers(cls, towers, *, downtilt_deg=6.0, tx_power_dbm=46.0,
                    n_rb=50, carrier_mhz=1800.0,
                    pattern: SectorPattern | None = None,
                    first_cell_id: int = 1) -> "Deployment":
        """Expand towers into sectors, numbering cells tower-major from 1."""
        pattern = pattern if pattern is not None else SectorPattern()
        sectors = []
        cell_id = first_cell_id
        for tower in towers:
            for az in tower.azimuths_deg:
                sectors.append(Sector(
                    cell_id=cell_id,
                    position=tower.position,
                    azimuth_deg=az,
                    downtilt_deg=downtilt_deg,
                    tx_power_dbm=tx_power_dbm,
                    n_rb=n_rb,
                    carrier_mhz=carrier_mhz,
                    pattern=pattern,
                ))
                cell_id += 1
        return cls(tuple(sectors))

    def by_id(self, cell_id: int) -> Sector:
        for sector in self.sectors:
            if sector.cell_id == cell_id:
                return sector
        raise KeyError(f"no cell with id {cell_id}")
