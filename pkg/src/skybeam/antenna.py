"""Far-field gain models for the airborne antennas.

The directional array is six identical patch elements looking outward every
60 degrees in the airframe's horizontal plane, only one of which is connected
to the modem at a time.  A low-gain monopole rides alongside as an
omnidirectional reference port.  Patterns are parametric single-lobe models:
a quadratic roll-off in both principal planes, floored at the front-to-back
ratio.  No sidelobe structure is modelled.
"""

import math
from dataclasses import dataclass, field

from .geokin import wrap_180


def quadratic_rolloff(az_off_deg: float, el_off_deg: float,
                      hpbw_az_deg: float, hpbw_el_deg: float,
                      max_attenuation_db: float) -> float:
    """Attenuation (dB >= 0) of a single-lobe pattern at an angular offset.

    Quadratic in each principal-plane offset, scaled so the attenuation is
    3 dB at half the corresponding beamwidth, and clamped at
    max_attenuation_db everywhere outside the main lobe.
    """
    att = (
        12.0 * (az_off_deg / hpbw_az_deg) ** 2
        + 12.0 * (el_off_deg / hpbw_el_deg) ** 2
    )
    return min(att, max_attenuation_db)


@dataclass(frozen=True)
class PatchPattern:
    """Boresight gain and beamwidths of one element of the switched array."""

    peak_gain_dbi: float = 6.4
    hpbw_az_deg: float = 70.0
    hpbw_el_deg: float = 61.0
    front_to_back_db: float = 15.0

    def __post_init__(self):
        if self.hpbw_az_deg <= 0.0 or self.hpbw_el_deg <= 0.0:
            raise ValueError("beamwidths must be > 0")
        if self.front_to_back_db < 0.0:
            raise ValueError("front_to_back_db must be >= 0")


@dataclass(frozen=True)
class OmniPattern:
    """Reference monopole: flat gain over all directions."""

    gain_dbi: float = 2.0


@dataclass(frozen=True)
class AntennaArrayConfig:
    """Geometry of the switched array in the airframe body frame.

    face_azimuths are degrees clockwise from the airframe nose.  When omitted
    they default to n_faces equally spaced faces starting at the nose.
    """

    n_faces: int = 6
    face_azimuths: tuple[float, ...] | None = None
    boresight_elevation_deg: float = 0.0
    patch: PatchPattern = field(default_factory=PatchPattern)
    omni: OmniPattern = field(default_factory=OmniPattern)

    def __post_init__(self):
        if self.n_faces < 1:
            raise ValueError("n_faces must be >= 1")
        if self.face_azimuths is None:
            spacing = 360.0 / self.n_faces
            object.__setattr__(
                self, "face_azimuths",
                tuple(i * spacing for i in range(self.n_faces)),
            )
        else:
            object.__setattr__(self, "face_azimuths", tuple(self.face_azimuths))
        if len(self.face_azimuths) != self.n_faces:
            raise ValueError(
                f"{len(self.face_azimuths)} face azimuths for {self.n_faces} faces"
            )
        reduced = [az % 360.0 for az in self.face_azimuths]
        if len(set(reduced)) != len(reduced):
            raise ValueError("face azimuths must be distinct modulo 360")


def patch_gain(pattern: PatchPattern, az_off_deg: float, el_off_deg: float) -> float:
    """Gain (dBi) of one patch at an offset from its boresight."""
    az = wrap_180(az_off_deg)
    return pattern.peak_gain_dbi - quadratic_rolloff(
        az, el_off_deg,
        pattern.hpbw_az_deg, pattern.hpbw_el_deg,
        pattern.front_to_back_db,
    )


def omni_gain(pattern: OmniPattern, el_off_deg: float = 0.0) -> float:
    """Gain (dBi) of the reference monopole; direction-independent by model."""
    return pattern.gain_dbi


def array_gain(config: AntennaArrayConfig, antenna_index: int,
               heading_deg: float, bearing_deg: float,
               elevation_deg: float) -> float:
    """Gain (dBi) of the selected face toward a world-frame direction.

    bearing_deg/elevation_deg describe the target direction in the world
    frame; heading_deg rotates it into the body frame before the face offset
    is applied.
    """
    if not 0 <= antenna_index < config.n_faces:
        raise IndexError(f"antenna index {antenna_index} not in [0, {config.n_faces})")
    az_off = wrap_180(bearing_deg - heading_deg - config.face_azimuths[antenna_index])
    el_off = elevation_deg - config.boresight_elevation_deg
    return patch_gain(config.patch, az_off, el_off)
