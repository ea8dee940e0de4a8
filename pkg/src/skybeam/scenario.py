"""Scenario file ingestion.

A scenario is a TOML document describing one flight over one deployment.
Everything that influences the physics lives here; the only run-time knobs
are the antenna mode and a flight-altitude override, which exist so the same
file can be flown as a paired comparison.  A digest over the physics fields
(mode and name excluded) identifies comparable runs.
"""

import hashlib
import json
import math
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .antenna import AntennaArrayConfig, OmniPattern, PatchPattern
from .control import HandoverParams
from .deployment import ChannelParams, Deployment, SectorPattern, Tower
from .geokin import EnuPosition, Trajectory
from .linkmetrics import PowerControlParams, ThroughputMap

MODE_DIRECTIONAL = "directional"
MODE_OMNI = "omni"
MODES = (MODE_DIRECTIONAL, MODE_OMNI)


class ConfigError(Exception):
    """A scenario file is malformed or inconsistent."""


def _require_table(value, path):
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a table")
    return value


def _reject_unknown(table, known, path):
    for key in table:
        if key not in known:
            raise ConfigError(f"{path}.{key}: unknown key")


def _number(table, key, default, path, *, minimum=None, maximum=None,
            exclusive_minimum=False, required=False):
    if key not in table:
        if required:
            raise ConfigError(f"{path}.{key}: missing required key")
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}: must be finite")
    if minimum is not None:
        if exclusive_minimum and value <= minimum:
            raise ConfigError(f"{path}.{key}: must be > {minimum}")
        if not exclusive_minimum and value < minimum:
            raise ConfigError(f"{path}.{key}: must be >= {minimum}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}.{key}: must be <= {maximum}")
    return value


def _integer(table, key, default, path, *, minimum=None):
    if key not in table:
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}")
    return value


def _parse_trajectory(table, altitude, path):
    table = _require_table(table, path)
    _reject_unknown(table, {"waypoints", "speed", "heading", "tick"}, path)
    raw = table.get("waypoints")
    if not isinstance(raw, list) or len(raw) < 2:
        raise ConfigError(f"{path}.waypoints: need a list of at least two points")
    waypoints = []
    for i, point in enumerate(raw):
        if (not isinstance(point, list) or len(point) != 2
                or any(isinstance(c, bool) or not isinstance(c, (int, float))
                       for c in point)):
            raise ConfigError(
                f"{path}.waypoints[{i}]: expected [east, north] in metres"
            )
        waypoints.append(EnuPosition(float(point[0]), float(point[1]), altitude))
    speed = _number(table, "speed", None, path, minimum=0.0,
                    exclusive_minimum=True, required=True)
    heading = _number(table, "heading", 0.0, path)
    tick = _number(table, "tick", 0.2, path, minimum=0.0, exclusive_minimum=True)
    try:
        return Trajectory(tuple(waypoints), speed=speed, heading=heading, tick=tick)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_sector_pattern(table, path):
    table = _require_table(table, path)
    _reject_unknown(table, {"gain", "hpbw_az", "hpbw_el", "attenuation_max"}, path)
    defaults = SectorPattern()
    return SectorPattern(
        gain_dbi=_number(table, "gain", defaults.gain_dbi, path),
        hpbw_az_deg=_number(table, "hpbw_az", defaults.hpbw_az_deg, path,
                            minimum=0.0, exclusive_minimum=True),
        hpbw_el_deg=_number(table, "hpbw_el", defaults.hpbw_el_deg, path,
                            minimum=0.0, exclusive_minimum=True),
        attenuation_max_db=_number(table, "attenuation_max",
                                   defaults.attenuation_max_db, path, minimum=0.0),
    )


def _parse_deployment(table, path):
    table = _require_table(table, path)
    _reject_unknown(
        table,
        {"towers", "downtilt", "tx_power", "n_rb", "carrier_mhz", "pattern"},
        path,
    )
    raw_towers = table.get("towers")
    if not isinstance(raw_towers, list) or not raw_towers:
        raise ConfigError(f"{path}.towers: need a non-empty list of towers")
    towers = []
    for i, raw in enumerate(raw_towers):
        tpath = f"{path}.towers[{i}]"
        raw = _require_table(raw, tpath)
        _reject_unknown(raw, {"east", "north", "height", "azimuths"}, tpath)
        east = _number(raw, "east", None, tpath, required=True)
        north = _number(raw, "north", None, tpath, required=True)
        height = _number(raw, "height", 30.0, tpath, minimum=0.0)
        azimuths = raw.get("azimuths", [0.0, 120.0, 240.0])
        if (not isinstance(azimuths, list) or not azimuths
                or any(isinstance(a, bool) or not isinstance(a, (int, float))
                       for a in azimuths)):
            raise ConfigError(f"{tpath}.azimuths: expected a non-empty list of degrees")
        towers.append(Tower(
            EnuPosition(east, north, height),
            tuple(float(a) for a in azimuths),
        ))
    pattern = _parse_sector_pattern(table.get("pattern", {}), f"{path}.pattern")
    try:
        return Deployment.from_towers(
            towers,
            downtilt_deg=_number(table, "downtilt", 6.0, path),
            tx_power_dbm=_number(table, "tx_power", 46.0, path),
            n_rb=_integer(table, "n_rb", 50, path, minimum=1),
            carrier_mhz=_number(table, "carrier_mhz", 1800.0, path,
                                minimum=0.0, exclusive_minimum=True),
            pattern=pattern,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_channel(table, path):
    table = _require_table(table, path)
    _reject_unknown(
        table,
        {"los_cutoff", "rooftop_height", "nlos_slope", "shadowing_sigma",
         "noise_figure_ue", "noise_figure_bs"},
        path,
    )
    defaults = ChannelParams()
    return ChannelParams(
        los_cutoff_m=_number(table, "los_cutoff", defaults.los_cutoff_m,
                             path, minimum=0.0),
        rooftop_height_m=_number(table, "rooftop_height",
                                 defaults.rooftop_height_m, path),
        nlos_slope_db_per_m=_number(table, "nlos_slope",
                                    defaults.nlos_slope_db_per_m, path, minimum=0.0),
        shadowing_sigma_db=_number(table, "shadowing_sigma",
                                   defaults.shadowing_sigma_db, path, minimum=0.0),
        noise_figure_ue_db=_number(table, "noise_figure_ue",
                                   defaults.noise_figure_ue_db, path),
        noise_figure_bs_db=_number(table, "noise_figure_bs",
                                   defaults.noise_figure_bs_db, path),
    )


def _parse_array(table, path):
    table = _require_table(table, path)
    _reject_unknown(
        table,
        {"n_faces", "face_azimuths", "boresight_elevation", "patch_gain",
         "hpbw_az", "hpbw_el", "front_to_back", "omni_gain"},
        path,
    )
    patch_defaults = PatchPattern()
    patch = PatchPattern(
        peak_gain_dbi=_number(table, "patch_gain",
                              patch_defaults.peak_gain_dbi, path),
        hpbw_az_deg=_number(table, "hpbw_az", patch_defaults.hpbw_az_deg,
                            path, minimum=0.0, exclusive_minimum=True),
        hpbw_el_deg=_number(table, "hpbw_el", patch_defaults.hpbw_el_deg,
                            path, minimum=0.0, exclusive_minimum=True),
        front_to_back_db=_number(table, "front_to_back",
                                 patch_defaults.front_to_back_db, path, minimum=0.0),
    )
    omni = OmniPattern(gain_dbi=_number(table, "omni_gain", 2.0, path))
    n_faces = _integer(table, "n_faces", 6, path, minimum=1)
    face_azimuths = table.get("face_azimuths")
    if face_azimuths is not None:
        if (not isinstance(face_azimuths, list)
                or any(isinstance(a, bool) or not isinstance(a, (int, float))
                       for a in face_azimuths)):
            raise ConfigError(f"{path}.face_azimuths: expected a list of degrees")
        face_azimuths = tuple(float(a) for a in face_azimuths)
    try:
        return AntennaArrayConfig(
            n_faces=n_faces,
            face_azimuths=face_azimuths,
            boresight_elevation_deg=_number(table, "boresight_elevation",
                                            0.0, path),
            patch=patch,
            omni=omni,
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_power_control(table, path):
    table = _require_table(table, path)
    _reject_unknown(table, {"p_max", "p0", "alpha", "m_rb"}, path)
    defaults = PowerControlParams()
    try:
        return PowerControlParams(
            p_max_dbm=_number(table, "p_max", defaults.p_max_dbm, path),
            p0_dbm=_number(table, "p0", defaults.p0_dbm, path),
            alpha=_number(table, "alpha", defaults.alpha, path,
                          minimum=0.0, maximum=1.0),
            m_rb=_integer(table, "m_rb", defaults.m_rb, path, minimum=1),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_throughput(table, path):
    table = _require_table(table, path)
    _reject_unknown(
        table,
        {"bandwidth_efficiency", "sinr_efficiency", "max_spectral_efficiency"},
        path,
    )
    defaults = ThroughputMap()
    return ThroughputMap(
        bandwidth_efficiency=_number(table, "bandwidth_efficiency",
                                     defaults.bandwidth_efficiency, path,
                                     minimum=0.0, exclusive_minimum=True),
        sinr_efficiency=_number(table, "sinr_efficiency",
                                defaults.sinr_efficiency, path,
                                minimum=0.0, exclusive_minimum=True),
        max_spectral_efficiency=_number(table, "max_spectral_efficiency",
                                        defaults.max_spectral_efficiency, path,
                                        minimum=0.0, exclusive_minimum=True),
    )


def _parse_handover(table, path):
    table = _require_table(table, path)
    _reject_unknown(table, {"hysteresis", "time_to_trigger"}, path)
    defaults = HandoverParams()
    return HandoverParams(
        hysteresis_db=_number(table, "hysteresis", defaults.hysteresis_db,
                              path, minimum=0.0),
        time_to_trigger_s=_number(table, "time_to_trigger",
                                  defaults.time_to_trigger_s, path, minimum=0.0),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario: typed parameters plus the pairing digest."""

    name: str
    mode: str
    altitude_m: float
    load: float
    seed: int
    trajectory: Trajectory
    deployment: Deployment
    channel: ChannelParams
    array: AntennaArrayConfig
    power_control: PowerControlParams
    throughput: ThroughputMap
    handover: HandoverParams
    beam_dwell_s: float
    digest: str


def _canonical(value):
    if isinstance(value, EnuPosition):
        return [value.east, value.north, value.up]
    if isinstance(value, tuple):
        return [_canonical(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return {
            name: _canonical(getattr(value, name))
            for name in sorted(value.__dataclass_fields__)
        }
    return value


def scenario_digest(trajectory, deployment, channel, array, power_control,
                    throughput, handover, altitude_m, load, seed,
                    beam_dwell_s) -> str:
    """Hash of every physics-relevant field; mode and name excluded."""
    payload = {
        "altitude_m": altitude_m,
        "array": _canonical(array),
        "beam_dwell_s": beam_dwell_s,
        "channel": _canonical(channel),
        "deployment": _canonical(deployment),
        "handover": _canonical(handover),
        "load": load,
        "power_control": _canonical(power_control),
        "seed": seed,
        "throughput": _canonical(throughput),
        "trajectory": _canonical(trajectory),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def parse_scenario(document: dict, *, mode: str | None = None,
                   altitude_m: float | None = None,
                   default_name: str = "scenario") -> ScenarioConfig:
    """Resolve a parsed TOML document, applying run-time overrides."""
    document = _require_table(document, "scenario")
    _reject_unknown(
        document,
        {"name", "mode", "altitude", "load", "seed", "beam_dwell",
         "trajectory", "deployment", "channel", "array", "power_control",
         "throughput", "handover"},
        "scenario",
    )
    name = document.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise ConfigError("scenario.name: expected a non-empty string")

    file_mode = document.get("mode", MODE_DIRECTIONAL)
    resolved_mode = mode if mode is not None else file_mode
    if resolved_mode not in MODES:
        raise ConfigError(
            f"scenario.mode: expected one of {MODES}, got {resolved_mode!r}"
        )

    file_altitude = _number(document, "altitude", 30.0, "scenario", minimum=0.0)
    resolved_altitude = altitude_m if altitude_m is not None else file_altitude
    if not math.isfinite(resolved_altitude) or resolved_altitude < 0.0:
        raise ConfigError(f"scenario.altitude: {resolved_altitude!r} must be >= 0")

    load = _number(document, "load", 1.0, "scenario", minimum=0.0, maximum=1.0)
    seed = _integer(document, "seed", 1, "scenario", minimum=0)
    beam_dwell_s = _number(document, "beam_dwell", 0.0, "scenario", minimum=0.0)

    if "trajectory" not in document:
        raise ConfigError("scenario.trajectory: missing required table")
    if "deployment" not in document:
        raise ConfigError("scenario.deployment: missing required table")

    trajectory = _parse_trajectory(document["trajectory"], resolved_altitude,
                                   "trajectory")
    deployment = _parse_deployment(document["deployment"], "deployment")
    channel = _parse_channel(document.get("channel", {}), "channel")
    array = _parse_array(document.get("array", {}), "array")
    power_control = _parse_power_control(document.get("power_control", {}),
                                         "power_control")
    throughput = _parse_throughput(document.get("throughput", {}), "throughput")
    handover = _parse_handover(document.get("handover", {}), "handover")

    digest = scenario_digest(
        trajectory, deployment, channel, array, power_control, throughput,
        handover, resolved_altitude, load, seed, beam_dwell_s,
    )
    return ScenarioConfig(
        name=name,
        mode=resolved_mode,
        altitude_m=resolved_altitude,
        load=load,
        seed=seed,
        trajectory=trajectory,
        deployment=deployment,
        channel=channel,
        array=array,
        power_control=power_control,
        throughput=throughput,
        handover=handover,
        beam_dwell_s=beam_dwell_s,
        digest=digest,
    )


def load_scenario(path, *, mode: str | None = None,
                  altitude_m: float | None = None) -> ScenarioConfig:
    """Read and resolve a scenario TOML file."""
    import os

    try:
        with open(path, "rb") as handle:
            document = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_scenario(document, mode=mode, altitude_m=altitude_m,
                          default_name=stem)
