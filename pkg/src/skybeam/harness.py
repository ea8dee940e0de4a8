"""Scenario execution and result handling.

One run walks the sampled flight path tick by tick: select the active face
(directional mode only), measure every cell on every available port, update
the handover state machine, then run uplink power control against the
serving cell.  Records are plain rows; summaries carry counts, medians and
ECDF tables and round-trip through TOML so paired runs can be compared
offline.
"""

import csv
import json
import math
from dataclasses import dataclass, fields
from typing import NamedTuple

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .antenna import array_gain, omni_gain
from .control import (
    MobilityState,
    bs_database,
    handover_step,
    select_antenna,
)
from .deployment import link_budget, link_rsrp, shadow_fading_db
from .geokin import bearing_elevation, sample_trajectory, wrap_360
from .linkmetrics import (
    DIRECTIONAL_PORT,
    OMNI_PORT,
    RB_BANDWIDTH_HZ,
    measurement_report,
    noise_power_dbm,
    ul_throughput,
    ul_tx_power,
)
from .scenario import MODE_DIRECTIONAL, ScenarioConfig

# Antenna index recorded while the directional array is not in use.
OMNI_ANTENNA_INDEX = -1

SUMMARY_METRICS = (
    "rsrp_dbm",
    "rsrq_db",
    "sinr_dl_db",
    "ul_tx_dbm",
    "ul_sinr_db",
    "ul_tput_mbps",
)


class NumericError(Exception):
    """A run produced a non-finite metric; the scenario is unusable."""


@dataclass(frozen=True)
class TickRecord:
    """Everything logged for one tick.  Field order is the CSV column order."""

    time: float
    east: float
    north: float
    altitude: float
    heading: float
    mode: str
    antenna_index: int
    serving_cell_id: int
    rsrp_dbm: float
    rsrq_db: float
    rssi_dbm: float
    sinr_dl_db: float
    ul_tx_dbm: float
    ul_sinr_db: float
    ul_tput_mbps: float
    handover_flag: bool


TICK_FIELDS = tuple(f.name for f in fields(TickRecord))


class EcdfTable(NamedTuple):
    """Empirical CDF: cumulative fraction at each distinct sample value."""

    values: tuple[float, ...]
    fractions: tuple[float, ...]


def ecdf(samples) -> EcdfTable:
    """Empirical CDF of a non-empty sample set."""
    ordered = sorted(samples)
    n = len(ordered)
    if n == 0:
        raise ValueError("ecdf needs at least one sample")
    values = []
    fractions = []
    for i, value in enumerate(ordered):
        if i + 1 < n and ordered[i + 1] == value:
            continue
        values.append(value)
        fractions.append((i + 1) / n)
    return EcdfTable(tuple(values), tuple(fractions))


def ecdf_quantile(table: EcdfTable, q: float) -> float:
    """Smallest sample value whose cumulative fraction reaches q."""
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q {q!r} outside (0, 1]")
    for value, fraction in zip(table.values, table.fractions):
        if fraction >= q:
            return value
    return table.values[-1]


@dataclass(frozen=True)
class RunSummary:
    """Per-run aggregate: counts plus distribution tables per metric."""

    scenario: str
    mode: str
    altitude_m: float
    seed: int
    digest: str
    n_ticks: int
    duration_s: float
    handover_count: int
    switch_count: int
    medians: dict
    ecdf_tables: dict


class RunResult(NamedTuple):
    records: list
    summary: RunSummary


class SwitchTraceRow(NamedTuple):
    """Per-tick beam-selection trace for the replay output."""

    time: float
    east: float
    north: float
    serving_cell_id: int
    relative_bearing_deg: float
    antenna_index: int
    switched: bool


def _initial_serving(config: ScenarioConfig, uav, shadows) -> int:
    """Strongest cell on the reference port at the first sample.

    The omni port is used in both modes so a mode pair starts from the same
    serving cell; ties go to the lower cell id.
    """
    omni = omni_gain(config.array.omni)
    best_id = None
    best_rsrp = -math.inf
    for sector in config.deployment.sectors:
        rsrp = link_rsrp(sector, uav, omni, config.channel,
                         shadows[sector.cell_id])
        if rsrp > best_rsrp or (rsrp == best_rsrp and sector.cell_id < best_id):
            best_id = sector.cell_id
            best_rsrp = rsrp
    return best_id


def _simulate(config: ScenarioConfig, collect_trace: bool = False):
    samples = sample_trajectory(config.trajectory)
    tick_s = config.trajectory.tick
    directional = config.mode == MODE_DIRECTIONAL
    sites = bs_database(config.deployment)
    shadows = {
        sector.cell_id: shadow_fading_db(config.seed, sector.cell_id,
                                         config.channel.shadowing_sigma_db)
        for sector in config.deployment.sectors
    }

    state = MobilityState(_initial_serving(config, samples[0], shadows))
    antenna_index = 0
    last_switch_time = -math.inf
    switch_count = 0
    ul_noise_dbm = noise_power_dbm(
        config.power_control.m_rb * RB_BANDWIDTH_HZ,
        config.channel.noise_figure_bs_db,
    )

    records = []
    trace = []
    for k, uav in enumerate(samples):
        serving_id = state.serving_cell_id
        serving_sector = config.deployment.by_id(serving_id)

        previous_index = antenna_index
        if directional:
            chosen = select_antenna(uav, sites[serving_id], config.array,
                                    current_index=antenna_index)
            if chosen != antenna_index:
                # A dwell window, when configured, pins the current face for
                # a minimum time after each switch.
                if (k == 0 or config.beam_dwell_s == 0.0
                        or uav.time - last_switch_time >= config.beam_dwell_s):
                    antenna_index = chosen
                    if k > 0:
                        switch_count += 1
                        last_switch_time = uav.time
        switched = directional and k > 0 and antenna_index != previous_index

        ports = {}
        for sector in config.deployment.sectors:
            direction = bearing_elevation(uav.position, sector.position)
            cell_ports = {}
            if directional:
                cell_ports[DIRECTIONAL_PORT] = link_rsrp(
                    sector, uav,
                    array_gain(config.array, antenna_index, uav.heading,
                               direction.bearing, direction.elevation),
                    config.channel, shadows[sector.cell_id],
                )
            cell_ports[OMNI_PORT] = link_rsrp(
                sector, uav, omni_gain(config.array.omni, direction.elevation),
                config.channel, shadows[sector.cell_id],
            )
            ports[sector.cell_id] = cell_ports

        report = measurement_report(
            uav.time, ports, serving_id,
            serving_sector.n_rb, config.load,
            config.channel.noise_figure_ue_db,
        )

        new_state = handover_step(state, report, config.handover, tick_s)
        handover_flag = new_state.handover_count > state.handover_count

        budget = link_budget(serving_sector, uav.position, config.channel,
                             shadows[serving_id])
        if directional:
            port_gain = array_gain(config.array, antenna_index, uav.heading,
                                   budget.uav_to_bs.bearing,
                                   budget.uav_to_bs.elevation)
        else:
            port_gain = omni_gain(config.array.omni)
        coupling_loss = budget.pathloss_db - budget.sector_gain_dbi - port_gain
        ul_tx = ul_tx_power(config.power_control, coupling_loss)
        ul_sinr = ul_tx - coupling_loss - ul_noise_dbm
        ul_tput = ul_throughput(config.throughput, ul_sinr,
                                config.power_control.m_rb)

        record = TickRecord(
            time=uav.time,
            east=uav.position.east,
            north=uav.position.north,
            altitude=uav.position.up,
            heading=uav.heading,
            mode=config.mode,
            antenna_index=antenna_index if directional else OMNI_ANTENNA_INDEX,
            serving_cell_id=serving_id,
            rsrp_dbm=report.serving.data_port_rsrp_dbm,
            rsrq_db=report.rsrq_db,
            rssi_dbm=report.rssi_dbm,
            sinr_dl_db=report.sinr_db,
            ul_tx_dbm=ul_tx,
            ul_sinr_db=ul_sinr,
            ul_tput_mbps=ul_tput,
            handover_flag=handover_flag,
        )
        _check_finite(record)
        records.append(record)

        if collect_trace and directional:
            direction = budget.uav_to_bs
            rel = (math.nan if direction.degenerate
                   else wrap_360(direction.bearing - uav.heading))
            trace.append(SwitchTraceRow(
                time=uav.time,
                east=uav.position.east,
                north=uav.position.north,
                serving_cell_id=serving_id,
                relative_bearing_deg=rel,
                antenna_index=antenna_index,
                switched=switched,
            ))

        state = new_state

    summary = _summarize(config, records, state.handover_count, switch_count)
    return records, summary, trace


def _check_finite(record: TickRecord):
    for name in SUMMARY_METRICS:
        value = getattr(record, name)
        if not math.isfinite(value):
            raise NumericError(
                f"{name} is {value!r} at t={record.time}; "
                "scenario produces a degenerate link"
            )


def _summarize(config: ScenarioConfig, records, handover_count,
               switch_count) -> RunSummary:
    tables = {
        name: ecdf([getattr(r, name) for r in records])
        for name in SUMMARY_METRICS
    }
    medians = {name: ecdf_quantile(table, 0.5) for name, table in tables.items()}
    return RunSummary(
        scenario=config.name,
        mode=config.mode,
        altitude_m=config.altitude_m,
        seed=config.seed,
        digest=config.digest,
        n_ticks=len(records),
        duration_s=records[-1].time,
        handover_count=handover_count,
        switch_count=switch_count,
        medians=medians,
        ecdf_tables=tables,
    )


def run_scenario(config: ScenarioConfig) -> RunResult:
    """Execute one scenario and aggregate its results."""
    records, summary, _ = _simulate(config)
    return RunResult(records, summary)


def replay_switch(config: ScenarioConfig) -> list[SwitchTraceRow]:
    """Re-run a scenario and expose the per-tick beam-selection trace."""
    if config.mode != MODE_DIRECTIONAL:
        raise ValueError("beam-switch replay requires directional mode")
    _, _, trace = _simulate(config, collect_trace=True)
    return trace


@dataclass(frozen=True)
class ComparisonReport:
    """Paired-run comparison, oriented directional-minus-omni."""

    scenario: str
    altitude_m: float
    mode_a: str
    mode_b: str
    median_delta: dict
    handover_counts: dict
    switch_counts: dict


def compare_modes(a: RunSummary, b: RunSummary) -> ComparisonReport:
    """Compare two runs of the same scenario flown with different antennas.

    Refuses to compare runs whose physics digests differ: a pair is only
    meaningful when mode is the sole difference.  Deltas are reported as
    directional minus omni regardless of argument order.
    """
    if a.digest != b.digest:
        raise ValueError(
            f"runs are not paired: digest {a.digest[:12]} != {b.digest[:12]}"
        )
    if a.mode == b.mode:
        raise ValueError(f"both runs use mode {a.mode!r}")
    first, second = (a, b) if a.mode == MODE_DIRECTIONAL else (b, a)
    delta = {
        name: first.medians[name] - second.medians[name]
        for name in SUMMARY_METRICS
    }
    return ComparisonReport(
        scenario=first.scenario,
        altitude_m=first.altitude_m,
        mode_a=first.mode,
        mode_b=second.mode,
        median_delta=delta,
        handover_counts={first.mode: first.handover_count,
                         second.mode: second.handover_count},
        switch_counts={first.mode: first.switch_count,
                       second.mode: second.switch_count},
    )


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_ticks_csv(records, path):
    """Write tick records as RFC 4180 CSV with full float precision."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(TICK_FIELDS)
        for record in records:
            writer.writerow(
                _csv_cell(getattr(record, name)) for name in TICK_FIELDS
            )


def read_ticks_csv(path) -> list[TickRecord]:
    """Read back a tick log written by write_ticks_csv."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        records = []
        for row in reader:
            records.append(TickRecord(
                time=float(row["time"]),
                east=float(row["east"]),
                north=float(row["north"]),
                altitude=float(row["altitude"]),
                heading=float(row["heading"]),
                mode=row["mode"],
                antenna_index=int(row["antenna_index"]),
                serving_cell_id=int(row["serving_cell_id"]),
                rsrp_dbm=float(row["rsrp_dbm"]),
                rsrq_db=float(row["rsrq_db"]),
                rssi_dbm=float(row["rssi_dbm"]),
                sinr_dl_db=float(row["sinr_dl_db"]),
                ul_tx_dbm=float(row["ul_tx_dbm"]),
                ul_sinr_db=float(row["ul_sinr_db"]),
                ul_tput_mbps=float(row["ul_tput_mbps"]),
                handover_flag=row["handover_flag"] == "1",
            ))
    return records


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = repr(value)
        # TOML floats need a decimal point or exponent; repr of an integral
        # float always carries one, and inf/nan are valid TOML literals.
        return text
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {value!r}")


def _toml_array(values) -> str:
    return "[" + ", ".join(_toml_scalar(v) for v in values) + "]"


def write_summary_toml(summary: RunSummary, path):
    """Persist a run summary as TOML, at full float precision."""
    lines = ["[run]"]
    for key in ("scenario", "mode", "altitude_m", "seed", "digest",
                "n_ticks", "duration_s", "handover_count", "switch_count"):
        lines.append(f"{key} = {_toml_scalar(getattr(summary, key))}")
    lines.append("")
    lines.append("[medians]")
    for name in SUMMARY_METRICS:
        lines.append(f"{name} = {_toml_scalar(summary.medians[name])}")
    for name in SUMMARY_METRICS:
        table = summary.ecdf_tables[name]
        lines.append("")
        lines.append(f"[ecdf.{name}]")
        lines.append(f"values = {_toml_array(table.values)}")
        lines.append(f"fractions = {_toml_array(table.fractions)}")
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_summary_toml(path) -> RunSummary:
    """Load a summary written by write_summary_toml."""
    with open(path, "rb") as handle:
        document = tomllib.load(handle)
    run = document["run"]
    tables = {
        name: EcdfTable(tuple(table["values"]), tuple(table["fractions"]))
        for name, table in document.get("ecdf", {}).items()
    }
    return RunSummary(
        scenario=run["scenario"],
        mode=run["mode"],
        altitude_m=float(run["altitude_m"]),
        seed=int(run["seed"]),
        digest=run["digest"],
        n_ticks=int(run["n_ticks"]),
        duration_s=float(run["duration_s"]),
        handover_count=int(run["handover_count"]),
        switch_count=int(run["switch_count"]),
        medians={k: float(v) for k, v in document["medians"].items()},
        ecdf_tables=tables,
    )
