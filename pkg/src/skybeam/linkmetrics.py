"""Modem-level link quantities.

Downlink: wideband RSSI over the measurement bandwidth, RSRQ, and per-RE
SINR, all derived from per-cell RSRP plus a neighbour activity factor.
The modem sees two receive ports (selected patch and reference monopole) and
reports, per cell, the better of the two; data transfer always rides the
selected patch, so serving-link SINR and everything downstream of it use the
directional port alone.

Uplink: fractional open-loop power control and an attenuated-Shannon
throughput map.
"""

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

RE_PER_RB = 12
RB_BANDWIDTH_HZ = 180_000.0
THERMAL_NOISE_DBM_PER_HZ = -174.0
MAX_REPORTED_CELLS = 8

DIRECTIONAL_PORT = "directional"
OMNI_PORT = "omni"


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def noise_power_dbm(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power over a bandwidth, referred past the receiver NF."""
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be > 0")
    return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


class LinkQuality(NamedTuple):
    """Wideband downlink quality triplet, all in dB(m)."""

    rssi_dbm: float
    rsrq_db: float
    sinr_db: float


def link_quality(serving_rsrp_dbm: float, interferer_rsrps_dbm,
                 n_rb: int, load: float, noise_figure_db: float) -> LinkQuality:
    """RSSI/RSRQ/SINR from per-RE received powers.

    RSSI integrates serving power, load-weighted interference and thermal
    noise over all resource elements of the measurement bandwidth.  RSRQ is
    n_rb * RSRP / RSSI.  SINR is per-RE: serving against load-weighted
    interference plus per-RE noise.
    """
    if not math.isfinite(serving_rsrp_dbm):
        raise ValueError(f"serving RSRP {serving_rsrp_dbm!r} is not finite")
    if n_rb < 1:
        raise ValueError("n_rb must be >= 1")
    if not 0.0 <= load <= 1.0:
        raise ValueError(f"load {load!r} outside [0, 1]")

    serving_lin = db_to_linear(serving_rsrp_dbm)
    interference_lin = sum(db_to_linear(r) for r in interferer_rsrps_dbm)
    n_re = RE_PER_RB * n_rb
    noise_total_lin = db_to_linear(
        noise_power_dbm(n_rb * RB_BANDWIDTH_HZ, noise_figure_db)
    )

    rssi_lin = n_re * (serving_lin + load * interference_lin) + noise_total_lin
    rsrq_db = linear_to_db(n_rb * serving_lin / rssi_lin)
    sinr_db = linear_to_db(
        serving_lin / (load * interference_lin + noise_total_lin / n_re)
    )
    return LinkQuality(linear_to_db(rssi_lin), rsrq_db, sinr_db)


@dataclass(frozen=True)
class CellMeasurement:
    """Per-cell RSRP as seen on each available receive port."""

    cell_id: int
    rsrp_directional_dbm: float | None
    rsrp_omni_dbm: float | None

    def __post_init__(self):
        if self.rsrp_directional_dbm is None and self.rsrp_omni_dbm is None:
            raise ValueError(f"cell {self.cell_id}: no port measured")

    @property
    def reported_rsrp_dbm(self) -> float:
        """Value entered into cell ranking: best port wins."""
        ports = [
            r for r in (self.rsrp_directional_dbm, self.rsrp_omni_dbm)
            if r is not None
        ]
        return max(ports)

    @property
    def data_port_rsrp_dbm(self) -> float:
        """Value the data path actually experiences: the selected antenna."""
        if self.rsrp_directional_dbm is not None:
            return self.rsrp_directional_dbm
        return self.rsrp_omni_dbm


@dataclass(frozen=True)
class ModemReport:
    """One measurement occasion: ranked cells plus serving-link quality."""

    time: float
    serving_cell_id: int
    cells: tuple[CellMeasurement, ...]
    rssi_dbm: float
    rsrq_db: float
    sinr_db: float

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not any(c.cell_id == self.serving_cell_id for c in self.cells):
            raise ValueError(f"serving cell {self.serving_cell_id} not in report")

    @property
    def serving(self) -> CellMeasurement:
        for cell in self.cells:
            if cell.cell_id == self.serving_cell_id:
                return cell
        raise AssertionError("unreachable: serving presence checked at init")

    @property
    def best_neighbor(self) -> CellMeasurement | None:
        for cell in self.cells:
            if cell.cell_id != self.serving_cell_id:
                return cell
        return None


def measurement_report(time: float,
                       per_cell_ports: Mapping[int, Mapping[str, float]],
                       serving_cell_id: int, n_rb: int, load: float,
                       noise_figure_db: float,
                       max_cells: int = MAX_REPORTED_CELLS) -> ModemReport:
    """Build one report from raw per-cell per-port RSRP.

    Cells are ranked by reported (best-port) RSRP, ties broken by lower cell
    id, and truncated to max_cells with the serving cell always retained.
    Link quality is computed on the data port against the data-port power of
    every other cell in the deployment, including cells the truncated report
    no longer lists: dropping a cell from the report does not silence it.
    """
    if serving_cell_id not in per_cell_ports:
        raise ValueError(f"serving cell {serving_cell_id} not measured")
    if max_cells < 1:
        raise ValueError("max_cells must be >= 1")

    cells = [
        CellMeasurement(
            cell_id,
            ports.get(DIRECTIONAL_PORT),
            ports.get(OMNI_PORT),
        )
        for cell_id, ports in per_cell_ports.items()
    ]
    cells.sort(key=lambda c: (-c.reported_rsrp_dbm, c.cell_id))

    kept = [c for c in cells[:max_cells]]
    if not any(c.cell_id == serving_cell_id for c in kept):
        serving = next(c for c in cells if c.cell_id == serving_cell_id)
        kept = kept[: max_cells - 1] + [serving]

    serving = next(c for c in cells if c.cell_id == serving_cell_id)
    interferers = [
        c.data_port_rsrp_dbm for c in cells if c.cell_id != serving_cell_id
    ]
    quality = link_quality(
        serving.data_port_rsrp_dbm, interferers, n_rb, load, noise_figure_db
    )
    return ModemReport(
        time=time,
        serving_cell_id=serving_cell_id,
        cells=tuple(kept),
        rssi_dbm=quality.rssi_dbm,
        rsrq_db=quality.rsrq_db,
        sinr_db=quality.sinr_db,
    )


@dataclass(frozen=True)
class PowerControlParams:
    """Open-loop fractional uplink power control."""

    p_max_dbm: float = 23.0
    p0_dbm: float = -96.0
    alpha: float = 1.0
    m_rb: int = 50

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha!r} outside [0, 1]")
        if self.m_rb < 1:
            raise ValueError("m_rb must be >= 1")


def ul_tx_power(params: PowerControlParams, pathloss_effective_db: float) -> float:
    """Transmit power (dBm) over the granted bandwidth, clamped at p_max.

    pathloss_effective_db is the coupling loss the control loop compensates:
    propagation loss net of both antenna gains.
    """
    open_loop = (
        params.p0_dbm
        + 10.0 * math.log10(params.m_rb)
        + params.alpha * pathloss_effective_db
    )
    return min(params.p_max_dbm, open_loop)


@dataclass(frozen=True)
class ThroughputMap:
    """Attenuated-Shannon SINR-to-rate mapping."""

    bandwidth_efficiency: float = 0.6
    sinr_efficiency: float = 1.0
    max_spectral_efficiency: float = 4.32

    def __post_init__(self):
        if self.bandwidth_efficiency <= 0.0 or self.sinr_efficiency <= 0.0:
            raise ValueError("efficiencies must be > 0")
        if self.max_spectral_efficiency <= 0.0:
            raise ValueError("max_spectral_efficiency must be > 0")


def ul_throughput(mapping: ThroughputMap, sinr_db: float, n_rb: int) -> float:
    """Uplink throughput in Mbit/s over n_rb resource blocks."""
    if n_rb < 1:
        raise ValueError("n_rb must be >= 1")
    bandwidth_hz = n_rb * RB_BANDWIDTH_HZ
    spectral_eff = mapping.bandwidth_efficiency * math.log2(
        1.0 + db_to_linear(sinr_db) / mapping.sinr_efficiency
    )
    spectral_eff = min(spectral_eff, mapping.max_spectral_efficiency)
    return spectral_eff * bandwidth_hz / 1e6
