"""skybeam: system-level simulator of a cellular-connected UAV.

The vehicle carries a six-face switched directional antenna array plus an
omnidirectional reference port.  The simulator flies deterministic scenarios
over a sectorized deployment, models downlink measurements, uplink power
control, beam switching and handover, and produces per-tick logs and
distribution summaries for paired mode comparisons.
"""

from .antenna import (
    AntennaArrayConfig,
    OmniPattern,
    PatchPattern,
    array_gain,
    omni_gain,
    patch_gain,
)
from .control import (
    BsDatabase,
    HandoverEvent,
    HandoverParams,
    MobilityState,
    bs_database,
    handover_step,
    select_antenna,
)
from .deployment import (
    ChannelParams,
    Deployment,
    Sector,
    SectorPattern,
    Tower,
    link_rsrp,
    pathloss,
    sector_gain,
    shadow_fading_db,
)
from .geokin import (
    Direction,
    EnuPosition,
    GeoPosition,
    Trajectory,
    UAVState,
    bearing_elevation,
    sample_trajectory,
    to_enu,
)
from .harness import (
    ComparisonReport,
    EcdfTable,
    NumericError,
    RunResult,
    RunSummary,
    SwitchTraceRow,
    TickRecord,
    compare_modes,
    ecdf,
    ecdf_quantile,
    read_summary_toml,
    read_ticks_csv,
    replay_switch,
    run_scenario,
    write_summary_toml,
    write_ticks_csv,
)
from .linkmetrics import (
    CellMeasurement,
    LinkQuality,
    ModemReport,
    PowerControlParams,
    ThroughputMap,
    link_quality,
    measurement_report,
    ul_throughput,
    ul_tx_power,
)
from .scenario import ConfigError, ScenarioConfig, load_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "AntennaArrayConfig",
    "BsDatabase",
    "CellMeasurement",
    "ChannelParams",
    "ComparisonReport",
    "ConfigError",
    "Deployment",
    "Direction",
    "EcdfTable",
    "EnuPosition",
    "GeoPosition",
    "HandoverEvent",
    "HandoverParams",
    "LinkQuality",
    "MobilityState",
    "ModemReport",
    "NumericError",
    "OmniPattern",
    "PatchPattern",
    "PowerControlParams",
    "RunResult",
    "RunSummary",
    "ScenarioConfig",
    "Sector",
    "SectorPattern",
    "SwitchTraceRow",
    "ThroughputMap",
    "TickRecord",
    "Tower",
    "Trajectory",
    "UAVState",
    "array_gain",
    "bearing_elevation",
    "bs_database",
    "compare_modes",
    "ecdf",
    "ecdf_quantile",
    "handover_step",
    "link_quality",
    "link_rsrp",
    "load_scenario",
    "measurement_report",
    "omni_gain",
    "parse_scenario",
    "patch_gain",
    "pathloss",
    "read_summary_toml",
    "read_ticks_csv",
    "replay_switch",
    "run_scenario",
    "sample_trajectory",
    "sector_gain",
    "select_antenna",
    "shadow_fading_db",
    "to_enu",
    "ul_throughput",
    "ul_tx_power",
    "write_summary_toml",
    "write_ticks_csv",
]
