"""Airborne-side control: beam selection and handover tracking.

Beam selection is geometric, not measurement-driven: the modem knows the
serving site's position, so the face whose boresight lies closest to the
serving direction in the airframe's horizontal plane is switched in.  The
handover model is event-driven: a neighbour must beat the serving cell's
reported RSRP by a hysteresis margin continuously for a dwell time before
the serving cell changes.
"""

import math
from dataclasses import dataclass, replace
from typing import Mapping

from .antenna import AntennaArrayConfig
from .deployment import Deployment
from .geokin import EnuPosition, UAVState, bearing_elevation, wrap_180, wrap_360
from .linkmetrics import ModemReport

# Known base-station sites, keyed by cell id.  The beam selector only needs
# positions, not radio parameters.
BsDatabase = Mapping[int, EnuPosition]

# Guard against float dust when the sustain timer lands exactly on the
# trigger time after repeated tick additions.
_TIMER_EPS_S = 1e-9


def bs_database(deployment: Deployment) -> dict[int, EnuPosition]:
    """Site positions of every cell, as provisioned into the selector."""
    return {sector.cell_id: sector.position for sector in deployment.sectors}


def select_antenna(uav: UAVState, serving_position: EnuPosition,
                   config: AntennaArrayConfig, current_index: int = 0) -> int:
    """Index of the face pointing closest to the serving site.

    Ties go to the lower index.  Directly above or below the site the bearing
    is undefined, so the current face is kept rather than forced to face 0.
    """
    if not 0 <= current_index < config.n_faces:
        raise IndexError(
            f"current index {current_index} not in [0, {config.n_faces})"
        )
    direction = bearing_elevation(uav.position, serving_position)
    if direction.degenerate:
        return current_index
    relative = wrap_360(direction.bearing - uav.heading)
    best_index = 0
    best_offset = math.inf
    for index, face_az in enumerate(config.face_azimuths):
        offset = abs(wrap_180(relative - face_az))
        if offset < best_offset:
            best_index = index
            best_offset = offset
    return best_index


@dataclass(frozen=True)
class HandoverParams:
    """Neighbour-better-than-serving event: margin and sustain time."""

    hysteresis_db: float = 3.0
    time_to_trigger_s: float = 0.6

    def __post_init__(self):
        if self.hysteresis_db < 0.0:
            raise ValueError("hysteresis_db must be >= 0")
        if self.time_to_trigger_s < 0.0:
            raise ValueError("time_to_trigger_s must be >= 0")


@dataclass(frozen=True)
class HandoverEvent:
    """One executed handover."""

    time: float
    from_cell_id: int
    to_cell_id: int


@dataclass(frozen=True)
class MobilityState:
    """Serving cell plus the in-flight trigger bookkeeping."""

    serving_cell_id: int
    candidate_cell_id: int | None = None
    candidate_timer_s: float = 0.0
    handover_count: int = 0
    events: tuple[HandoverEvent, ...] = ()


def handover_step(state: MobilityState, report: ModemReport,
                  params: HandoverParams, tick_s: float) -> MobilityState:
    """Advance the trigger state machine by one report.

    The sustain timer accumulates whole ticks, counting the tick on which the
    condition first holds.  It resets whenever the condition lapses or the
    best neighbour changes identity.  On execution the new serving cell takes
    over and the trigger state clears.
    """
    if tick_s <= 0.0:
        raise ValueError("tick_s must be > 0")
    serving = next(
        (c for c in report.cells if c.cell_id == state.serving_cell_id), None
    )
    if serving is None:
        raise ValueError(
            f"serving cell {state.serving_cell_id} missing from report"
        )
    best = None
    for cell in report.cells:
        if cell.cell_id == state.serving_cell_id:
            continue
        if best is None or cell.reported_rsrp_dbm > best.reported_rsrp_dbm:
            best = cell

    triggered = (
        best is not None
        and best.reported_rsrp_dbm
        > serving.reported_rsrp_dbm + params.hysteresis_db
    )
    if not triggered:
        return replace(state, candidate_cell_id=None, candidate_timer_s=0.0)

    if state.candidate_cell_id == best.cell_id:
        timer = state.candidate_timer_s + tick_s
    else:
        timer = tick_s
    if timer + _TIMER_EPS_S >= params.time_to_trigger_s:
        event = HandoverEvent(report.time, state.serving_cell_id, best.cell_id)
        return MobilityState(
            serving_cell_id=best.cell_id,
            candidate_cell_id=None,
            candidate_timer_s=0.0,
            handover_count=state.handover_count + 1,
            events=state.events + (event,),
        )
    return replace(state, candidate_cell_id=best.cell_id, candidate_timer_s=timer)
