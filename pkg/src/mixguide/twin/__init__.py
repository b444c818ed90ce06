"""Deterministic digital twin of the juice-mixer testbed."""

from .machine import (
    action_alphabet,
    apply_action,
    assembly_complete,
    is_step_complete,
    legal_actions,
    new_twin,
    phase_of,
    tick,
)
from .model import (
    Action,
    ActionType,
    Container,
    IndexOutOfRange,
    InvalidConfig,
    MixStatus,
    Mixture,
    Phase,
    Pump,
    PumpMode,
    PumpStrength,
    RejectReason,
    Rejection,
    SensorKind,
    Station,
    TwinConfig,
    TwinError,
    TwinState,
)
from .trace import ReplayStep, TraceEntry, TraceError, parse_trace, replay_trace

__all__ = [
    "Action",
    "ActionType",
    "Container",
    "IndexOutOfRange",
    "InvalidConfig",
    "MixStatus",
    "Mixture",
    "Phase",
    "Pump",
    "PumpMode",
    "PumpStrength",
    "RejectReason",
    "Rejection",
    "ReplayStep",
    "SensorKind",
    "Station",
    "TraceEntry",
    "TraceError",
    "TwinConfig",
    "TwinError",
    "TwinState",
    "action_alphabet",
    "apply_action",
    "assembly_complete",
    "is_step_complete",
    "legal_actions",
    "new_twin",
    "parse_trace",
    "phase_of",
    "replay_trace",
    "tick",
]
