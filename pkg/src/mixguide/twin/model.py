"""State types for the juice-mixer digital twin.

Everything is an immutable value; transitions live in machine.py and return
new states. Times are integer milliseconds on the twin's own clock, which
only advances when callers tick it, so every run is exactly replayable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class TwinError(Exception):
    """Base class for twin configuration and lookup failures."""


class InvalidConfig(TwinError):
    """Twin configuration is unusable (empty juice list, non-positive rates)."""


class IndexOutOfRange(TwinError):
    """A step index outside 0..3 was asked about."""


class PumpStrength(str, enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class PumpMode(str, enum.Enum):
    CONTINUOUS = "continuous"
    PULSED = "pulsed"


class SensorKind(str, enum.Enum):
    TEMPERATURE = "temperature"
    PH = "ph"


class MixStatus(str, enum.Enum):
    UNMIXED = "unmixed"
    MIXING = "mixing"
    MIXED = "mixed"


class Phase(enum.IntEnum):
    """The four narrated task phases plus the terminal state, in order."""

    PREPARATION = 0
    ASSEMBLY = 1
    MIXING = 2
    FINAL_STEPS = 3
    DONE = 4

    @property
    def label(self) -> str:
        return {
            Phase.PREPARATION: "Preparation",
            Phase.ASSEMBLY: "Assembly",
            Phase.MIXING: "Mixing",
            Phase.FINAL_STEPS: "Final Steps",
            Phase.DONE: "Done",
        }[self]


class ActionType(str, enum.Enum):
    PICK_CONTAINER = "pick_container"
    PLACE_UNDER_SPOUT = "place_under_spout"
    REMOVE_FROM_SPOUT = "remove_from_spout"
    ATTACH_LID = "attach_lid"
    ATTACH_SENSOR = "attach_sensor"
    CONNECT_TUBE = "connect_tube"
    SET_PUMP_STRENGTH = "set_pump_strength"
    SET_PUMP_MODE = "set_pump_mode"
    START_PUMP = "start_pump"
    STOP_PUMP = "stop_pump"
    INSPECT_MIXTURE = "inspect_mixture"


# Action types whose param is drawn from a fixed enumeration.
_PARAM_ENUMS: dict[ActionType, tuple[str, ...]] = {
    ActionType.ATTACH_SENSOR: tuple(s.value for s in SensorKind),
    ActionType.SET_PUMP_STRENGTH: tuple(s.value for s in PumpStrength),
    ActionType.SET_PUMP_MODE: tuple(m.value for m in PumpMode),
}

_PARAMLESS = frozenset(
    {
        ActionType.PICK_CONTAINER,
        ActionType.REMOVE_FROM_SPOUT,
        ActionType.ATTACH_LID,
        ActionType.CONNECT_TUBE,
        ActionType.START_PUMP,
        ActionType.STOP_PUMP,
        ActionType.INSPECT_MIXTURE,
    }
)


@dataclass(frozen=True, slots=True)
class Action:
    """One trainee move. ``param`` is the juice kind, sensor kind, strength
    or mode for the parameterized action types, and None otherwise."""

    type: ActionType
    param: str | None = None

    def __post_init__(self):
        if self.type in _PARAMLESS:
            if self.param is not None:
                raise ValueError(f"{self.type.value} takes no parameter")
        elif self.type in _PARAM_ENUMS:
            if self.param not in _PARAM_ENUMS[self.type]:
                raise ValueError(
                    f"{self.type.value} parameter must be one of "
                    f"{_PARAM_ENUMS[self.type]}, got {self.param!r}"
                )
        else:  # PLACE_UNDER_SPOUT: juice kind, validated against the station
            if not self.param:
                raise ValueError(f"{self.type.value} requires a juice kind")

    def to_dict(self) -> dict:
        d: dict = {"action": self.type.value}
        if self.param is not None:
            d["params"] = _param_dict(self.type, self.param)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Action":
        try:
            action_type = ActionType(d["action"])
        except (KeyError, ValueError):
            raise ValueError(f"unknown action: {d.get('action')!r}") from None
        params = d.get("params") or {}
        param = next(iter(params.values()), None) if params else None
        return cls(type=action_type, param=param)


def _param_dict(action_type: ActionType, param: str) -> dict:
    key = {
        ActionType.PLACE_UNDER_SPOUT: "juice_kind",
        ActionType.ATTACH_SENSOR: "kind",
        ActionType.SET_PUMP_STRENGTH: "level",
        ActionType.SET_PUMP_MODE: "mode",
    }[action_type]
    return {key: param}


class RejectReason(str, enum.Enum):
    NO_CONTAINER = "NoContainer"
    NOT_FILLED = "NotFilled"
    LID_MISSING = "LidMissing"
    SENSOR_MISSING = "SensorMissing"
    TUBE_MISSING = "TubeMissing"
    ALREADY_ATTACHED = "AlreadyAttached"
    PUMP_NOT_RUNNING = "PumpNotRunning"
    NOT_MIXED = "NotMixed"
    WRONG_PHASE = "WrongPhase"


@dataclass(frozen=True, slots=True)
class Rejection:
    """Why an action was refused. The state it was applied to is untouched."""

    reason: RejectReason
    action: Action

    def to_dict(self) -> dict:
        return {"reason": self.reason.value, "action": self.action.to_dict()}


@dataclass(frozen=True, slots=True)
class TwinConfig:
    """Tunable constants for one twin instance.

    Mixing at strength high/medium/low completes in mix_duration_s seconds
    under continuous mode; pulsed mode takes twice as long.
    """

    juice_kinds: tuple[str, ...] = ("orange", "apple", "mango")
    fill_rate_per_s: float = 0.25
    mix_duration_s: dict[str, float] = field(
        default_factory=lambda: {"high": 10.0, "medium": 20.0, "low": 40.0}
    )

    def __post_init__(self):
        object.__setattr__(self, "juice_kinds", tuple(self.juice_kinds))
        if not self.juice_kinds:
            raise InvalidConfig("at least one juice kind is required")
        if len(set(self.juice_kinds)) != len(self.juice_kinds):
            raise InvalidConfig("juice kinds must be distinct")
        if self.fill_rate_per_s <= 0:
            raise InvalidConfig("fill_rate_per_s must be positive")
        if set(self.mix_duration_s) != {s.value for s in PumpStrength}:
            raise InvalidConfig("mix_duration_s must cover low, medium, high")
        if any(v <= 0 for v in self.mix_duration_s.values()):
            raise InvalidConfig("mix durations must be positive")

    def mix_duration_ms(self, strength: PumpStrength, mode: PumpMode) -> float:
        base = self.mix_duration_s[strength.value] * 1000.0
        return base * 2.0 if mode is PumpMode.PULSED else base

    def to_dict(self) -> dict:
        return {
            "juice_kinds": list(self.juice_kinds),
            "fill_rate_per_s": self.fill_rate_per_s,
            "mix_duration_s": dict(self.mix_duration_s),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TwinConfig":
        return cls(
            juice_kinds=tuple(d.get("juice_kinds", ("orange", "apple", "mango"))),
            fill_rate_per_s=d.get("fill_rate_per_s", 0.25),
            mix_duration_s=dict(
                d.get("mix_duration_s", {"high": 10.0, "medium": 20.0, "low": 40.0})
            ),
        )


@dataclass(frozen=True, slots=True)
class Container:
    juice_kind: str | None = None
    fill_level: float = 0.0
    under_spout: bool = False
    lid_attached: bool = False
    sensors: frozenset[str] = frozenset()
    tube_connected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sensors", frozenset(self.sensors))
        if not 0.0 <= self.fill_level <= 1.0:
            raise ValueError("fill_level must be within [0, 1]")
        if not self.sensors <= {s.value for s in SensorKind}:
            raise ValueError(f"unknown sensors: {self.sensors}")

    def to_dict(self) -> dict:
        return {
            "juice_kind": self.juice_kind,
            "fill_level": self.fill_level,
            "under_spout": self.under_spout,
            "lid_attached": self.lid_attached,
            "sensors": sorted(self.sensors),
            "tube_connected": self.tube_connected,
        }


@dataclass(frozen=True, slots=True)
class Pump:
    strength: PumpStrength = PumpStrength.LOW
    mode: PumpMode = PumpMode.CONTINUOUS
    running: bool = False

    def to_dict(self) -> dict:
        return {
            "strength": self.strength.value,
            "mode": self.mode.value,
            "running": self.running,
        }


@dataclass(frozen=True, slots=True)
class Station:
    juice_kinds: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"juice_kinds": list(self.juice_kinds)}


@dataclass(frozen=True, slots=True)
class Mixture:
    status: MixStatus = MixStatus.UNMIXED
    progress: float = 0.0

    def to_dict(self) -> dict:
        return {"status": self.status.value, "progress": self.progress}


@dataclass(frozen=True, slots=True)
class TwinState:
    """Complete snapshot of the twin at one instant of its clock."""

    config: TwinConfig
    station: Station
    container: Container | None = None
    pump: Pump = Pump()
    mixture: Mixture = Mixture()
    inspected: bool = False
    clock_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "container": self.container.to_dict() if self.container else None,
            "pump": self.pump.to_dict(),
            "station": self.station.to_dict(),
            "mixture": self.mixture.to_dict(),
            "inspected": self.inspected,
            "clock_ms": self.clock_ms,
        }
