"""Pure transition functions for the juice-mixer twin.

apply_action returns either the next state or a Rejection value carrying a
machine-readable reason; it never raises for in-alphabet actions, and a
rejected action leaves the state untouched. tick is the only way time (and
therefore filling and mixing progress) advances.
"""

from __future__ import annotations

from dataclasses import replace

from .model import (
    Action,
    ActionType,
    Container,
    IndexOutOfRange,
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
    TwinState,
)

ALL_SENSORS = frozenset(s.value for s in SensorKind)

FULL = 1.0

# Incremental ticking accumulates float error; anything this close to done
# is done, so the outcome never depends on tick granularity.
_SNAP = 1e-9


def new_twin(config: TwinConfig | None = None) -> TwinState:
    """Fresh twin: no container picked, pump idle, mixture unmixed, clock 0."""
    config = config or TwinConfig()
    return TwinState(config=config, station=Station(juice_kinds=config.juice_kinds))


def assembly_complete(s: TwinState) -> bool:
    c = s.container
    return (
        c is not None
        and c.fill_level >= FULL
        and c.lid_attached
        and c.sensors == ALL_SENSORS
        and c.tube_connected
    )


def phase_of(s: TwinState) -> Phase:
    """Current task phase, a function of the state alone."""
    if s.inspected:
        return Phase.DONE
    if s.mixture.status is MixStatus.MIXED:
        return Phase.FINAL_STEPS
    if assembly_complete(s):
        return Phase.MIXING
    if s.container is not None and s.container.fill_level >= FULL:
        return Phase.ASSEMBLY
    return Phase.PREPARATION


def apply_action(s: TwinState, a: Action) -> TwinState | Rejection:
    """Apply one action; illegal actions come back as a Rejection value."""

    def reject(reason: RejectReason) -> Rejection:
        return Rejection(reason=reason, action=a)

    c = s.container
    phase = phase_of(s)

    if a.type is ActionType.PICK_CONTAINER:
        if c is not None:
            return reject(RejectReason.ALREADY_ATTACHED)
        return replace(s, container=Container())

    if a.type is ActionType.PLACE_UNDER_SPOUT:
        if a.param not in s.station.juice_kinds:
            raise ValueError(
                f"juice kind {a.param!r} not offered by the station "
                f"{s.station.juice_kinds}"
            )
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if c.under_spout:
            return reject(RejectReason.ALREADY_ATTACHED)
        if c.lid_attached or c.fill_level >= FULL:
            return reject(RejectReason.WRONG_PHASE)  # filling is finalized
        if c.juice_kind is not None and c.juice_kind != a.param:
            return reject(RejectReason.ALREADY_ATTACHED)  # kind already chosen
        return replace(s, container=replace(c, juice_kind=a.param, under_spout=True))

    if a.type is ActionType.REMOVE_FROM_SPOUT:
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if not c.under_spout:
            return reject(RejectReason.WRONG_PHASE)
        return replace(s, container=replace(c, under_spout=False))

    if a.type is ActionType.ATTACH_LID:
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if c.lid_attached:
            return reject(RejectReason.ALREADY_ATTACHED)
        if c.fill_level < FULL:
            return reject(RejectReason.NOT_FILLED)
        if c.under_spout:
            return reject(RejectReason.WRONG_PHASE)
        return replace(s, container=replace(c, lid_attached=True))

    if a.type is ActionType.ATTACH_SENSOR:
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if c.fill_level < FULL:
            return reject(RejectReason.NOT_FILLED)
        if a.param in c.sensors:
            return reject(RejectReason.ALREADY_ATTACHED)
        return replace(s, container=replace(c, sensors=c.sensors | {a.param}))

    if a.type is ActionType.CONNECT_TUBE:
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if c.fill_level < FULL:
            return reject(RejectReason.NOT_FILLED)
        if c.tube_connected:
            return reject(RejectReason.ALREADY_ATTACHED)
        return replace(s, container=replace(c, tube_connected=True))

    if a.type in (ActionType.SET_PUMP_STRENGTH, ActionType.SET_PUMP_MODE):
        # Knobs belong to the mixing stage only.
        if phase is not Phase.MIXING:
            return reject(RejectReason.WRONG_PHASE)
        if a.type is ActionType.SET_PUMP_STRENGTH:
            return replace(s, pump=replace(s.pump, strength=PumpStrength(a.param)))
        return replace(s, pump=replace(s.pump, mode=PumpMode(a.param)))

    if a.type is ActionType.START_PUMP:
        if c is None:
            return reject(RejectReason.NO_CONTAINER)
        if not c.lid_attached:
            return reject(RejectReason.LID_MISSING)
        if c.sensors != ALL_SENSORS:
            return reject(RejectReason.SENSOR_MISSING)
        if not c.tube_connected:
            return reject(RejectReason.TUBE_MISSING)
        if s.mixture.status is MixStatus.MIXED or s.inspected:
            return reject(RejectReason.WRONG_PHASE)  # no re-run after mixing
        if s.pump.running:
            return reject(RejectReason.ALREADY_ATTACHED)
        return replace(
            s,
            pump=replace(s.pump, running=True),
            mixture=replace(s.mixture, status=MixStatus.MIXING),
        )

    if a.type is ActionType.STOP_PUMP:
        if not s.pump.running:
            return reject(RejectReason.PUMP_NOT_RUNNING)
        mixture = s.mixture
        if mixture.progress >= 1.0:
            mixture = Mixture(status=MixStatus.MIXED, progress=1.0)
        return replace(s, pump=replace(s.pump, running=False), mixture=mixture)

    if a.type is ActionType.INSPECT_MIXTURE:
        if s.inspected:
            return reject(RejectReason.WRONG_PHASE)  # Done is terminal
        if s.mixture.status is not MixStatus.MIXED:
            return reject(RejectReason.NOT_MIXED)
        return replace(s, inspected=True)

    raise ValueError(f"unhandled action type: {a.type}")  # pragma: no cover


def tick(s: TwinState, dt_ms: int) -> TwinState:
    """Advance the twin clock by dt_ms, driving filling and mixing."""
    if dt_ms <= 0:
        raise ValueError("dt_ms must be positive")

    container = s.container
    if (
        container is not None
        and container.under_spout
        and not container.lid_attached
        and container.fill_level < FULL
    ):
        gained = s.config.fill_rate_per_s * dt_ms / 1000.0
        filled = container.fill_level + gained
        container = replace(
            container, fill_level=FULL if filled >= FULL - _SNAP else filled
        )

    mixture = s.mixture
    if s.pump.running and mixture.progress < 1.0:
        duration = s.config.mix_duration_ms(s.pump.strength, s.pump.mode)
        advanced = mixture.progress + dt_ms / duration
        mixture = replace(
            mixture, progress=1.0 if advanced >= 1.0 - _SNAP else advanced
        )

    return replace(
        s, container=container, mixture=mixture, clock_ms=s.clock_ms + dt_ms
    )


def action_alphabet(config: TwinConfig) -> list[Action]:
    """Every distinct action the config admits (the brute-force domain)."""
    actions = [Action(ActionType.PICK_CONTAINER)]
    actions += [
        Action(ActionType.PLACE_UNDER_SPOUT, kind) for kind in config.juice_kinds
    ]
    actions += [
        Action(ActionType.REMOVE_FROM_SPOUT),
        Action(ActionType.ATTACH_LID),
        Action(ActionType.ATTACH_SENSOR, SensorKind.TEMPERATURE.value),
        Action(ActionType.ATTACH_SENSOR, SensorKind.PH.value),
        Action(ActionType.CONNECT_TUBE),
    ]
    actions += [
        Action(ActionType.SET_PUMP_STRENGTH, level.value) for level in PumpStrength
    ]
    actions += [Action(ActionType.SET_PUMP_MODE, mode.value) for mode in PumpMode]
    actions += [
        Action(ActionType.START_PUMP),
        Action(ActionType.STOP_PUMP),
        Action(ActionType.INSPECT_MIXTURE),
    ]
    return actions


def legal_actions(s: TwinState) -> set[Action]:
    """Exactly the actions apply_action would accept in this state."""
    return {
        a for a in action_alphabet(s.config)
        if not isinstance(apply_action(s, a), Rejection)
    }


def is_step_complete(s: TwinState, step_index: int) -> bool:
    """True iff the phase with this index (0..3) has been passed."""
    if not 0 <= step_index <= 3:
        raise IndexOutOfRange(f"step_index must be in 0..3, got {step_index}")
    return phase_of(s) > Phase(step_index)
