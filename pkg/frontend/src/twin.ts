// View-model for the twin control board: what each widget shows and which
// buttons are enabled, derived purely from the last twin payload.

import type { TwinActionDict, TwinPayload } from "./types.js";

export interface TwinBoard {
  phase: string;
  clockMs: number;
  hasContainer: boolean;
  juiceKind: string | null;
  fillLevel: number;
  underSpout: boolean;
  lidAttached: boolean;
  sensors: string[];
  tubeConnected: boolean;
  pumpStrength: string;
  pumpMode: string;
  pumpRunning: boolean;
  mixStatus: string;
  mixProgress: number;
  juiceKinds: string[];
  legal: Set<string>;
}

export function actionKey(action: string, params?: Record<string, string>): string {
  const param = params ? Object.values(params)[0] : undefined;
  return param === undefined ? action : `${action}:${param}`;
}

export function keyOf(action: TwinActionDict): string {
  return actionKey(action.action, action.params);
}

export function boardFrom(payload: TwinPayload): TwinBoard {
  const container = payload.state.container;
  return {
    phase: payload.phase,
    clockMs: payload.state.clock_ms,
    hasContainer: container !== null,
    juiceKind: container?.juice_kind ?? null,
    fillLevel: container?.fill_level ?? 0,
    underSpout: container?.under_spout ?? false,
    lidAttached: container?.lid_attached ?? false,
    sensors: container?.sensors ?? [],
    tubeConnected: container?.tube_connected ?? false,
    pumpStrength: payload.state.pump.strength,
    pumpMode: payload.state.pump.mode,
    pumpRunning: payload.state.pump.running,
    mixStatus: payload.state.mixture.status,
    mixProgress: payload.state.mixture.progress,
    juiceKinds: payload.state.station.juice_kinds,
    legal: new Set(payload.legal_actions.map(keyOf)),
  };
}

export function isLegal(board: TwinBoard, action: string, params?: Record<string, string>): boolean {
  return board.legal.has(actionKey(action, params));
}
