// Panel state as a pure reducer over seq-tagged stream events.
//
// REST turn responses and SSE events carry the same seq, so both feed the
// same reducer and whichever arrives second is a no-op. Reloading replays
// the stream from seq 0 through the identical code path, which is what
// makes the panel refresh-safe.

import type {
  PlaybackWindow,
  StreamEvent,
  TwinPayload,
} from "./types.js";

export interface RenderedTurn {
  seq: number;
  role: "user" | "assistant";
  text: string;
  kind?: string;
  window?: PlaybackWindow | null;
  audioRef?: string | null;
  stepIndex?: number;
  transcription?: string | null;
}

export interface PanelState {
  sessionId: string;
  turns: RenderedTurn[];
  pending: boolean;
  currentWindow: PlaybackWindow | null;
  currentWindowSeq: number;
  twin: TwinPayload | null;
  stepCount: number;
  currentStep: number;
  stage: string;
  stepDone: boolean[];
  notices: string[];
  lastSeq: number;
}

export function initialState(sessionId: string, stepCount = 0): PanelState {
  return {
    sessionId,
    turns: [],
    pending: false,
    currentWindow: null,
    currentWindowSeq: 0,
    twin: null,
    stepCount,
    currentStep: 0,
    stage: "greeting_sent",
    stepDone: new Array(stepCount).fill(false),
    notices: [],
    lastSeq: 0,
  };
}

function railFrom(stepCount: number, currentStep: number, stage: string): boolean[] {
  const done = new Array(stepCount).fill(false);
  for (let i = 0; i < stepCount; i++) {
    done[i] = stage === "completed" || i < currentStep;
  }
  return done;
}

export function applyEvent(state: PanelState, event: StreamEvent): PanelState {
  if (event.seq <= state.lastSeq) {
    return state; // already applied (REST/stream reconciliation)
  }
  const next: PanelState = { ...state, lastSeq: event.seq };

  if (event.type === "assistant_turn") {
    const turns = [...state.turns];
    if (event.user !== null) {
      turns.push({
        seq: event.seq,
        role: "user",
        text: event.user.text,
        transcription: event.transcription,
      });
    }
    turns.push({
      seq: event.seq,
      role: "assistant",
      text: event.turn.text,
      kind: event.turn.kind,
      window: event.turn.window,
      audioRef: event.turn.audio_ref,
      stepIndex: event.turn.step_index,
    });
    next.turns = turns;
    next.stepCount = event.session.step_count;
    next.currentStep = event.session.current_step;
    next.stage = event.session.stage;
    next.stepDone = railFrom(
      event.session.step_count,
      event.session.current_step,
      event.session.stage,
    );
    if (event.turn.window) {
      next.currentWindow = event.turn.window;
      next.currentWindowSeq = event.seq;
    }
  } else if (event.type === "twin_state") {
    next.twin = {
      state: event.state,
      phase: event.phase,
      legal_actions: event.legal_actions,
    };
  } else {
    next.notices = [...state.notices, event.message];
  }
  return next;
}

export function replayEvents(
  sessionId: string,
  events: StreamEvent[],
  stepCount = 0,
): PanelState {
  let state = initialState(sessionId, stepCount);
  for (const event of events) {
    state = applyEvent(state, event);
  }
  return state;
}
