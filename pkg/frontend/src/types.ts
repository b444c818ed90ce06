// Wire types mirrored from the service API.

export interface PlaybackWindow {
  start_ms: number;
  end_ms: number;
}

export type TurnKind =
  | "greeting"
  | "instruction"
  | "answer"
  | "troubleshoot"
  | "confirmation_prompt"
  | "completion"
  | "clarification";

export interface AssistantTurnDict {
  kind: TurnKind;
  text: string;
  step_index: number;
  window: PlaybackWindow | null;
  audio_ref: string | null;
}

export interface UserTurnDict {
  text: string;
  modality: "text" | "speech";
  received_at_ms: number;
}

export interface SessionInfo {
  current_step: number;
  stage: string;
  step_count: number;
}

export interface TwinActionDict {
  action: string;
  params?: Record<string, string>;
}

export interface TwinPayload {
  state: {
    container: {
      juice_kind: string | null;
      fill_level: number;
      under_spout: boolean;
      lid_attached: boolean;
      sensors: string[];
      tube_connected: boolean;
    } | null;
    pump: { strength: string; mode: string; running: boolean };
    station: { juice_kinds: string[] };
    mixture: { status: string; progress: number };
    inspected: boolean;
    clock_ms: number;
  };
  phase: string;
  legal_actions: TwinActionDict[];
}

export type StreamEvent =
  | ({
      seq: number;
      type: "assistant_turn";
      user: UserTurnDict | null;
      transcription: string | null;
      turn: AssistantTurnDict;
      session: SessionInfo;
    })
  | ({ seq: number; type: "twin_state"; action: unknown } & TwinPayload)
  | { seq: number; type: "error"; message: string };

export interface TurnResponse {
  seq: number;
  type: "assistant_turn";
  user: UserTurnDict | null;
  transcription: string | null;
  turn: AssistantTurnDict;
  session: SessionInfo;
}

export interface StepDict {
  id: string;
  index: number;
  title: string;
  instruction: string;
  segment_ids: string[];
  window: PlaybackWindow;
  completion_hint: string;
}

export interface SessionSnapshot {
  id: string;
  transcript_id: string;
  guide_id: string;
  task_id: string;
  current_step: number;
  stage: string;
  step_count: number;
  steps: StepDict[];
  history: unknown[];
  twin: TwinPayload | null;
  last_seq: number;
}
