// Panel controller: binds the API client, the event reducer, the clip
// player, and a DOM port together.
//
// Invariants enforced here:
//   - at most one in-flight turn request (pending gate, input disabled);
//   - every windowed assistant turn triggers exactly one video seek;
//   - mic transcriptions land in the input box before the answer renders;
//   - server refusals (409/422, twin rejections) surface as notices.

import { ApiError, TwinActionResponse } from "./api.js";
import { applyEvent, initialState, PanelState, RenderedTurn } from "./state.js";
import { boardFrom, TwinBoard } from "./twin.js";
import type { PlaybackWindow, StreamEvent, TurnResponse } from "./types.js";

export interface PanelApi {
  postTurn(sessionId: string, text: string): Promise<TurnResponse>;
  postAudioTurn(sessionId: string, wav: Uint8Array): Promise<TurnResponse>;
  postTwinAction(
    sessionId: string,
    action: string,
    params?: Record<string, string>,
    atMs?: number,
  ): Promise<TwinActionResponse>;
  mediaUrl(ref: string): string;
}

export interface ClipSurface {
  playWindow(window: PlaybackWindow): void;
}

export interface PanelPort {
  renderTurn(turn: RenderedTurn): void;
  setInputText(text: string): void;
  setPending(pending: boolean): void;
  notice(message: string): void;
  renderRail(done: boolean[], currentStep: number, stage: string): void;
  renderTwin(board: TwinBoard): void;
  playAudio(url: string): void;
}

export class TrainerPanel {
  state: PanelState;
  private renderedThrough = 0; // seq of the last turn handed to the port
  private seekedThrough = 0; // seq of the last windowed turn seeked

  constructor(
    private readonly api: PanelApi,
    private readonly port: PanelPort,
    private readonly player: ClipSurface,
    sessionId: string,
    stepCount = 0,
  ) {
    this.state = initialState(sessionId, stepCount);
  }

  get pending(): boolean {
    return this.state.pending;
  }

  /** Feed one event (from the SSE stream or a REST response). */
  onEvent(event: StreamEvent): void {
    const before = this.state;
    this.state = applyEvent(this.state, event);
    if (this.state === before) {
      return; // duplicate seq: already rendered
    }
    this.render(before);
  }

  private render(before: PanelState): void {
    for (const turn of this.state.turns) {
      if (turn.seq > this.renderedThrough) {
        this.port.renderTurn(turn);
        if (turn.role === "assistant" && turn.audioRef) {
          this.port.playAudio(this.api.mediaUrl(turn.audioRef));
        }
      }
    }
    if (this.state.turns.length > 0) {
      this.renderedThrough = this.state.turns[this.state.turns.length - 1]!.seq;
    }

    if (
      this.state.currentWindow !== null &&
      this.state.currentWindowSeq > this.seekedThrough
    ) {
      this.player.playWindow(this.state.currentWindow);
      this.seekedThrough = this.state.currentWindowSeq;
    }

    if (
      before.stepDone.join() !== this.state.stepDone.join() ||
      before.currentStep !== this.state.currentStep ||
      before.stage !== this.state.stage
    ) {
      this.port.renderRail(
        this.state.stepDone,
        this.state.currentStep,
        this.state.stage,
      );
    }

    if (this.state.twin !== null && this.state.twin !== before.twin) {
      this.port.renderTwin(boardFrom(this.state.twin));
    }

    for (const message of this.state.notices.slice(before.notices.length)) {
      this.port.notice(message);
    }
  }

  private setPending(pending: boolean): void {
    this.state = { ...this.state, pending };
    this.port.setPending(pending);
  }

  /** Submit a typed prompt. No-op while a turn is already in flight. */
  async submitText(text: string): Promise<void> {
    if (this.state.pending || !text.trim()) {
      return;
    }
    this.setPending(true);
    try {
      const response = await this.api.postTurn(this.state.sessionId, text);
      this.onEvent(this.asEvent(response));
    } catch (error) {
      this.surface(error);
    } finally {
      this.setPending(false);
    }
  }

  /**
   * Upload an utterance. The returned transcription goes into the input
   * box for review before the assistant turn renders; editing and
   * re-sending afterwards goes through submitText.
   */
  async submitAudio(wav: Uint8Array): Promise<void> {
    if (this.state.pending) {
      return;
    }
    this.setPending(true);
    try {
      const response = await this.api.postAudioTurn(this.state.sessionId, wav);
      if (response.transcription) {
        this.port.setInputText(response.transcription);
      }
      this.onEvent(this.asEvent(response));
    } catch (error) {
      this.surface(error);
    } finally {
      this.setPending(false);
    }
  }

  /** Drive the twin; rejections become toasts, never silent drops. */
  async twinAction(
    action: string,
    params?: Record<string, string>,
    atMs?: number,
  ): Promise<void> {
    try {
      const result = await this.api.postTwinAction(
        this.state.sessionId,
        action,
        params,
        atMs,
      );
      if (result.seq !== undefined) {
        this.onEvent({
          seq: result.seq,
          type: "twin_state",
          action: null,
          state: result.state,
          phase: result.phase,
          legal_actions: result.legal_actions,
        });
      }
    } catch (error) {
      if (error instanceof ApiError && isRejection(error.detail)) {
        this.port.notice(`${(error.detail as { reason: string }).reason}`);
        return;
      }
      this.surface(error);
    }
  }

  private asEvent(response: TurnResponse): StreamEvent {
    return {
      seq: response.seq,
      type: "assistant_turn",
      user: response.user,
      transcription: response.transcription,
      turn: response.turn,
      session: response.session,
    };
  }

  private surface(error: unknown): void {
    if (error instanceof ApiError) {
      this.port.notice(
        typeof error.detail === "string"
          ? error.detail
          : JSON.stringify(error.detail),
      );
    } else {
      this.port.notice(String(error));
    }
  }
}

function isRejection(detail: unknown): boolean {
  return (
    typeof detail === "object" &&
    detail !== null &&
    "reason" in (detail as Record<string, unknown>)
  );
}
