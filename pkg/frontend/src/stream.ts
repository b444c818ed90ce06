// SSE wiring. The browser EventSource resumes with Last-Event-ID on its
// own; on a fresh page we connect with after=0 so the full history
// replays through the same reducer that handles live events.

import type { StreamEvent } from "./types.js";

export interface EventSourceLike {
  addEventListener(type: string, listener: (ev: { data: string }) => void): void;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

const EVENT_TYPES = ["assistant_turn", "twin_state", "error"] as const;

export function connectStream(
  base: string,
  sessionId: string,
  onEvent: (event: StreamEvent) => void,
  after = 0,
  factory: EventSourceFactory = (url) =>
    new EventSource(url) as unknown as EventSourceLike,
): () => void {
  const source = factory(
    `${base}/sessions/${sessionId}/stream?after=${after}`,
  );
  for (const type of EVENT_TYPES) {
    source.addEventListener(type, (ev) => {
      onEvent(JSON.parse(ev.data) as StreamEvent);
    });
  }
  return () => source.close();
}
