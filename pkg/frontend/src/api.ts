// Thin REST client over the service API. fetch is injectable for tests.

import type {
  SessionSnapshot,
  TurnResponse,
  TwinPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface TwinActionResponse extends TwinPayload {
  seq?: number;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, body?.detail ?? body);
    }
    return body as T;
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request(`/sessions/${sessionId}`);
  }

  postTurn(sessionId: string, text: string): Promise<TurnResponse> {
    return this.request(`/sessions/${sessionId}/turns`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  postAudioTurn(sessionId: string, wav: Uint8Array): Promise<TurnResponse> {
    return this.request(`/sessions/${sessionId}/audio-turns`, {
      method: "POST",
      headers: { "content-type": "audio/wav" },
      body: new Uint8Array(wav).buffer,
    });
  }

  postTwinAction(
    sessionId: string,
    action: string,
    params?: Record<string, string>,
    atMs?: number,
  ): Promise<TwinActionResponse> {
    return this.request(`/sessions/${sessionId}/twin/actions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ action, params, at_ms: atMs }),
    });
  }

  mediaUrl(ref: string): string {
    return `${this.base}/media/${ref}`;
  }
}
