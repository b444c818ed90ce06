// Bootstrap: join (or create) a session, connect the stream, wire inputs.
//
// URL parameters:
//   ?session=<id>                 join an existing session (reload-safe)
//   ?transcript=<id>&guide=<id>   create a new one (&twin=1 binds a twin)

import { ApiClient } from "./api.js";
import { mockCapture } from "./audio.js";
import { DomPort } from "./dom.js";
import { TrainerPanel } from "./panel.js";
import { connectStream } from "./stream.js";
import { ClipPlayer } from "./video.js";

async function resolveSessionId(api: ApiClient, params: URLSearchParams): Promise<string> {
  const existing = params.get("session");
  if (existing) {
    return existing;
  }
  const transcript = params.get("transcript");
  const guide = params.get("guide");
  if (!transcript || !guide) {
    throw new Error(
      "open with ?session=<id> or ?transcript=<id>&guide=<id>[&twin=1]",
    );
  }
  const response = await fetch("/sessions", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({
      transcript_id: transcript,
      guide_id: guide,
      twin: params.get("twin") === "1",
    }),
  });
  const body = await response.json();
  const url = new URL(location.href);
  url.searchParams.set("session", body.id);
  history.replaceState(null, "", url);
  return body.id as string;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const params = new URLSearchParams(location.search);
  const sessionId = await resolveSessionId(api, params);
  const snapshot = await api.getSession(sessionId);

  const video = document.getElementById("expert-video") as HTMLVideoElement;
  const media = params.get("media");
  if (media) {
    video.src = api.mediaUrl(media);
  }
  const player = new ClipPlayer(video);

  const panel = new TrainerPanel(
    api,
    new DomPort(snapshot.steps, (action, actionParams) => {
      void panel.twinAction(action, actionParams, Date.now() - epoch);
    }),
    player,
    sessionId,
    snapshot.step_count,
  );

  // Twin time is caller-driven: one wall-clock epoch per page keeps at_ms
  // monotone, and a coarse tick keeps the fill bar moving.
  const epoch = Date.now() - (snapshot.twin?.state.clock_ms ?? 0);
  if (snapshot.twin) {
    setInterval(() => {
      void panel.twinAction("tick", undefined, Date.now() - epoch);
    }, 1000);
  }

  // Reload-safety: the full history replays through the same reducer.
  connectStream("", sessionId, (event) => panel.onEvent(event), 0);

  const input = document.getElementById("prompt") as HTMLInputElement;
  const send = document.getElementById("send") as HTMLButtonElement;
  const mic = document.getElementById("mic") as HTMLButtonElement;

  const submit = () => {
    const text = input.value;
    input.value = "";
    void panel.submitText(text);
  };
  send.onclick = submit;
  input.onkeydown = (ev) => {
    if (ev.key === "Enter" && !panel.pending) {
      submit();
    }
  };
  mic.onclick = () => {
    // Mock-speech capture: the utterance is typed, encoded as the WAV the
    // mock STT reads, and the returned transcription lands in the input
    // box for review before the answer renders.
    const utterance = prompt("Say something (mock microphone):");
    if (utterance && utterance.trim()) {
      void panel.submitAudio(mockCapture(utterance));
    }
  };
}

void boot().catch((error) => {
  const notices = document.getElementById("notices");
  if (notices) {
    notices.textContent = String(error);
  }
});
