// Microphone capture and assistant-audio playback.
//
// Against the mock backend, real phoneme audio cannot be transcribed, so
// the default capture path asks for the utterance as text and encodes it
// into the text-carrying WAV the mock speech-to-text reads. Real
// MediaRecorder capture is available for deployments with a hosted STT
// adapter.

import { mockUtteranceWav } from "./wav.js";

export async function captureMicrophone(maxMs = 5000): Promise<Uint8Array> {
  const stream = await navigator.mediaDevices.getUserMedia({ audio: true });
  const recorder = new MediaRecorder(stream);
  const chunks: BlobPart[] = [];
  recorder.ondataavailable = (ev) => chunks.push(ev.data);

  const stopped = new Promise<void>((resolve) => {
    recorder.onstop = () => resolve();
  });
  recorder.start();
  await new Promise((resolve) => setTimeout(resolve, maxMs));
  recorder.stop();
  await stopped;
  stream.getTracks().forEach((track) => track.stop());

  const blob = new Blob(chunks);
  return new Uint8Array(await blob.arrayBuffer());
}

export function mockCapture(utterance: string): Uint8Array {
  return mockUtteranceWav(utterance);
}

export function playTurnAudio(url: string): HTMLAudioElement {
  const audio = new Audio(url);
  void audio.play().catch(() => {
    /* autoplay may be blocked; the replay button re-triggers */
  });
  return audio;
}
