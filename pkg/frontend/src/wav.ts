// Mock-speech WAV encoder: a silent PCM16 mono container with the spoken
// text carried in the standard LIST/INFO comment chunk, byte-compatible
// with what the service's mock speech-to-text reads back.

const SAMPLE_RATE_HZ = 16_000;

function ascii(text: string): Uint8Array {
  return new TextEncoder().encode(text);
}

export function encodeMockSpeechWav(
  text: string,
  durationMs: number,
  sampleRateHz: number = SAMPLE_RATE_HZ,
): Uint8Array {
  const frames = Math.max(1, Math.floor((sampleRateHz * durationMs) / 1000));
  const pcmLen = frames * 2;

  let comment = new TextEncoder().encode(text);
  if (comment.length % 2 === 1) {
    const padded = new Uint8Array(comment.length + 1);
    padded.set(comment);
    comment = padded; // RIFF chunks are word-aligned
  }
  const infoLen = 4 + 4 + 4 + comment.length; // INFO + ICMT + size + text

  const fmtLen = 16;
  const bodyLen = 4 + (8 + fmtLen) + (8 + infoLen) + (8 + pcmLen);
  const total = 8 + bodyLen;

  const out = new Uint8Array(total);
  const view = new DataView(out.buffer);
  let pos = 0;

  const putTag = (tag: string) => {
    out.set(ascii(tag), pos);
    pos += 4;
  };
  const putU32 = (value: number) => {
    view.setUint32(pos, value, true);
    pos += 4;
  };
  const putU16 = (value: number) => {
    view.setUint16(pos, value, true);
    pos += 2;
  };

  putTag("RIFF");
  putU32(bodyLen);
  putTag("WAVE");

  putTag("fmt ");
  putU32(fmtLen);
  putU16(1); // PCM
  putU16(1); // mono
  putU32(sampleRateHz);
  putU32(sampleRateHz * 2);
  putU16(2);
  putU16(16);

  putTag("LIST");
  putU32(infoLen);
  putTag("INFO");
  putTag("ICMT");
  putU32(comment.length);
  out.set(comment, pos);
  pos += comment.length;

  putTag("data");
  putU32(pcmLen);
  // PCM payload stays zeroed: silence.

  return out;
}

export function mockUtteranceWav(text: string): Uint8Array {
  const words = text.trim().split(/\s+/).filter(Boolean).length;
  return encodeMockSpeechWav(text, Math.max(1, words) * 400);
}
