// Clip playback over a single persistent video element: programmatic seek
// to a turn's window start, then a scheduled pause at the window end on
// the next timeupdate past it. No server-side clip cutting.

import type { PlaybackWindow } from "./types.js";

export interface VideoSurface {
  currentTime: number;
  paused: boolean;
  play(): unknown;
  pause(): void;
  addEventListener(type: "timeupdate", listener: () => void): void;
  removeEventListener(type: "timeupdate", listener: () => void): void;
}

export class ClipPlayer {
  private stopAtS: number | null = null;

  constructor(private readonly video: VideoSurface) {
    this.video.addEventListener("timeupdate", this.onTimeUpdate);
  }

  private onTimeUpdate = (): void => {
    if (this.stopAtS !== null && this.video.currentTime >= this.stopAtS) {
      this.stopAtS = null;
      this.video.pause();
    }
  };

  playWindow(window: PlaybackWindow): void {
    this.video.currentTime = window.start_ms / 1000;
    this.stopAtS = window.end_ms / 1000;
    void this.video.play();
  }

  dispose(): void {
    this.video.removeEventListener("timeupdate", this.onTimeUpdate);
    this.stopAtS = null;
  }
}
