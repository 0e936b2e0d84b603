// Single source of truth for the playhead. The <video> element is the clock
// while playing; the slider and programmatic seeks write through here. Every
// view (overlay, EEG strip, slider readout) subscribes and receives the same
// value within the same animation frame.

export type TransportListener = (playheadMs: number, playing: boolean) => void;

export class Transport {
  private playheadMs = 0;
  private playing = false;
  private listeners: TransportListener[] = [];

  constructor(public durationMs: number) {}

  get playhead(): number {
    return this.playheadMs;
  }

  get isPlaying(): boolean {
    return this.playing;
  }

  subscribe(listener: TransportListener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.playheadMs, this.playing);
    }
  }

  play(): void {
    if (!this.playing) {
      this.playing = true;
      this.emit();
    }
  }

  pause(): void {
    if (this.playing) {
      this.playing = false;
      this.emit();
    }
  }

  /** Seek to a video time; clamps into [0, duration]. Always notifies, so a
   * paused scrub still redraws every view. */
  seek(ms: number): void {
    this.playheadMs = Math.min(Math.max(ms, 0), this.durationMs);
    this.emit();
  }

  /** Clock update while playing (from the video element's current time).
   * Ignored when paused: pausing freezes all views. */
  tick(videoTimeMs: number): void {
    if (this.playing) {
      this.playheadMs = Math.min(Math.max(videoTimeMs, 0), this.durationMs);
      this.emit();
    }
  }
}

/** One sync step: pulls the clock's current time into the transport. Run
 * under requestAnimationFrame so overlay and EEG stay within one frame of
 * the video. Returns the transport playhead after the step. */
export function syncOnce(transport: Transport, getClockMs: () => number): number {
  transport.tick(getClockMs());
  return transport.playhead;
}
