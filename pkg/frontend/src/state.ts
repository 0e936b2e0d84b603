// Selection state for the overlay and the EEG strip.

import { viewerColor } from "./colors.js";

export const DEFAULT_TRAIL_WINDOW_MS = 2000;
export const DEFAULT_EEG_HALF_WINDOW_MS = 5000;

export class OverlayState {
  selectedViewers = new Set<string>();
  trailWindowMs = DEFAULT_TRAIL_WINDOW_MS;

  constructor(private allViewers: string[]) {}

  toggle(viewer: string): void {
    if (this.selectedViewers.has(viewer)) {
      this.selectedViewers.delete(viewer);
    } else if (this.allViewers.includes(viewer)) {
      this.selectedViewers.add(viewer);
    }
  }

  /** Stable color per viewer, assigned by dataset index; unique across any
   * selection of up to 16 viewers. */
  colorFor(viewer: string): string {
    return viewerColor(this.allViewers.indexOf(viewer));
  }

  selection(): string[] {
    return this.allViewers.filter((v) => this.selectedViewers.has(v));
  }
}

export class EegViewState {
  selectedChannels = new Set<string>();
  halfWindowMs = DEFAULT_EEG_HALF_WINDOW_MS;

  constructor(private allChannels: string[]) {}

  toggle(channel: string): void {
    if (this.selectedChannels.has(channel)) {
      this.selectedChannels.delete(channel);
    } else if (this.allChannels.includes(channel)) {
      this.selectedChannels.add(channel);
    }
  }

  selection(): string[] {
    return this.allChannels.filter((c) => this.selectedChannels.has(c));
  }
}
