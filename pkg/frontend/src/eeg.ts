// EEG strip: window math and canvas rendering.

import type { EegPayload } from "./api.js";

export interface EegWindow {
  fromMs: number;
  toMs: number;
}

/** The strip always asks for exactly playhead +/- half window; the service
 * truncates against the recording bounds (left-truncated near t=0). */
export function eegWindow(playheadMs: number, halfWindowMs: number): EegWindow {
  return { fromMs: playheadMs - halfWindowMs, toMs: playheadMs + halfWindowMs };
}

export interface TracePoint {
  tMs: number;
  value: number;
}

/** Sample timestamps for one returned channel slice. */
export function traceTimes(payload: EegPayload, channel: string): number[] {
  const values = payload.channels[channel] ?? [];
  const step = 1000.0 / payload.sample_rate_hz;
  return values.map((_, i) => payload.start_ms + i * step);
}

/** Map a video time into strip x-coordinates for a window centered on the
 * playhead: the cursor sits exactly at the middle of the strip. */
export function timeToX(
  tMs: number,
  window: EegWindow,
  stripWidth: number,
): number {
  const span = window.toMs - window.fromMs;
  return ((tMs - window.fromMs) / span) * stripWidth;
}

export function drawEegStrip(
  ctx: CanvasRenderingContext2D,
  payload: EegPayload | null,
  channels: string[],
  playheadMs: number,
  halfWindowMs: number,
  width: number,
  height: number,
  colorFor: (index: number) => string,
): void {
  ctx.clearRect(0, 0, width, height);
  const window = eegWindow(playheadMs, halfWindowMs);
  if (payload !== null && channels.length > 0) {
    const lane = height / channels.length;
    channels.forEach((channel, ci) => {
      const values = payload.channels[channel];
      if (!values || values.length === 0) {
        return;
      }
      const times = traceTimes(payload, channel);
      let lo = Infinity;
      let hi = -Infinity;
      for (const v of values) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
      const span = hi - lo || 1;
      const y0 = ci * lane;
      ctx.strokeStyle = colorFor(ci);
      ctx.lineWidth = 1;
      ctx.beginPath();
      values.forEach((v, i) => {
        const x = timeToX(times[i] as number, window, width);
        const y = y0 + lane - ((v - lo) / span) * (lane * 0.9) - lane * 0.05;
        if (i === 0) {
          ctx.moveTo(x, y);
        } else {
          ctx.lineTo(x, y);
        }
      });
      ctx.stroke();
      ctx.fillStyle = "#9aa4b2";
      ctx.font = "10px sans-serif";
      ctx.fillText(channel, 4, y0 + 11);
    });
  }
  // playhead cursor, always dead center
  const cursorX = timeToX(playheadMs, window, width);
  ctx.strokeStyle = "#ff5252";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(cursorX, 0);
  ctx.lineTo(cursorX, height);
  ctx.stroke();
}
