// Gaze overlay: scene computation (pure, tested) and canvas painting.

import type { GazePayload } from "./api.js";
import { rgbaWithAlpha } from "./colors.js";
import {
  dotRadius,
  frameForTime,
  mapToPlayer,
  runDurationMs,
  trailAlpha,
  type Size,
} from "./geometry.js";
import type { OverlayState } from "./state.js";

export interface OverlayDot {
  viewer: string;
  x: number;
  y: number;
  radius: number;
  color: string;
}

export interface TrailSegment {
  viewer: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  alpha: number;
  color: string;
}

export interface OverlayScene {
  dots: OverlayDot[];
  segments: TrailSegment[];
}

/** Compute what to draw at a playhead: one dot per selected viewer whose
 * current frame is observed (masked frames draw nothing), plus fading trail
 * segments over the trail window. Coordinates scale exactly from the
 * recording screen to the player size. */
export function computeOverlayScene(
  payload: GazePayload,
  state: OverlayState,
  screen: Size,
  player: Size,
  playheadMs: number,
): OverlayScene {
  const fps = payload.frame_rate_fps;
  const dots: OverlayDot[] = [];
  const segments: TrailSegment[] = [];
  for (const viewer of state.selection()) {
    const series = payload.viewers[viewer];
    if (!series) {
      continue;
    }
    const color = state.colorFor(viewer);
    const relFrame =
      frameForTime(playheadMs, fps, payload.from_frame + series.x.length) -
      payload.from_frame;
    if (relFrame < 0 || relFrame >= series.x.length) {
      continue;
    }
    if (series.mask[relFrame]) {
      const durationMs = runDurationMs(
        series.x, series.y, series.mask, relFrame, fps,
      );
      const pos = mapToPlayer(
        series.x[relFrame] as number,
        series.y[relFrame] as number,
        screen,
        player,
      );
      dots.push({
        viewer,
        x: pos.x,
        y: pos.y,
        radius: dotRadius(durationMs),
        color,
      });
    }
    const trailFrames = Math.round((state.trailWindowMs * fps) / 1000);
    const first = Math.max(0, relFrame - trailFrames);
    for (let k = first; k < relFrame; k += 1) {
      if (!series.mask[k] || !series.mask[k + 1]) {
        continue; // gaps break the trail line
      }
      const ageMs = ((relFrame - k) / fps) * 1000;
      const from = mapToPlayer(
        series.x[k] as number, series.y[k] as number, screen, player,
      );
      const to = mapToPlayer(
        series.x[k + 1] as number, series.y[k + 1] as number, screen, player,
      );
      segments.push({
        viewer,
        x1: from.x,
        y1: from.y,
        x2: to.x,
        y2: to.y,
        alpha: trailAlpha(ageMs, state.trailWindowMs),
        color,
      });
    }
  }
  return { dots, segments };
}

export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  scene: OverlayScene,
  player: Size,
): void {
  ctx.clearRect(0, 0, player.width, player.height);
  for (const seg of scene.segments) {
    ctx.strokeStyle = rgbaWithAlpha(seg.color, seg.alpha);
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(seg.x1, seg.y1);
    ctx.lineTo(seg.x2, seg.y2);
    ctx.stroke();
  }
  for (const dot of scene.dots) {
    ctx.fillStyle = rgbaWithAlpha(dot.color, 0.85);
    ctx.beginPath();
    ctx.arc(dot.x, dot.y, dot.radius, 0, 2 * Math.PI);
    ctx.fill();
    ctx.strokeStyle = dot.color;
    ctx.lineWidth = 1.5;
    ctx.stroke();
  }
}
