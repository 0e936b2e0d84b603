import { describe, expect, it } from "vitest";

import type { GazePayload } from "../src/api.js";
import { computeOverlayScene } from "../src/overlay.js";
import { frameIntensity } from "../src/inspector.js";
import { OverlayState } from "../src/state.js";

const SCREEN = { width: 1024, height: 768 };
const PLAYER = { width: 512, height: 384 };

function payloadWith(
  series: Record<string, { x: number[]; y: number[]; mask: boolean[] }>,
): GazePayload {
  return {
    from_frame: 0,
    frame_rate_fps: 32,
    frame_ms: [],
    viewers: series,
  };
}

function stateFor(viewers: string[], selected: string[]): OverlayState {
  const state = new OverlayState(viewers);
  for (const viewer of selected) {
    state.toggle(viewer);
  }
  return state;
}

describe("overlay scene", () => {
  it("draws nothing with no selected viewers", () => {
    const payload = payloadWith({
      a: { x: [100], y: [100], mask: [true] },
    });
    const scene = computeOverlayScene(
      payload, stateFor(["a"], []), SCREEN, PLAYER, 0,
    );
    expect(scene.dots).toEqual([]);
    expect(scene.segments).toEqual([]);
  });

  it("maps the current dot exactly into player coordinates", () => {
    const payload = payloadWith({
      a: { x: [512.3], y: [400.0], mask: [true] },
    });
    const scene = computeOverlayScene(
      payload, stateFor(["a"], ["a"]), SCREEN, PLAYER, 0,
    );
    expect(scene.dots.length).toBe(1);
    expect(scene.dots[0]!.x).toBe((512.3 * 512) / 1024);
    expect(scene.dots[0]!.y).toBe((400.0 * 384) / 768);
  });

  it("masked current frames draw no dot", () => {
    const payload = payloadWith({
      a: { x: [1, 2], y: [1, 2], mask: [false, true] },
    });
    const scene = computeOverlayScene(
      payload, stateFor(["a"], ["a"]), SCREEN, PLAYER, 0,
    );
    expect(scene.dots).toEqual([]);
  });

  it("trail covers only the trail window and fades toward the past", () => {
    const n = 320; // 10 s at 32 fps
    const xs = Array.from({ length: n }, (_, k) => k);
    const mask = xs.map(() => true);
    const payload = payloadWith({ a: { x: xs, y: xs, mask } });
    const state = stateFor(["a"], ["a"]);
    state.trailWindowMs = 2000;
    const playhead = 5000; // frame 160
    const scene = computeOverlayScene(payload, state, SCREEN, PLAYER, playhead);
    expect(scene.segments.length).toBe(64); // 2 s of segments at 32 fps
    const alphas = scene.segments.map((s) => s.alpha);
    for (let k = 1; k < alphas.length; k += 1) {
      expect(alphas[k]!).toBeGreaterThan(alphas[k - 1]!);
    }
  });

  it("gaps in the mask break the trail", () => {
    const xs = [0, 1, 2, 3, 4, 5, 6, 7];
    const mask = [true, true, false, true, true, true, true, true];
    const payload = payloadWith({ a: { x: xs, y: xs, mask } });
    const state = stateFor(["a"], ["a"]);
    state.trailWindowMs = 10_000;
    const playhead = (7 / 32) * 1000;
    const scene = computeOverlayScene(payload, state, SCREEN, PLAYER, playhead);
    // segments 1-2 and 2-3 are dropped around the masked frame 2
    expect(scene.segments.length).toBe(5);
  });

  it("selected viewers get distinct colors", () => {
    const payload = payloadWith({
      a: { x: [10], y: [10], mask: [true] },
      b: { x: [20], y: [20], mask: [true] },
    });
    const scene = computeOverlayScene(
      payload, stateFor(["a", "b"], ["a", "b"]), SCREEN, PLAYER, 0,
    );
    expect(scene.dots.length).toBe(2);
    expect(scene.dots[0]!.color).not.toBe(scene.dots[1]!.color);
  });
});

describe("inspector intensity ramp", () => {
  it("runs 0 to 1 linearly across the window", () => {
    expect(frameIntensity(0, 160)).toBe(0);
    expect(frameIntensity(159, 160)).toBe(1);
    expect(frameIntensity(80, 161)).toBe(0.5);
    expect(frameIntensity(0, 1)).toBe(0);
  });
});
