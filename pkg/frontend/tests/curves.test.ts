import { describe, expect, it } from "vitest";
import { polarToEye } from "../src/cameraMath";
import { ALL_CHANNELS, buildCurves, toggleChannel } from "../src/curves";
import type { CameraDoc, Pose } from "../src/types";

function rampCamera(n: number): CameraDoc {
  const frames: Pose[] = [];
  for (let t = 0; t < n; t++) {
    frames.push({
      rp: [t * 0.1, 1 + t * 0.01, -t * 0.05],
      rot: [0.2, t * 0.02, 0],
      dist: 3 + t * 0.03,
      fov: 40 + t * 0.5,
    });
  }
  return { fps: 30, version: 0, frames };
}

describe("buildCurves", () => {
  const doc = rampCamera(50);
  const model = buildCurves(doc, [0, 20, 49]);

  it("produces every channel at full track length", () => {
    expect(model.nFrames).toBe(50);
    for (const name of ALL_CHANNELS) {
      expect(model.series.get(name)!.length, name).toBe(50);
    }
    expect(model.ticks).toEqual([0, 20, 49]);
  });

  it("copies pose channels verbatim", () => {
    expect(model.series.get("fov")![10]).toBeCloseTo(45, 12);
    expect(model.series.get("dist")![20]).toBeCloseTo(3.6, 12);
    expect(model.series.get("rp.z")![40]).toBeCloseTo(-2, 12);
  });

  it("derives the eye channels through polarToEye", () => {
    const eye = polarToEye(doc.frames[17]!).eye;
    expect(model.series.get("eye.x")![17]).toBeCloseTo(eye[0], 12);
    expect(model.series.get("eye.y")![17]).toBeCloseTo(eye[1], 12);
    expect(model.series.get("eye.z")![17]).toBeCloseTo(eye[2], 12);
  });

  it("toggles channel visibility", () => {
    const visibleBefore = model.visible.has("fov");
    toggleChannel(model, "fov");
    expect(model.visible.has("fov")).toBe(!visibleBefore);
    toggleChannel(model, "fov");
    expect(model.visible.has("fov")).toBe(visibleBefore);
  });
});
