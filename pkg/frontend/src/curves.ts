/** Curve-panel model: the eight pose channels plus the derived eye position,
 * as plain per-frame series ready to plot. Series are recomputed from the
 * latest camera document -- the panel never invents values of its own. */

import { polarToEye } from "./cameraMath";
import type { CameraDoc, Pose } from "./types";

export const POSE_CHANNELS = [
  "rp.x",
  "rp.y",
  "rp.z",
  "rot.x",
  "rot.y",
  "rot.z",
  "dist",
  "fov",
] as const;

export const DERIVED_CHANNELS = ["eye.x", "eye.y", "eye.z"] as const;

export type ChannelName = (typeof POSE_CHANNELS)[number] | (typeof DERIVED_CHANNELS)[number];

export const ALL_CHANNELS: readonly ChannelName[] = [...POSE_CHANNELS, ...DERIVED_CHANNELS];

export interface CurvePanelModel {
  nFrames: number;
  series: Map<ChannelName, Float64Array>;
  visible: Set<ChannelName>;
  /** Keyframe overlay tick positions (frames). */
  ticks: number[];
}

function channelValue(pose: Pose, name: ChannelName): number {
  switch (name) {
    case "rp.x":
      return pose.rp[0];
    case "rp.y":
      return pose.rp[1];
    case "rp.z":
      return pose.rp[2];
    case "rot.x":
      return pose.rot[0];
    case "rot.y":
      return pose.rot[1];
    case "rot.z":
      return pose.rot[2];
    case "dist":
      return pose.dist;
    case "fov":
      return pose.fov;
    default:
      throw new Error(`derived channel ${name} is not stored on the pose`);
  }
}

export function buildCurves(camera: CameraDoc, tags: number[]): CurvePanelModel {
  const n = camera.frames.length;
  const series = new Map<ChannelName, Float64Array>();
  for (const name of ALL_CHANNELS) series.set(name, new Float64Array(n));
  for (let t = 0; t < n; t++) {
    const pose = camera.frames[t]!;
    for (const name of POSE_CHANNELS) series.get(name)![t] = channelValue(pose, name);
    const eye = polarToEye(pose).eye;
    series.get("eye.x")![t] = eye[0];
    series.get("eye.y")![t] = eye[1];
    series.get("eye.z")![t] = eye[2];
  }
  for (const [name, values] of series) {
    if (values.length !== n) throw new Error(`series ${name} has length ${values.length}`);
  }
  return {
    nFrames: n,
    series,
    visible: new Set<ChannelName>(["dist", "fov", "eye.x", "eye.y", "eye.z"]),
    ticks: [...tags],
  };
}

export function toggleChannel(model: CurvePanelModel, name: ChannelName): void {
  if (model.visible.has(name)) model.visible.delete(name);
  else model.visible.add(name);
}
