/** JSON shapes exchanged with the editing service (schema_version 1). */

export type Vec3 = [number, number, number];

/** One polar camera pose: pivot point, Euler rotation, distance, field of view. */
export interface Pose {
  rp: Vec3;
  rot: Vec3;
  dist: number;
  fov: number;
}

/** A re-synthesized half-open frame range [start, end) with its new poses. */
export interface Segment {
  start: number;
  end: number;
  frames: Pose[];
}

/** Session descriptor; `overrides` maps tagged frame -> pinned 8-value pose row. */
export interface SessionInfo {
  session_id: string;
  n_frames: number;
  fps: number;
  version: number;
  tags: number[];
  overrides: Record<string, number[]>;
}

export interface CameraDoc {
  fps: number;
  version: number;
  frames: Pose[];
}

export interface DanceDoc {
  fps: number;
  /** [frame][joint][xyz] */
  joints: number[][][];
}

export interface MutationResponse {
  session: SessionInfo;
  changed: Segment[];
}

export type Policy = "cascade" | "local";

export function poseFromRow(row: number[]): Pose {
  if (row.length !== 8) throw new Error(`pose row must have 8 values, got ${row.length}`);
  return {
    rp: [row[0]!, row[1]!, row[2]!],
    rot: [row[3]!, row[4]!, row[5]!],
    dist: row[6]!,
    fov: row[7]!,
  };
}

export function poseToRow(pose: Pose): number[] {
  return [...pose.rp, ...pose.rot, pose.dist, pose.fov];
}

export function clonePose(pose: Pose): Pose {
  return { rp: [...pose.rp], rot: [...pose.rot], dist: pose.dist, fov: pose.fov };
}
