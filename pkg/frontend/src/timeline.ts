/** Pure timeline state and client-side validation of marker edits.
 *
 * The service revalidates everything; these checks exist so obviously-bad
 * drags are rejected before a request is made and the marker snaps back
 * immediately. The rules mirror the server: markers stay sorted, the first
 * and last frames are permanent, no duplicates, and no gap between adjacent
 * markers may exceed GAP_CAP frames. */

import type { Pose, Segment } from "./types";

export const GAP_CAP = 60;

export type Validity = { ok: true } | { ok: false; reason: string };

const ok: Validity = { ok: true };
const fail = (reason: string): Validity => ({ ok: false, reason });

export interface TimelineModel {
  nFrames: number;
  fps: number;
  markers: number[];
  selection: number | null;
  playhead: number;
}

export function makeTimeline(nFrames: number, fps: number, markers: number[]): TimelineModel {
  const sorted = [...markers].sort((a, b) => a - b);
  return { nFrames, fps, markers: sorted, selection: null, playhead: 0 };
}

export function isTagged(model: TimelineModel, frame: number): boolean {
  return model.markers.includes(frame);
}

/** Frame gaps between consecutive markers. */
export function gaps(markers: number[]): number[] {
  const out: number[] = [];
  for (let i = 1; i < markers.length; i++) out.push(markers[i]! - markers[i - 1]!);
  return out;
}

function inRange(frame: number, nFrames: number): Validity {
  if (!Number.isInteger(frame)) return fail(`frame ${frame} is not an integer`);
  if (frame < 0 || frame >= nFrames) return fail(`frame ${frame} is outside [0, ${nFrames})`);
  return ok;
}

export function validateAdd(markers: number[], frame: number, nFrames: number): Validity {
  const bounds = inRange(frame, nFrames);
  if (!bounds.ok) return bounds;
  if (markers.includes(frame)) return fail(`frame ${frame} is already a keyframe`);
  return ok;
}

export function validateRemove(markers: number[], frame: number, nFrames: number): Validity {
  const bounds = inRange(frame, nFrames);
  if (!bounds.ok) return bounds;
  const i = markers.indexOf(frame);
  if (i < 0) return fail(`frame ${frame} is not a keyframe`);
  if (frame === 0 || frame === nFrames - 1) return fail("the first and last keyframes are permanent");
  const merged = markers[i + 1]! - markers[i - 1]!;
  if (merged > GAP_CAP) return fail(`removing it leaves a ${merged}-frame gap (cap ${GAP_CAP})`);
  return ok;
}

export function validateMove(
  markers: number[],
  from: number,
  to: number,
  nFrames: number,
): Validity {
  const bounds = inRange(to, nFrames);
  if (!bounds.ok) return bounds;
  const i = markers.indexOf(from);
  if (i < 0) return fail(`frame ${from} is not a keyframe`);
  if (from === 0 || from === nFrames - 1) return fail("the first and last keyframes are permanent");
  if (to === from) return fail("marker did not move");
  if (markers.includes(to)) return fail(`frame ${to} is already a keyframe`);
  const prev = markers[i - 1]!;
  const next = markers[i + 1]!;
  if (to <= prev || to >= next) return fail("marker cannot cross its neighbours");
  if (to - prev > GAP_CAP) return fail(`gap ${to - prev} to the previous marker exceeds ${GAP_CAP}`);
  if (next - to > GAP_CAP) return fail(`gap ${next - to} to the next marker exceeds ${GAP_CAP}`);
  return ok;
}

export function applyAdd(markers: number[], frame: number): number[] {
  return [...markers, frame].sort((a, b) => a - b);
}

export function applyRemove(markers: number[], frame: number): number[] {
  return markers.filter((m) => m !== frame);
}

export function applyMove(markers: number[], from: number, to: number): number[] {
  return applyAdd(applyRemove(markers, from), to);
}

/** Splice re-synthesized segments into a dense camera track (copy-on-write). */
export function applySegments(frames: Pose[], segments: Segment[]): Pose[] {
  const out = [...frames];
  for (const seg of segments) {
    if (seg.end - seg.start !== seg.frames.length) {
      throw new Error(`segment [${seg.start}, ${seg.end}) carries ${seg.frames.length} frames`);
    }
    if (seg.start < 0 || seg.end > out.length) {
      throw new Error(`segment [${seg.start}, ${seg.end}) is outside the track`);
    }
    for (let i = 0; i < seg.frames.length; i++) out[seg.start + i] = seg.frames[i]!;
  }
  return out;
}
