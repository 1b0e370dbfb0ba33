/** Canvas 3D preview: skeleton joints, the synthesized camera's frustum, and
 * the pivot point, seen from an orbitable external observer. Poses are drawn
 * exactly as delivered per frame, so a shot cut renders as an instantaneous
 * jump of the frustum between consecutive frames. */

import {
  add,
  cross,
  dot,
  frustumCorners,
  norm,
  polarToEye,
  scale,
  sub,
  type EyeBasis,
} from "./cameraMath";
import type { Pose, Vec3 } from "./types";

export interface OrbitState {
  center: Vec3;
  radius: number;
  azimuth: number;
  elevation: number;
}

export function defaultOrbit(center: Vec3 = [0, 1, 0]): OrbitState {
  return { center, radius: 10, azimuth: 0.6, elevation: 0.35 };
}

const OBSERVER_FOV = 50;

export function observerBasis(state: OrbitState): EyeBasis {
  const { center, radius, azimuth, elevation } = state;
  const offset: Vec3 = [
    radius * Math.cos(elevation) * Math.sin(azimuth),
    radius * Math.sin(elevation),
    radius * Math.cos(elevation) * Math.cos(azimuth),
  ];
  const eye = add(center, offset);
  const viewRaw = sub(center, eye);
  const viewDir = scale(viewRaw, 1 / norm(viewRaw));
  const rightRaw = cross([0, 1, 0], viewDir);
  const rightLen = norm(rightRaw);
  const right: Vec3 = rightLen > 1e-9 ? scale(rightRaw, 1 / rightLen) : [1, 0, 0];
  const up = cross(viewDir, right);
  return { eye, viewDir, up, right, fov: OBSERVER_FOV };
}

interface Projected {
  x: number;
  y: number;
  depth: number;
}

function toScreen(basis: EyeBasis, p: Vec3, w: number, h: number): Projected | null {
  const rel = sub(p, basis.eye);
  const z = dot(rel, basis.viewDir);
  if (z <= 1e-6) return null;
  const half = Math.tan(((basis.fov * Math.PI) / 180) / 2);
  const x = dot(rel, basis.right) / z / half;
  const y = dot(rel, basis.up) / z / half;
  // Square projection scaled by canvas height keeps circles round.
  return { x: w / 2 + (x * h) / 2, y: h / 2 - (y * h) / 2, depth: z };
}

function drawPolyline(
  ctx: CanvasRenderingContext2D,
  basis: EyeBasis,
  points: Vec3[],
  w: number,
  h: number,
  close: boolean,
): void {
  ctx.beginPath();
  let started = false;
  let first: Projected | null = null;
  for (const p of points) {
    const s = toScreen(basis, p, w, h);
    if (!s) {
      started = false;
      continue;
    }
    if (!started) {
      ctx.moveTo(s.x, s.y);
      started = true;
      if (!first) first = s;
    } else {
      ctx.lineTo(s.x, s.y);
    }
  }
  if (close && first && started) ctx.lineTo(first.x, first.y);
  ctx.stroke();
}

function drawGrid(ctx: CanvasRenderingContext2D, basis: EyeBasis, center: Vec3, w: number, h: number): void {
  ctx.strokeStyle = "#2a2f3a";
  ctx.lineWidth = 1;
  const half = 4;
  for (let i = -half; i <= half; i++) {
    drawPolyline(
      ctx,
      basis,
      [
        [center[0] + i, 0, center[2] - half],
        [center[0] + i, 0, center[2] + half],
      ],
      w,
      h,
      false,
    );
    drawPolyline(
      ctx,
      basis,
      [
        [center[0] - half, 0, center[2] + i],
        [center[0] + half, 0, center[2] + i],
      ],
      w,
      h,
      false,
    );
  }
}

export function renderViewport(
  ctx: CanvasRenderingContext2D,
  w: number,
  h: number,
  orbit: OrbitState,
  joints: Vec3[],
  pose: Pose | null,
  hud: string,
): void {
  const basis = observerBasis(orbit);
  ctx.fillStyle = "#14171c";
  ctx.fillRect(0, 0, w, h);
  drawGrid(ctx, basis, orbit.center, w, h);

  ctx.fillStyle = "#8fd0ff";
  for (const joint of joints) {
    const s = toScreen(basis, joint, w, h);
    if (!s) continue;
    const r = Math.max(1.2, 22 / s.depth);
    ctx.beginPath();
    ctx.arc(s.x, s.y, r, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (pose) {
    const cam = polarToEye(pose);
    const corners = frustumCorners(cam, 1.5);
    ctx.strokeStyle = "#ffb84d";
    ctx.lineWidth = 1.5;
    drawPolyline(ctx, basis, corners, w, h, true);
    for (const corner of corners) drawPolyline(ctx, basis, [cam.eye, corner], w, h, false);
    // View axis from eye to the pivot, plus a crosshair at the pivot.
    ctx.strokeStyle = "#ff6d6d";
    drawPolyline(ctx, basis, [cam.eye, pose.rp], w, h, false);
    const d = 0.15;
    for (const axis of [0, 1, 2] as const) {
      const a: Vec3 = [...pose.rp];
      const b: Vec3 = [...pose.rp];
      a[axis] -= d;
      b[axis] += d;
      drawPolyline(ctx, basis, [a, b], w, h, false);
    }
  }

  ctx.fillStyle = "#d7dde8";
  ctx.font = "12px ui-monospace, monospace";
  ctx.fillText(hud, 10, 18);
}
