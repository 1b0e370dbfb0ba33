/** Rendering-grade camera math. The only piece duplicated from the service is
 * the polar->eye conversion, which must track the server to 1e-5 (checked in
 * tests against committed fixture vectors). Everything else here is screen
 * projection for the canvas viewport -- no synthesis happens client-side. */

import type { Pose, Vec3 } from "./types";

export interface EyeBasis {
  eye: Vec3;
  viewDir: Vec3;
  up: Vec3;
  right: Vec3;
  fov: number;
}

export const ASPECT = 16 / 9;

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

export function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

type Mat3 = [Vec3, Vec3, Vec3];

function matVec(m: Mat3, v: Vec3): Vec3 {
  return [dot(m[0], v), dot(m[1], v), dot(m[2], v)];
}

function matMul(a: Mat3, b: Mat3): Mat3 {
  const col = (j: number): Vec3 => [b[0][j]!, b[1][j]!, b[2][j]!];
  const rows = a.map((row) => {
    const c0 = col(0);
    const c1 = col(1);
    const c2 = col(2);
    return [dot(row, c0), dot(row, c1), dot(row, c2)] as Vec3;
  });
  return [rows[0]!, rows[1]!, rows[2]!];
}

/** World rotation R_y(yaw) * R_x(pitch) * R_z(roll) for rot = (pitch, yaw, roll). */
export function rotationMatrix(rot: Vec3): Mat3 {
  const [pitch, yaw, roll] = rot;
  const cp = Math.cos(pitch);
  const sp = Math.sin(pitch);
  const cy = Math.cos(yaw);
  const sy = Math.sin(yaw);
  const cr = Math.cos(roll);
  const sr = Math.sin(roll);
  const rx: Mat3 = [
    [1, 0, 0],
    [0, cp, -sp],
    [0, sp, cp],
  ];
  const ry: Mat3 = [
    [cy, 0, sy],
    [0, 1, 0],
    [-sy, 0, cy],
  ];
  const rz: Mat3 = [
    [cr, -sr, 0],
    [sr, cr, 0],
    [0, 0, 1],
  ];
  return matMul(ry, matMul(rx, rz));
}

/** Polar pose -> eye position and orthonormal view axes. */
export function polarToEye(pose: Pose): EyeBasis {
  const rmat = rotationMatrix(pose.rot);
  const viewDir = matVec(rmat, [0, 0, 1]);
  const up = matVec(rmat, [0, 1, 0]);
  const eye = sub(pose.rp, scale(viewDir, pose.dist));
  return { eye, viewDir, up, right: cross(up, viewDir), fov: pose.fov };
}

export interface ScreenPoint {
  /** Normalized device coords in [-1, 1] when on-screen. */
  x: number;
  y: number;
  /** Forward depth in world units; points with depth <= 0 are behind the eye. */
  depth: number;
}

/** Project a world point through a camera basis (perspective, 16:9). */
export function projectPoint(basis: EyeBasis, point: Vec3, aspect = ASPECT): ScreenPoint {
  const rel = sub(point, basis.eye);
  const x = dot(rel, basis.right);
  const y = dot(rel, basis.up);
  const z = dot(rel, basis.viewDir);
  if (z <= 1e-9) return { x: NaN, y: NaN, depth: z };
  const vHalf = Math.tan(((basis.fov * Math.PI) / 180) / 2);
  const hHalf = aspect * vHalf;
  return { x: x / z / hHalf, y: y / z / vHalf, depth: z };
}

/** Corners of the viewing rectangle at `depth` along the view axis,
 * ordered to draw a closed wireframe loop. */
export function frustumCorners(basis: EyeBasis, depth: number, aspect = ASPECT): Vec3[] {
  const vHalf = Math.tan(((basis.fov * Math.PI) / 180) / 2) * depth;
  const hHalf = aspect * vHalf;
  const centre = add(basis.eye, scale(basis.viewDir, depth));
  const corners: Vec3[] = [];
  for (const [sx, sy] of [
    [-1, -1],
    [1, -1],
    [1, 1],
    [-1, 1],
  ] as const) {
    corners.push(add(centre, add(scale(basis.right, sx * hHalf), scale(basis.up, sy * vHalf))));
  }
  return corners;
}
