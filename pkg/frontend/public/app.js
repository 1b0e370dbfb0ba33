// src/api.ts
var ApiError = class extends Error {
  constructor(status, message) {
    super(message);
    this.status = status;
    this.name = "ApiError";
  }
};
var ApiClient = class {
  constructor(base, fetchFn = fetch) {
    this.base = base;
    this.fetchFn = fetchFn;
  }
  queues = /* @__PURE__ */ new Map();
  async request(method, path, body) {
    const init = { method, headers: {} };
    if (body !== void 0) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(`${this.base}${path}`, init);
    if (!resp.ok) {
      let message = resp.statusText;
      try {
        const doc = await resp.json();
        if (typeof doc.error === "string") message = doc.error;
      } catch {
      }
      throw new ApiError(resp.status, message);
    }
    if (resp.status === 204) return void 0;
    return await resp.json();
  }
  /** Chain `fn` after any in-flight request for the same session. */
  enqueue(sid, fn) {
    const prev = this.queues.get(sid) ?? Promise.resolve();
    const run2 = prev.catch(() => void 0).then(fn);
    this.queues.set(
      sid,
      run2.catch(() => void 0)
    );
    return run2;
  }
  async createSession(bundle, tags) {
    const body = { bundle };
    if (tags !== void 0) body.tags = tags;
    const doc = await this.request("POST", "/api/sessions", body);
    return doc.session;
  }
  async getSession(sid) {
    const doc = await this.request("GET", `/api/sessions/${sid}`);
    return doc.session;
  }
  getCamera(sid) {
    return this.request("GET", `/api/sessions/${sid}/camera`);
  }
  getDance(sid) {
    return this.request("GET", `/api/sessions/${sid}/dance`);
  }
  tagOp(sid, op) {
    return this.enqueue(
      sid,
      () => this.request("PATCH", `/api/sessions/${sid}/tags`, op)
    );
  }
  setPose(sid, frame, pose, version, policy2) {
    const body = { pose };
    if (version !== void 0) body.version = version;
    if (policy2 !== void 0) body.policy = policy2;
    return this.enqueue(
      sid,
      () => this.request("PATCH", `/api/sessions/${sid}/keyframes/${frame}`, body)
    );
  }
  clearPose(sid, frame, version, policy2) {
    const query = new URLSearchParams();
    if (version !== void 0) query.set("version", String(version));
    if (policy2 !== void 0) query.set("policy", policy2);
    const suffix = query.size > 0 ? `?${query}` : "";
    return this.enqueue(
      sid,
      () => this.request(
        "DELETE",
        `/api/sessions/${sid}/keyframes/${frame}${suffix}`
      )
    );
  }
  resynthesize(sid, version) {
    const body = version !== void 0 ? { version } : {};
    return this.enqueue(
      sid,
      () => this.request("POST", `/api/sessions/${sid}/resynthesize`, body)
    );
  }
  deleteSession(sid) {
    return this.enqueue(sid, () => this.request("DELETE", `/api/sessions/${sid}`));
  }
};

// src/cameraMath.ts
var ASPECT = 16 / 9;
function cross(a, b) {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}
function dot(a, b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
function sub(a, b) {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}
function add(a, b) {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}
function scale(a, s) {
  return [a[0] * s, a[1] * s, a[2] * s];
}
function norm(a) {
  return Math.hypot(a[0], a[1], a[2]);
}
function matVec(m, v) {
  return [dot(m[0], v), dot(m[1], v), dot(m[2], v)];
}
function matMul(a, b) {
  const col = (j) => [b[0][j], b[1][j], b[2][j]];
  const rows = a.map((row) => {
    const c0 = col(0);
    const c1 = col(1);
    const c2 = col(2);
    return [dot(row, c0), dot(row, c1), dot(row, c2)];
  });
  return [rows[0], rows[1], rows[2]];
}
function rotationMatrix(rot) {
  const [pitch, yaw, roll] = rot;
  const cp = Math.cos(pitch);
  const sp = Math.sin(pitch);
  const cy = Math.cos(yaw);
  const sy = Math.sin(yaw);
  const cr = Math.cos(roll);
  const sr = Math.sin(roll);
  const rx = [
    [1, 0, 0],
    [0, cp, -sp],
    [0, sp, cp]
  ];
  const ry = [
    [cy, 0, sy],
    [0, 1, 0],
    [-sy, 0, cy]
  ];
  const rz = [
    [cr, -sr, 0],
    [sr, cr, 0],
    [0, 0, 1]
  ];
  return matMul(ry, matMul(rx, rz));
}
function polarToEye(pose) {
  const rmat = rotationMatrix(pose.rot);
  const viewDir = matVec(rmat, [0, 0, 1]);
  const up = matVec(rmat, [0, 1, 0]);
  const eye = sub(pose.rp, scale(viewDir, pose.dist));
  return { eye, viewDir, up, right: cross(up, viewDir), fov: pose.fov };
}
function frustumCorners(basis, depth, aspect = ASPECT) {
  const vHalf = Math.tan(basis.fov * Math.PI / 180 / 2) * depth;
  const hHalf = aspect * vHalf;
  const centre = add(basis.eye, scale(basis.viewDir, depth));
  const corners = [];
  for (const [sx, sy] of [
    [-1, -1],
    [1, -1],
    [1, 1],
    [-1, 1]
  ]) {
    corners.push(add(centre, add(scale(basis.right, sx * hHalf), scale(basis.up, sy * vHalf))));
  }
  return corners;
}

// src/curves.ts
var POSE_CHANNELS = [
  "rp.x",
  "rp.y",
  "rp.z",
  "rot.x",
  "rot.y",
  "rot.z",
  "dist",
  "fov"
];
var DERIVED_CHANNELS = ["eye.x", "eye.y", "eye.z"];
var ALL_CHANNELS = [...POSE_CHANNELS, ...DERIVED_CHANNELS];
function channelValue(pose, name) {
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
function buildCurves(camera, tags) {
  const n = camera.frames.length;
  const series = /* @__PURE__ */ new Map();
  for (const name of ALL_CHANNELS) series.set(name, new Float64Array(n));
  for (let t = 0; t < n; t++) {
    const pose = camera.frames[t];
    for (const name of POSE_CHANNELS) series.get(name)[t] = channelValue(pose, name);
    const eye = polarToEye(pose).eye;
    series.get("eye.x")[t] = eye[0];
    series.get("eye.y")[t] = eye[1];
    series.get("eye.z")[t] = eye[2];
  }
  for (const [name, values] of series) {
    if (values.length !== n) throw new Error(`series ${name} has length ${values.length}`);
  }
  return {
    nFrames: n,
    series,
    visible: /* @__PURE__ */ new Set(["dist", "fov", "eye.x", "eye.y", "eye.z"]),
    ticks: [...tags]
  };
}
function toggleChannel(model, name) {
  if (model.visible.has(name)) model.visible.delete(name);
  else model.visible.add(name);
}

// src/timeline.ts
var GAP_CAP = 60;
var ok = { ok: true };
var fail = (reason) => ({ ok: false, reason });
function makeTimeline(nFrames, fps, markers) {
  const sorted = [...markers].sort((a, b) => a - b);
  return { nFrames, fps, markers: sorted, selection: null, playhead: 0 };
}
function inRange(frame, nFrames) {
  if (!Number.isInteger(frame)) return fail(`frame ${frame} is not an integer`);
  if (frame < 0 || frame >= nFrames) return fail(`frame ${frame} is outside [0, ${nFrames})`);
  return ok;
}
function validateAdd(markers, frame, nFrames) {
  const bounds = inRange(frame, nFrames);
  if (!bounds.ok) return bounds;
  if (markers.includes(frame)) return fail(`frame ${frame} is already a keyframe`);
  return ok;
}
function validateRemove(markers, frame, nFrames) {
  const bounds = inRange(frame, nFrames);
  if (!bounds.ok) return bounds;
  const i = markers.indexOf(frame);
  if (i < 0) return fail(`frame ${frame} is not a keyframe`);
  if (frame === 0 || frame === nFrames - 1) return fail("the first and last keyframes are permanent");
  const merged = markers[i + 1] - markers[i - 1];
  if (merged > GAP_CAP) return fail(`removing it leaves a ${merged}-frame gap (cap ${GAP_CAP})`);
  return ok;
}
function validateMove(markers, from, to, nFrames) {
  const bounds = inRange(to, nFrames);
  if (!bounds.ok) return bounds;
  const i = markers.indexOf(from);
  if (i < 0) return fail(`frame ${from} is not a keyframe`);
  if (from === 0 || from === nFrames - 1) return fail("the first and last keyframes are permanent");
  if (to === from) return fail("marker did not move");
  if (markers.includes(to)) return fail(`frame ${to} is already a keyframe`);
  const prev = markers[i - 1];
  const next = markers[i + 1];
  if (to <= prev || to >= next) return fail("marker cannot cross its neighbours");
  if (to - prev > GAP_CAP) return fail(`gap ${to - prev} to the previous marker exceeds ${GAP_CAP}`);
  if (next - to > GAP_CAP) return fail(`gap ${next - to} to the next marker exceeds ${GAP_CAP}`);
  return ok;
}
function applySegments(frames, segments) {
  const out = [...frames];
  for (const seg of segments) {
    if (seg.end - seg.start !== seg.frames.length) {
      throw new Error(`segment [${seg.start}, ${seg.end}) carries ${seg.frames.length} frames`);
    }
    if (seg.start < 0 || seg.end > out.length) {
      throw new Error(`segment [${seg.start}, ${seg.end}) is outside the track`);
    }
    for (let i = 0; i < seg.frames.length; i++) out[seg.start + i] = seg.frames[i];
  }
  return out;
}

// src/types.ts
function poseFromRow(row) {
  if (row.length !== 8) throw new Error(`pose row must have 8 values, got ${row.length}`);
  return {
    rp: [row[0], row[1], row[2]],
    rot: [row[3], row[4], row[5]],
    dist: row[6],
    fov: row[7]
  };
}
function clonePose(pose) {
  return { rp: [...pose.rp], rot: [...pose.rot], dist: pose.dist, fov: pose.fov };
}

// src/undo.ts
var UndoStack = class {
  undos = [];
  redos = [];
  /** Record a command whose forward edit has already been applied. */
  push(cmd) {
    this.undos.push(cmd);
    this.redos = [];
  }
  get canUndo() {
    return this.undos.length > 0;
  }
  get canRedo() {
    return this.redos.length > 0;
  }
  async undo() {
    const cmd = this.undos.pop();
    if (!cmd) return null;
    try {
      const resp = await cmd.undo();
      this.redos.push(cmd);
      return resp;
    } catch (err) {
      this.undos.push(cmd);
      throw err;
    }
  }
  async redo() {
    const cmd = this.redos.pop();
    if (!cmd) return null;
    try {
      const resp = await cmd.redo();
      this.undos.push(cmd);
      return resp;
    } catch (err) {
      this.redos.push(cmd);
      throw err;
    }
  }
  clear() {
    this.undos = [];
    this.redos = [];
  }
};
function poseEditCommand(backend, sid, frame, next, prior) {
  const nextCopy = clonePose(next);
  const priorCopy = prior === null ? null : clonePose(prior);
  return {
    label: `pose @ ${frame}`,
    redo: () => backend.setPose(sid, frame, nextCopy),
    undo: () => priorCopy === null ? backend.clearPose(sid, frame) : backend.setPose(sid, frame, priorCopy)
  };
}
function addTagCommand(backend, sid, frame) {
  return {
    label: `add @ ${frame}`,
    redo: () => backend.tagOp(sid, { op: "add", frame }),
    undo: () => backend.tagOp(sid, { op: "remove", frame })
  };
}
function removeTagCommand(backend, sid, frame, droppedOverride) {
  const dropped = droppedOverride === null ? null : clonePose(droppedOverride);
  return {
    label: `remove @ ${frame}`,
    redo: () => backend.tagOp(sid, { op: "remove", frame }),
    undo: async () => {
      const resp = await backend.tagOp(sid, { op: "add", frame });
      if (dropped === null) return resp;
      return backend.setPose(sid, frame, dropped);
    }
  };
}
function moveTagCommand(backend, sid, from, to, policy2) {
  return {
    label: `move ${from} -> ${to}`,
    redo: () => backend.tagOp(sid, { op: "move", frame: from, to, policy: policy2 }),
    undo: () => backend.tagOp(sid, { op: "move", frame: to, to: from, policy: policy2 })
  };
}

// src/viewport.ts
function defaultOrbit(center = [0, 1, 0]) {
  return { center, radius: 10, azimuth: 0.6, elevation: 0.35 };
}
var OBSERVER_FOV = 50;
function observerBasis(state2) {
  const { center, radius, azimuth, elevation } = state2;
  const offset = [
    radius * Math.cos(elevation) * Math.sin(azimuth),
    radius * Math.sin(elevation),
    radius * Math.cos(elevation) * Math.cos(azimuth)
  ];
  const eye = add(center, offset);
  const viewRaw = sub(center, eye);
  const viewDir = scale(viewRaw, 1 / norm(viewRaw));
  const rightRaw = cross([0, 1, 0], viewDir);
  const rightLen = norm(rightRaw);
  const right = rightLen > 1e-9 ? scale(rightRaw, 1 / rightLen) : [1, 0, 0];
  const up = cross(viewDir, right);
  return { eye, viewDir, up, right, fov: OBSERVER_FOV };
}
function toScreen(basis, p, w, h) {
  const rel = sub(p, basis.eye);
  const z = dot(rel, basis.viewDir);
  if (z <= 1e-6) return null;
  const half = Math.tan(basis.fov * Math.PI / 180 / 2);
  const x = dot(rel, basis.right) / z / half;
  const y = dot(rel, basis.up) / z / half;
  return { x: w / 2 + x * h / 2, y: h / 2 - y * h / 2, depth: z };
}
function drawPolyline(ctx, basis, points, w, h, close) {
  ctx.beginPath();
  let started = false;
  let first = null;
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
function drawGrid(ctx, basis, center, w, h) {
  ctx.strokeStyle = "#2a2f3a";
  ctx.lineWidth = 1;
  const half = 4;
  for (let i = -half; i <= half; i++) {
    drawPolyline(
      ctx,
      basis,
      [
        [center[0] + i, 0, center[2] - half],
        [center[0] + i, 0, center[2] + half]
      ],
      w,
      h,
      false
    );
    drawPolyline(
      ctx,
      basis,
      [
        [center[0] - half, 0, center[2] + i],
        [center[0] + half, 0, center[2] + i]
      ],
      w,
      h,
      false
    );
  }
}
function renderViewport(ctx, w, h, orbit, joints, pose, hud) {
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
    ctx.strokeStyle = "#ff6d6d";
    drawPolyline(ctx, basis, [cam.eye, pose.rp], w, h, false);
    const d = 0.15;
    for (const axis of [0, 1, 2]) {
      const a = [...pose.rp];
      const b = [...pose.rp];
      a[axis] -= d;
      b[axis] += d;
      drawPolyline(ctx, basis, [a, b], w, h, false);
    }
  }
  ctx.fillStyle = "#d7dde8";
  ctx.font = "12px ui-monospace, monospace";
  ctx.fillText(hud, 10, 18);
}

// src/main.ts
var api = new ApiClient(new URLSearchParams(window.location.search).get("api") ?? "");
var state = {
  session: null,
  camera: [],
  dance: [],
  timeline: makeTimeline(1, 30, [0]),
  curves: null,
  orbit: defaultOrbit(),
  playing: false,
  drag: null,
  scrubbing: false
};
var undoStack = new UndoStack();
var $ = (id) => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};
var viewportCanvas = $("viewport");
var curvesCanvas = $("curves");
var timelineCanvas = $("timeline");
var statusEl = $("status");
var frameEl = $("frame-label");
var policySelect = $("policy");
var poseFields = ["rp-x", "rp-y", "rp-z", "rot-x", "rot-y", "rot-z", "dist", "fov"].map(
  (id) => $(`pose-${id}`)
);
function toast(message) {
  const el = $("toast");
  el.textContent = message;
  el.classList.add("show");
  window.setTimeout(() => el.classList.remove("show"), 2600);
}
function policy() {
  return policySelect.value === "local" ? "local" : "cascade";
}
function currentOverride(frame) {
  const row = state.session?.overrides[String(frame)];
  return row ? poseFromRow(row) : null;
}
function drawTimeline() {
  const ctx = timelineCanvas.getContext("2d");
  const w = timelineCanvas.width;
  const h = timelineCanvas.height;
  const n = state.timeline.nFrames;
  const toX = (f) => n <= 1 ? 0 : f / (n - 1) * (w - 16) + 8;
  ctx.fillStyle = "#1b1f27";
  ctx.fillRect(0, 0, w, h);
  ctx.strokeStyle = "#3a4152";
  ctx.beginPath();
  ctx.moveTo(8, h / 2);
  ctx.lineTo(w - 8, h / 2);
  ctx.stroke();
  for (const m of state.timeline.markers) {
    const shown = state.drag && state.drag.marker === m ? state.drag.preview : m;
    const x = toX(shown);
    ctx.fillStyle = state.timeline.selection === m ? "#ffd166" : currentOverride(m) ? "#ff6d6d" : "#8fd0ff";
    ctx.beginPath();
    ctx.moveTo(x, h / 2 - 9);
    ctx.lineTo(x - 6, h / 2 + 8);
    ctx.lineTo(x + 6, h / 2 + 8);
    ctx.closePath();
    ctx.fill();
  }
  const px = toX(state.timeline.playhead);
  ctx.strokeStyle = "#ffffff";
  ctx.beginPath();
  ctx.moveTo(px, 4);
  ctx.lineTo(px, h - 4);
  ctx.stroke();
}
var CHANNEL_COLORS = {
  "rp.x": "#e2777a",
  "rp.y": "#82ca9c",
  "rp.z": "#7aa6e2",
  "rot.x": "#c98fde",
  "rot.y": "#dec98f",
  "rot.z": "#8fdede",
  dist: "#ffb84d",
  fov: "#ff6d6d",
  "eye.x": "#f0a5a5",
  "eye.y": "#a5f0be",
  "eye.z": "#a5c4f0"
};
function drawCurves() {
  const ctx = curvesCanvas.getContext("2d");
  const w = curvesCanvas.width;
  const h = curvesCanvas.height;
  ctx.fillStyle = "#14171c";
  ctx.fillRect(0, 0, w, h);
  const model = state.curves;
  if (!model) return;
  const n = model.nFrames;
  const toX = (f) => n <= 1 ? 0 : f / (n - 1) * (w - 16) + 8;
  ctx.strokeStyle = "#2a2f3a";
  for (const tick2 of model.ticks) {
    ctx.beginPath();
    ctx.moveTo(toX(tick2), 0);
    ctx.lineTo(toX(tick2), h);
    ctx.stroke();
  }
  for (const name of ALL_CHANNELS) {
    if (!model.visible.has(name)) continue;
    const series = model.series.get(name);
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of series) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
    const span = hi - lo < 1e-9 ? 1 : hi - lo;
    ctx.strokeStyle = CHANNEL_COLORS[name];
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    for (let t = 0; t < n; t++) {
      const y = h - 8 - (series[t] - lo) / span * (h - 16);
      if (t === 0) ctx.moveTo(toX(t), y);
      else ctx.lineTo(toX(t), y);
    }
    ctx.stroke();
  }
  ctx.strokeStyle = "#ffffff";
  ctx.beginPath();
  ctx.moveTo(toX(state.timeline.playhead), 0);
  ctx.lineTo(toX(state.timeline.playhead), h);
  ctx.stroke();
}
function drawViewport() {
  const ctx = viewportCanvas.getContext("2d");
  const t = state.timeline.playhead;
  const joints = state.dance[t] ?? [];
  const pose = state.camera[t] ?? null;
  const version = state.session?.version ?? "-";
  const hud = `frame ${t}/${Math.max(0, state.timeline.nFrames - 1)}  v${version}` + (pose ? `  dist ${pose.dist.toFixed(2)}  fov ${pose.fov.toFixed(1)}` : "");
  renderViewport(ctx, viewportCanvas.width, viewportCanvas.height, state.orbit, joints, pose, hud);
}
function syncPoseEditor() {
  const t = state.timeline.playhead;
  const tagged = state.timeline.markers.includes(t);
  const pose = state.camera[t];
  $("pose-editor").disabled = !tagged || !pose;
  $("unpin").disabled = !tagged || currentOverride(t) === null;
  $("pose-hint").textContent = tagged ? currentOverride(t) ? "pinned" : "model-owned" : "select a keyframe to edit its pose";
  if (tagged && pose && document.activeElement?.id?.startsWith("pose-") !== true) {
    const row = [...pose.rp, ...pose.rot, pose.dist, pose.fov];
    poseFields.forEach((field, i) => {
      field.value = String(Number(row[i].toFixed(5)));
    });
  }
}
function redraw() {
  drawTimeline();
  drawCurves();
  drawViewport();
  syncPoseEditor();
  frameEl.textContent = `frame ${state.timeline.playhead}`;
  $("undo").disabled = !undoStack.canUndo;
  $("redo").disabled = !undoStack.canRedo;
}
function rebuildCurves() {
  if (!state.session) return;
  state.curves = buildCurves(
    { fps: state.session.fps, version: state.session.version, frames: state.camera },
    state.session.tags
  );
  const visible = state.curves.visible;
  document.querySelectorAll("#channels input").forEach((box) => {
    const name = box.dataset["channel"];
    if (box.checked) visible.add(name);
    else visible.delete(name);
  });
}
function applyMutation(resp) {
  state.session = resp.session;
  state.camera = applySegments(state.camera, resp.changed);
  state.timeline.markers = [...resp.session.tags];
  if (state.timeline.selection !== null && !state.timeline.markers.includes(state.timeline.selection)) {
    state.timeline.selection = null;
  }
  rebuildCurves();
  redraw();
}
async function refetchAll() {
  if (!state.session) return;
  const sid = state.session.session_id;
  const [session, camera, dance] = await Promise.all([
    api.getSession(sid),
    api.getCamera(sid),
    api.getDance(sid)
  ]);
  state.session = session;
  state.camera = camera.frames;
  state.dance = dance.joints;
  state.timeline = makeTimeline(session.n_frames, session.fps, session.tags);
  recenterOrbit();
  rebuildCurves();
  redraw();
}
function recenterOrbit() {
  const first = state.dance[0];
  if (!first || first.length === 0) return;
  const c = [0, 0, 0];
  for (const j of first) {
    c[0] += j[0];
    c[1] += j[1];
    c[2] += j[2];
  }
  state.orbit.center = [c[0] / first.length, c[1] / first.length, c[2] / first.length];
}
async function run(action) {
  try {
    return await action();
  } catch (err) {
    if (err instanceof ApiError) {
      toast(`${err.status}: ${err.message}`);
      if (err.status === 409) await refetchAll();
    } else {
      toast(String(err));
    }
    return null;
  }
}
function frameAt(canvas, clientX) {
  const rect = canvas.getBoundingClientRect();
  const x = (clientX - rect.left) / rect.width * canvas.width;
  const n = state.timeline.nFrames;
  const f = Math.round((x - 8) / (canvas.width - 16) * (n - 1));
  return Math.max(0, Math.min(n - 1, f));
}
timelineCanvas.addEventListener("mousedown", (ev) => {
  if (!state.session) return;
  const f = frameAt(timelineCanvas, ev.clientX);
  const near = state.timeline.markers.find((m) => Math.abs(m - f) <= Math.max(1, state.timeline.nFrames / 80));
  if (near !== void 0 && near !== 0 && near !== state.timeline.nFrames - 1) {
    state.timeline.selection = near;
    state.drag = { marker: near, preview: near };
  } else {
    state.timeline.selection = near ?? null;
    state.scrubbing = true;
    state.timeline.playhead = f;
  }
  redraw();
});
window.addEventListener("mousemove", (ev) => {
  if (state.drag) {
    state.drag.preview = frameAt(timelineCanvas, ev.clientX);
    redraw();
  } else if (state.scrubbing) {
    state.timeline.playhead = frameAt(timelineCanvas, ev.clientX);
    redraw();
  }
});
window.addEventListener("mouseup", () => {
  state.scrubbing = false;
  const drag = state.drag;
  state.drag = null;
  if (!drag || !state.session) {
    redraw();
    return;
  }
  const { marker, preview } = drag;
  if (preview === marker) {
    redraw();
    return;
  }
  const verdict = validateMove(state.timeline.markers, marker, preview, state.timeline.nFrames);
  if (!verdict.ok) {
    toast(verdict.reason);
    redraw();
    return;
  }
  const rollback = [...state.timeline.markers];
  state.timeline.markers = state.timeline.markers.map((m) => m === marker ? preview : m).sort((a, b) => a - b);
  state.timeline.selection = preview;
  redraw();
  const sid = state.session.session_id;
  void run(
    () => api.tagOp(sid, { op: "move", frame: marker, to: preview, version: state.session.version, policy: policy() })
  ).then((resp) => {
    if (resp) {
      applyMutation(resp);
      undoStack.push(moveTagCommand(api, sid, marker, preview, policy()));
    } else {
      state.timeline.markers = rollback;
      state.timeline.selection = marker;
    }
    redraw();
  });
});
timelineCanvas.addEventListener("dblclick", (ev) => {
  if (!state.session) return;
  const f = frameAt(timelineCanvas, ev.clientX);
  const verdict = validateAdd(state.timeline.markers, f, state.timeline.nFrames);
  if (!verdict.ok) {
    toast(verdict.reason);
    return;
  }
  const sid = state.session.session_id;
  void run(() => api.tagOp(sid, { op: "add", frame: f, version: state.session.version, policy: policy() })).then(
    (resp) => {
      if (resp) {
        applyMutation(resp);
        undoStack.push(addTagCommand(api, sid, f));
      }
    }
  );
});
$("remove-tag").addEventListener("click", () => {
  const f = state.timeline.selection;
  if (f === null || !state.session) return;
  const verdict = validateRemove(state.timeline.markers, f, state.timeline.nFrames);
  if (!verdict.ok) {
    toast(verdict.reason);
    return;
  }
  const dropped = currentOverride(f);
  const sid = state.session.session_id;
  void run(() => api.tagOp(sid, { op: "remove", frame: f, version: state.session.version, policy: policy() })).then(
    (resp) => {
      if (resp) {
        applyMutation(resp);
        undoStack.push(removeTagCommand(api, sid, f, dropped));
      }
    }
  );
});
$("apply-pose").addEventListener("click", () => {
  if (!state.session) return;
  const frame = state.timeline.playhead;
  const values = poseFields.map((field) => Number(field.value));
  if (values.some((v) => !Number.isFinite(v))) {
    toast("pose fields must be numbers");
    return;
  }
  const pose = {
    rp: [values[0], values[1], values[2]],
    rot: [values[3], values[4], values[5]],
    dist: values[6],
    fov: values[7]
  };
  const prior = currentOverride(frame);
  const sid = state.session.session_id;
  void run(() => api.setPose(sid, frame, pose, state.session.version, policy())).then((resp) => {
    if (resp) {
      applyMutation(resp);
      undoStack.push(poseEditCommand(api, sid, frame, clonePose(pose), prior));
    }
  });
});
$("unpin").addEventListener("click", () => {
  if (!state.session) return;
  const frame = state.timeline.playhead;
  const prior = currentOverride(frame);
  if (!prior) return;
  const sid = state.session.session_id;
  void run(() => api.clearPose(sid, frame, state.session.version, policy())).then((resp) => {
    if (resp) {
      applyMutation(resp);
      undoStack.push({
        label: `unpin @ ${frame}`,
        redo: () => api.clearPose(sid, frame),
        undo: () => api.setPose(sid, frame, prior)
      });
    }
  });
});
$("undo").addEventListener("click", () => {
  void run(() => undoStack.undo()).then((resp) => resp && applyMutation(resp));
});
$("redo").addEventListener("click", () => {
  void run(() => undoStack.redo()).then((resp) => resp && applyMutation(resp));
});
$("resynth").addEventListener("click", () => {
  if (!state.session) return;
  const sid = state.session.session_id;
  void run(() => api.resynthesize(sid, state.session.version)).then((resp) => resp && applyMutation(resp));
});
viewportCanvas.addEventListener("mousedown", (ev) => {
  const startX = ev.clientX;
  const startY = ev.clientY;
  const { azimuth, elevation } = state.orbit;
  const onMove = (mv) => {
    state.orbit.azimuth = azimuth + (mv.clientX - startX) * 0.01;
    state.orbit.elevation = Math.max(
      -1.4,
      Math.min(1.4, elevation + (mv.clientY - startY) * 0.01)
    );
    drawViewport();
  };
  const onUp = () => {
    window.removeEventListener("mousemove", onMove);
    window.removeEventListener("mouseup", onUp);
  };
  window.addEventListener("mousemove", onMove);
  window.addEventListener("mouseup", onUp);
});
var playStart = 0;
var playOrigin = 0;
function tick(now) {
  if (state.playing && state.session) {
    const fps = state.session.fps;
    const n = state.timeline.nFrames;
    const advanced = Math.floor((now - playStart) / 1e3 * fps);
    state.timeline.playhead = (playOrigin + advanced) % n;
    redraw();
  }
  window.requestAnimationFrame(tick);
}
$("play").addEventListener("click", () => {
  state.playing = !state.playing;
  $("play").textContent = state.playing ? "pause" : "play";
  if (state.playing) {
    playStart = performance.now();
    playOrigin = state.timeline.playhead;
  }
});
$("connect").addEventListener("click", () => {
  const bundle = $("bundle").value.trim();
  if (!bundle) {
    toast("enter a bundle name");
    return;
  }
  statusEl.textContent = "connecting...";
  void run(async () => {
    const session = await api.createSession(bundle);
    state.session = session;
    undoStack.clear();
    await refetchAll();
    statusEl.textContent = `session ${session.session_id} \xB7 ${session.n_frames} frames @ ${session.fps} fps`;
    return session;
  }).then((session) => {
    if (!session) statusEl.textContent = "not connected";
  });
});
function buildChannelToggles() {
  const host = $("channels");
  for (const name of ALL_CHANNELS) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.dataset["channel"] = name;
    box.checked = ["dist", "fov", "eye.x", "eye.y", "eye.z"].includes(name);
    box.addEventListener("change", () => {
      if (state.curves) toggleChannel(state.curves, name);
      drawCurves();
    });
    label.append(box, document.createTextNode(name));
    label.style.color = CHANNEL_COLORS[name];
    host.append(label);
  }
}
$("gap-cap").textContent = String(GAP_CAP);
buildChannelToggles();
window.requestAnimationFrame(tick);
redraw();
//# sourceMappingURL=app.js.map
