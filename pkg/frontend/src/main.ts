/** Editor wiring: one session against the local service, with a timeline,
 * curve panel, 3D preview, pose editor, and undo. All state below is either
 * the latest service response or a transient gesture (drag preview, playhead),
 * so reloading the page rebuilds the identical view from the GET endpoints. */

import { ApiClient, ApiError } from "./api";
import { buildCurves, toggleChannel, ALL_CHANNELS, type CurvePanelModel, type ChannelName } from "./curves";
import {
  GAP_CAP,
  applySegments,
  makeTimeline,
  validateAdd,
  validateMove,
  validateRemove,
  type TimelineModel,
} from "./timeline";
import { clonePose, poseFromRow, type MutationResponse, type Policy, type Pose, type SessionInfo, type Vec3 } from "./types";
import {
  UndoStack,
  addTagCommand,
  moveTagCommand,
  poseEditCommand,
  removeTagCommand,
} from "./undo";
import { defaultOrbit, renderViewport, type OrbitState } from "./viewport";

// Same-origin by default (the dev server proxies /api); ?api=<url> overrides,
// which works cross-origin because the service allows it.
const api = new ApiClient(new URLSearchParams(window.location.search).get("api") ?? "");

interface AppState {
  session: SessionInfo | null;
  camera: Pose[];
  dance: Vec3[][];
  timeline: TimelineModel;
  curves: CurvePanelModel | null;
  orbit: OrbitState;
  playing: boolean;
  drag: { marker: number; preview: number } | null;
  scrubbing: boolean;
}

const state: AppState = {
  session: null,
  camera: [],
  dance: [],
  timeline: makeTimeline(1, 30, [0]),
  curves: null,
  orbit: defaultOrbit(),
  playing: false,
  drag: null,
  scrubbing: false,
};
const undoStack = new UndoStack();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const viewportCanvas = $<HTMLCanvasElement>("viewport");
const curvesCanvas = $<HTMLCanvasElement>("curves");
const timelineCanvas = $<HTMLCanvasElement>("timeline");
const statusEl = $<HTMLSpanElement>("status");
const frameEl = $<HTMLSpanElement>("frame-label");
const policySelect = $<HTMLSelectElement>("policy");
const poseFields = ["rp-x", "rp-y", "rp-z", "rot-x", "rot-y", "rot-z", "dist", "fov"].map((id) =>
  $<HTMLInputElement>(`pose-${id}`),
);

function toast(message: string): void {
  const el = $<HTMLDivElement>("toast");
  el.textContent = message;
  el.classList.add("show");
  window.setTimeout(() => el.classList.remove("show"), 2600);
}

function policy(): Policy {
  return policySelect.value === "local" ? "local" : "cascade";
}

function currentOverride(frame: number): Pose | null {
  const row = state.session?.overrides[String(frame)];
  return row ? poseFromRow(row) : null;
}

// ---------------------------------------------------------------- rendering

function drawTimeline(): void {
  const ctx = timelineCanvas.getContext("2d")!;
  const w = timelineCanvas.width;
  const h = timelineCanvas.height;
  const n = state.timeline.nFrames;
  const toX = (f: number): number => (n <= 1 ? 0 : (f / (n - 1)) * (w - 16) + 8);
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
    ctx.fillStyle =
      state.timeline.selection === m ? "#ffd166" : currentOverride(m) ? "#ff6d6d" : "#8fd0ff";
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

const CHANNEL_COLORS: Record<ChannelName, string> = {
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
  "eye.z": "#a5c4f0",
};

function drawCurves(): void {
  const ctx = curvesCanvas.getContext("2d")!;
  const w = curvesCanvas.width;
  const h = curvesCanvas.height;
  ctx.fillStyle = "#14171c";
  ctx.fillRect(0, 0, w, h);
  const model = state.curves;
  if (!model) return;
  const n = model.nFrames;
  const toX = (f: number): number => (n <= 1 ? 0 : (f / (n - 1)) * (w - 16) + 8);
  ctx.strokeStyle = "#2a2f3a";
  for (const tick of model.ticks) {
    ctx.beginPath();
    ctx.moveTo(toX(tick), 0);
    ctx.lineTo(toX(tick), h);
    ctx.stroke();
  }
  for (const name of ALL_CHANNELS) {
    if (!model.visible.has(name)) continue;
    const series = model.series.get(name)!;
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
      const y = h - 8 - ((series[t]! - lo) / span) * (h - 16);
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

function drawViewport(): void {
  const ctx = viewportCanvas.getContext("2d")!;
  const t = state.timeline.playhead;
  const joints = state.dance[t] ?? [];
  const pose = state.camera[t] ?? null;
  const version = state.session?.version ?? "-";
  const hud = `frame ${t}/${Math.max(0, state.timeline.nFrames - 1)}  v${version}` +
    (pose ? `  dist ${pose.dist.toFixed(2)}  fov ${pose.fov.toFixed(1)}` : "");
  renderViewport(ctx, viewportCanvas.width, viewportCanvas.height, state.orbit, joints, pose, hud);
}

function syncPoseEditor(): void {
  const t = state.timeline.playhead;
  const tagged = state.timeline.markers.includes(t);
  const pose = state.camera[t];
  $<HTMLFieldSetElement>("pose-editor").disabled = !tagged || !pose;
  $<HTMLButtonElement>("unpin").disabled = !tagged || currentOverride(t) === null;
  $<HTMLSpanElement>("pose-hint").textContent = tagged
    ? currentOverride(t)
      ? "pinned"
      : "model-owned"
    : "select a keyframe to edit its pose";
  if (tagged && pose && document.activeElement?.id?.startsWith("pose-") !== true) {
    const row = [...pose.rp, ...pose.rot, pose.dist, pose.fov];
    poseFields.forEach((field, i) => {
      field.value = String(Number(row[i]!.toFixed(5)));
    });
  }
}

function redraw(): void {
  drawTimeline();
  drawCurves();
  drawViewport();
  syncPoseEditor();
  frameEl.textContent = `frame ${state.timeline.playhead}`;
  $<HTMLButtonElement>("undo").disabled = !undoStack.canUndo;
  $<HTMLButtonElement>("redo").disabled = !undoStack.canRedo;
}

// ------------------------------------------------------------ state updates

function rebuildCurves(): void {
  if (!state.session) return;
  state.curves = buildCurves(
    { fps: state.session.fps, version: state.session.version, frames: state.camera },
    state.session.tags,
  );
  const visible = state.curves.visible;
  document.querySelectorAll<HTMLInputElement>("#channels input").forEach((box) => {
    const name = box.dataset["channel"] as ChannelName;
    if (box.checked) visible.add(name);
    else visible.delete(name);
  });
}

function applyMutation(resp: MutationResponse): void {
  state.session = resp.session;
  state.camera = applySegments(state.camera, resp.changed);
  state.timeline.markers = [...resp.session.tags];
  if (state.timeline.selection !== null && !state.timeline.markers.includes(state.timeline.selection)) {
    state.timeline.selection = null;
  }
  rebuildCurves();
  redraw();
}

async function refetchAll(): Promise<void> {
  if (!state.session) return;
  const sid = state.session.session_id;
  const [session, camera, dance] = await Promise.all([
    api.getSession(sid),
    api.getCamera(sid),
    api.getDance(sid),
  ]);
  state.session = session;
  state.camera = camera.frames;
  state.dance = dance.joints as Vec3[][];
  state.timeline = makeTimeline(session.n_frames, session.fps, session.tags);
  recenterOrbit();
  rebuildCurves();
  redraw();
}

function recenterOrbit(): void {
  const first = state.dance[0];
  if (!first || first.length === 0) return;
  const c: Vec3 = [0, 0, 0];
  for (const j of first) {
    c[0] += j[0];
    c[1] += j[1];
    c[2] += j[2];
  }
  state.orbit.center = [c[0] / first.length, c[1] / first.length, c[2] / first.length];
}

async function run<T>(action: () => Promise<T>): Promise<T | null> {
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

// ----------------------------------------------------------------- gestures

function frameAt(canvas: HTMLCanvasElement, clientX: number): number {
  const rect = canvas.getBoundingClientRect();
  const x = ((clientX - rect.left) / rect.width) * canvas.width;
  const n = state.timeline.nFrames;
  const f = Math.round(((x - 8) / (canvas.width - 16)) * (n - 1));
  return Math.max(0, Math.min(n - 1, f));
}

timelineCanvas.addEventListener("mousedown", (ev) => {
  if (!state.session) return;
  const f = frameAt(timelineCanvas, ev.clientX);
  const near = state.timeline.markers.find((m) => Math.abs(m - f) <= Math.max(1, state.timeline.nFrames / 80));
  if (near !== undefined && near !== 0 && near !== state.timeline.nFrames - 1) {
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
  // Optimistic: show the marker at its destination while the request runs.
  const rollback = [...state.timeline.markers];
  state.timeline.markers = state.timeline.markers.map((m) => (m === marker ? preview : m)).sort((a, b) => a - b);
  state.timeline.selection = preview;
  redraw();
  const sid = state.session.session_id;
  void run(() =>
    api.tagOp(sid, { op: "move", frame: marker, to: preview, version: state.session!.version, policy: policy() }),
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
  void run(() => api.tagOp(sid, { op: "add", frame: f, version: state.session!.version, policy: policy() })).then(
    (resp) => {
      if (resp) {
        applyMutation(resp);
        undoStack.push(addTagCommand(api, sid, f));
      }
    },
  );
});

$<HTMLButtonElement>("remove-tag").addEventListener("click", () => {
  const f = state.timeline.selection;
  if (f === null || !state.session) return;
  const verdict = validateRemove(state.timeline.markers, f, state.timeline.nFrames);
  if (!verdict.ok) {
    toast(verdict.reason);
    return;
  }
  const dropped = currentOverride(f);
  const sid = state.session.session_id;
  void run(() => api.tagOp(sid, { op: "remove", frame: f, version: state.session!.version, policy: policy() })).then(
    (resp) => {
      if (resp) {
        applyMutation(resp);
        undoStack.push(removeTagCommand(api, sid, f, dropped));
      }
    },
  );
});

$<HTMLButtonElement>("apply-pose").addEventListener("click", () => {
  if (!state.session) return;
  const frame = state.timeline.playhead;
  const values = poseFields.map((field) => Number(field.value));
  if (values.some((v) => !Number.isFinite(v))) {
    toast("pose fields must be numbers");
    return;
  }
  const pose: Pose = {
    rp: [values[0]!, values[1]!, values[2]!],
    rot: [values[3]!, values[4]!, values[5]!],
    dist: values[6]!,
    fov: values[7]!,
  };
  const prior = currentOverride(frame);
  const sid = state.session.session_id;
  void run(() => api.setPose(sid, frame, pose, state.session!.version, policy())).then((resp) => {
    if (resp) {
      applyMutation(resp);
      undoStack.push(poseEditCommand(api, sid, frame, clonePose(pose), prior));
    }
  });
});

$<HTMLButtonElement>("unpin").addEventListener("click", () => {
  if (!state.session) return;
  const frame = state.timeline.playhead;
  const prior = currentOverride(frame);
  if (!prior) return;
  const sid = state.session.session_id;
  void run(() => api.clearPose(sid, frame, state.session!.version, policy())).then((resp) => {
    if (resp) {
      applyMutation(resp);
      undoStack.push({
        label: `unpin @ ${frame}`,
        redo: () => api.clearPose(sid, frame),
        undo: () => api.setPose(sid, frame, prior),
      });
    }
  });
});

$<HTMLButtonElement>("undo").addEventListener("click", () => {
  void run(() => undoStack.undo()).then((resp) => resp && applyMutation(resp));
});
$<HTMLButtonElement>("redo").addEventListener("click", () => {
  void run(() => undoStack.redo()).then((resp) => resp && applyMutation(resp));
});
$<HTMLButtonElement>("resynth").addEventListener("click", () => {
  if (!state.session) return;
  const sid = state.session.session_id;
  void run(() => api.resynthesize(sid, state.session!.version)).then((resp) => resp && applyMutation(resp));
});

viewportCanvas.addEventListener("mousedown", (ev) => {
  const startX = ev.clientX;
  const startY = ev.clientY;
  const { azimuth, elevation } = state.orbit;
  const onMove = (mv: MouseEvent): void => {
    state.orbit.azimuth = azimuth + (mv.clientX - startX) * 0.01;
    state.orbit.elevation = Math.max(
      -1.4,
      Math.min(1.4, elevation + (mv.clientY - startY) * 0.01),
    );
    drawViewport();
  };
  const onUp = (): void => {
    window.removeEventListener("mousemove", onMove);
    window.removeEventListener("mouseup", onUp);
  };
  window.addEventListener("mousemove", onMove);
  window.addEventListener("mouseup", onUp);
});

// ----------------------------------------------------------------- playback

let playStart = 0;
let playOrigin = 0;

function tick(now: number): void {
  if (state.playing && state.session) {
    const fps = state.session.fps;
    const n = state.timeline.nFrames;
    const advanced = Math.floor(((now - playStart) / 1000) * fps);
    state.timeline.playhead = (playOrigin + advanced) % n;
    redraw();
  }
  window.requestAnimationFrame(tick);
}

$<HTMLButtonElement>("play").addEventListener("click", () => {
  state.playing = !state.playing;
  $<HTMLButtonElement>("play").textContent = state.playing ? "pause" : "play";
  if (state.playing) {
    playStart = performance.now();
    playOrigin = state.timeline.playhead;
  }
});

// ------------------------------------------------------------------ session

$<HTMLButtonElement>("connect").addEventListener("click", () => {
  const bundle = $<HTMLInputElement>("bundle").value.trim();
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
    statusEl.textContent = `session ${session.session_id} · ${session.n_frames} frames @ ${session.fps} fps`;
    return session;
  }).then((session) => {
    if (!session) statusEl.textContent = "not connected";
  });
});

function buildChannelToggles(): void {
  const host = $<HTMLDivElement>("channels");
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

$<HTMLSpanElement>("gap-cap").textContent = String(GAP_CAP);
buildChannelToggles();
window.requestAnimationFrame(tick);
redraw();
