"""Dataset loading, serialization, stitching, and sliding-window extraction.

On-disk layout of one sequence bundle (a directory):

* ``meta.json``      -- name, fps, optional source song id and start frame
* ``music.ndf``      -- (T, 35) float32 features, binary array format
* ``dance.ndf``      -- (T, 60, 3) float32 joint positions (``dance.json``
                        with a nested ``joints`` list is accepted too)
* ``camera.json``    -- optional; dense ``frames`` form or sparse
                        ``keyframes`` form, densified on load
* ``tags.json``      -- optional; keyframe indices

The binary array format is magic ``NDF1``, a uint32 rank, rank uint32 dims,
then the float32 little-endian payload. Round trips are bit-exact.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from tweencam.audio_features import extract_music_features, load_wav
from tweencam.core import (
    CAMERA_DIM,
    DEFAULT_FPS,
    MUSIC_DIM,
    N_JOINTS,
    KeyframeTags,
    SequenceBundle,
)

MAGIC = b"NDF1"
SCHEMA_VERSION = 1

__all__ = [
    "Window",
    "DatasetSplit",
    "save_array",
    "load_array",
    "save_camera",
    "load_camera",
    "densify_keyframes",
    "save_tags",
    "load_tags",
    "save_bundle",
    "load_bundle",
    "stitch_adjacent",
    "make_windows",
    "pad_slice",
    "extract_music_features",
    "load_wav",
]


# ---------------------------------------------------------------------------
# binary arrays
# ---------------------------------------------------------------------------

def save_array(path, arr) -> None:
    """Write a float32 array: NDF1 magic, uint32 rank, dims, LE payload."""
    a = np.ascontiguousarray(arr, dtype=np.float32)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"refusing to save non-finite array to {path}")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", a.ndim))
        f.write(struct.pack(f"<{a.ndim}I", *a.shape))
        f.write(a.astype("<f4").tobytes())


def load_array(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        (rank,) = struct.unpack("<I", f.read(4))
        if rank > 8:
            raise ValueError(f"{path}: implausible rank {rank}")
        shape = struct.unpack(f"<{rank}I", f.read(4 * rank))
        payload = f.read()
    expected = 4 * int(np.prod(shape, dtype=np.int64))
    if len(payload) != expected:
        raise ValueError(f"{path}: payload is {len(payload)} bytes, expected {expected}")
    arr = np.frombuffer(payload, dtype="<f4").reshape(shape).astype(np.float32)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{path}: non-finite values")
    return arr


# ---------------------------------------------------------------------------
# camera and tag files
# ---------------------------------------------------------------------------

def pose_entry(row) -> dict:
    return {
        "rp": [float(v) for v in row[0:3]],
        "rot": [float(v) for v in row[3:6]],
        "dist": float(row[6]),
        "fov": float(row[7]),
    }


def entry_pose(entry) -> list[float]:
    return [*entry["rp"], *entry["rot"], entry["dist"], entry["fov"]]


def save_camera(path, camera, fps: int = DEFAULT_FPS) -> None:
    """Write a dense (T, 8) camera track as the JSON ``frames`` form."""
    cam = np.asarray(camera, dtype=np.float64)
    if cam.ndim != 2 or cam.shape[1] != CAMERA_DIM:
        raise ValueError(f"camera must be (T, {CAMERA_DIM}), got {cam.shape}")
    if not np.all(np.isfinite(cam)):
        raise ValueError("refusing to save non-finite camera track")
    doc = {"fps": int(fps), "frames": [pose_entry(row) for row in cam]}
    with open(path, "w") as f:
        json.dump(doc, f)


def densify_keyframes(entries: Sequence[dict], n_frames: int) -> np.ndarray:
    """Evaluate sparse camera keyframes into a dense (n_frames, 8) track.

    Each entry holds frame, rp, rot, dist, fov and optionally ``ramp``, the
    per-frame tween values for the gap to the next keyframe (length = gap,
    first value conventionally 0). Missing ramps fall back to a linear ramp.
    The pose is constant before the first and after the last keyframe.
    """
    if not entries:
        raise ValueError("camera keyframe list is empty")
    entries = sorted(entries, key=lambda e: e["frame"])
    frames = [int(e["frame"]) for e in entries]
    if frames[0] < 0 or frames[-1] >= n_frames:
        raise ValueError(f"keyframe frame outside [0, {n_frames})")
    if len(set(frames)) != len(frames):
        raise ValueError("duplicate camera keyframe frames")
    poses = np.array([entry_pose(e) for e in entries], dtype=np.float64)

    out = np.empty((n_frames, CAMERA_DIM), dtype=np.float64)
    out[: frames[0]] = poses[0]
    for i in range(len(entries) - 1):
        f1, f2 = frames[i], frames[i + 1]
        gap = f2 - f1
        ramp = entries[i].get("ramp")
        if ramp is None:
            rho = np.arange(gap, dtype=np.float64) / gap
        else:
            rho = np.asarray(ramp, dtype=np.float64)
            if rho.shape != (gap,):
                raise ValueError(f"ramp at frame {f1} must have {gap} values, got {rho.shape}")
        out[f1:f2] = poses[i] + rho[:, None] * (poses[i + 1] - poses[i])
    out[frames[-1] :] = poses[-1]
    if not np.all(np.isfinite(out)):
        raise ValueError("densified camera contains non-finite values")
    return out


def load_camera(path, n_frames: int | None = None) -> np.ndarray:
    """Read a camera JSON file (dense or keyframe form) as (T, 8) float64."""
    with open(path) as f:
        doc = json.load(f)
    if "frames" in doc:
        cam = np.array([entry_pose(e) for e in doc["frames"]], dtype=np.float64)
        if n_frames is not None and cam.shape[0] != n_frames:
            raise ValueError(f"{path}: camera has {cam.shape[0]} frames, expected {n_frames}")
    elif "keyframes" in doc:
        if n_frames is None:
            n_frames = max(int(e["frame"]) for e in doc["keyframes"]) + 1
        cam = densify_keyframes(doc["keyframes"], n_frames)
    else:
        raise ValueError(f"{path}: camera file needs a 'frames' or 'keyframes' field")
    if cam.ndim != 2 or cam.shape[1] != CAMERA_DIM:
        raise ValueError(f"{path}: camera rows must have {CAMERA_DIM} values")
    if not np.all(np.isfinite(cam)):
        raise ValueError(f"{path}: non-finite camera values")
    return cam


def save_tags(path, tags: KeyframeTags) -> None:
    doc = {"fps": tags.fps, "keyframes": [int(i) for i in tags.indices()]}
    with open(path, "w") as f:
        json.dump(doc, f)


def load_tags(path, n_frames: int) -> KeyframeTags:
    with open(path) as f:
        doc = json.load(f)
    return KeyframeTags.from_indices(n_frames, doc["keyframes"], fps=int(doc.get("fps", DEFAULT_FPS)))


def _load_dance(path: Path) -> np.ndarray:
    if path.suffix == ".json":
        with open(path) as f:
            doc = json.load(f)
        dance = np.asarray(doc["joints"], dtype=np.float32)
    else:
        dance = load_array(path)
    if dance.ndim != 3 or dance.shape[1:] != (N_JOINTS, 3):
        raise ValueError(f"{path}: dance must be (T, {N_JOINTS}, 3), got {dance.shape}")
    return dance


# ---------------------------------------------------------------------------
# bundles
# ---------------------------------------------------------------------------

def save_bundle(bundle: SequenceBundle, path) -> None:
    """Write a bundle directory; load_bundle(save_bundle(b)) is bit-exact."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "name": bundle.name,
        "fps": bundle.fps,
        "song": bundle.song,
        "start": bundle.start,
    }
    with open(root / "meta.json", "w") as f:
        json.dump(meta, f, indent=1, sort_keys=True)
    save_array(root / "music.ndf", bundle.music)
    save_array(root / "dance.ndf", bundle.dance)
    if bundle.camera is not None:
        save_camera(root / "camera.json", bundle.camera, fps=bundle.fps)
    if bundle.tags is not None:
        save_tags(root / "tags.json", bundle.tags)


def load_bundle(path) -> SequenceBundle:
    root = Path(path)
    with open(root / "meta.json") as f:
        meta = json.load(f)
    music = load_array(root / "music.ndf")
    dance_path = root / "dance.ndf"
    if not dance_path.exists():
        dance_path = root / "dance.json"
    dance = _load_dance(dance_path)
    t = music.shape[0]
    if dance.shape[0] != t:
        raise ValueError(f"{root}: music has {t} frames but dance has {dance.shape[0]}")
    camera = None
    if (root / "camera.json").exists():
        camera = load_camera(root / "camera.json", n_frames=t)
    tags = None
    if (root / "tags.json").exists():
        tags = load_tags(root / "tags.json", n_frames=t)
    return SequenceBundle(
        music=music,
        dance=dance,
        camera=camera,
        tags=tags,
        name=meta.get("name", root.name),
        fps=int(meta.get("fps", DEFAULT_FPS)),
        song=meta.get("song"),
        start=meta.get("start"),
    )


def stitch_adjacent(pieces: Sequence[SequenceBundle]) -> list[SequenceBundle]:
    """Concatenate pieces that are contiguous in their source song.

    Pieces without song/start identity pass through untouched. Tags are
    re-canonicalized after joining; camera/tags survive only if every piece
    in the joined run carries them. Overlaps are an error.
    """
    anchored = [p for p in pieces if p.song is not None and p.start is not None]
    floating = [p for p in pieces if p.song is None or p.start is None]

    by_song: dict[str, list[SequenceBundle]] = {}
    for p in anchored:
        by_song.setdefault(p.song, []).append(p)

    out: list[SequenceBundle] = []
    for song in sorted(by_song):
        group = sorted(by_song[song], key=lambda p: p.start)
        run = [group[0]]
        for p in group[1:]:
            end = run[-1].start + run[-1].n_frames
            if p.start < end:
                raise ValueError(f"song {song}: piece at {p.start} overlaps one ending at {end}")
            if p.start == end:
                run.append(p)
            else:
                out.append(_join_run(run))
                run = [p]
        out.append(_join_run(run))
    out.extend(floating)
    return out


def _join_run(run: list[SequenceBundle]) -> SequenceBundle:
    if len(run) == 1:
        return run[0]
    music = np.concatenate([p.music for p in run])
    dance = np.concatenate([p.dance for p in run])
    camera = None
    if all(p.camera is not None for p in run):
        camera = np.concatenate([p.camera for p in run])
    tags = None
    if all(p.tags is not None for p in run):
        joined = np.concatenate([p.tags.tags for p in run])
        tags = KeyframeTags(tags=joined, fps=run[0].fps).canonicalized()
    return SequenceBundle(
        music=music,
        dance=dance,
        camera=camera,
        tags=tags,
        name="+".join(p.name for p in run),
        fps=run[0].fps,
        song=run[0].song,
        start=run[0].start,
    )


# ---------------------------------------------------------------------------
# windows and splits
# ---------------------------------------------------------------------------

@dataclass
class Window:
    """One sliding-window slice: h history frames then w future frames.

    Music and dance carry real data over the whole span (zero-padded outside
    the sequence); tag and camera context are real over the history half and
    always zero over the future half, so models can never read the targets.
    ``target_tags`` holds the true future tags for training; ``future_valid``
    counts how many future positions fall inside the sequence.
    """

    t: int
    h: int
    w: int
    music_ctx: np.ndarray
    dance_ctx: np.ndarray
    tag_ctx: np.ndarray
    camera_ctx: np.ndarray
    target_tags: np.ndarray
    future_valid: int


def pad_slice(arr: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """arr[lo:hi] with zeros where the range leaves [0, len(arr))."""
    out = np.zeros((hi - lo, *arr.shape[1:]), dtype=arr.dtype)
    a, b = max(lo, 0), min(hi, arr.shape[0])
    if a < b:
        out[a - lo : b - lo] = arr[a:b]
    return out


def make_windows(
    bundle: SequenceBundle,
    h: int = 60,
    w: int = 60,
    stride: int | None = None,
) -> Iterator[Window]:
    """Yield windows at t = 0, stride, 2*stride, ... covering the sequence.

    With stride = w (the default) the future halves tile the timeline, so
    every frame is targeted exactly once.
    """
    if stride is None:
        stride = w
    if h <= 0 or w <= 0 or stride <= 0:
        raise ValueError("h, w, stride must be positive")
    t_total = bundle.n_frames
    tags = bundle.tags.tags if bundle.tags is not None else np.zeros(t_total, np.uint8)
    camera = bundle.camera if bundle.camera is not None else np.zeros((t_total, CAMERA_DIM))
    for t in range(0, t_total, stride):
        tag_ctx = np.zeros(h + w, dtype=np.float32)
        tag_ctx[:h] = pad_slice(tags.astype(np.float32), t - h, t)
        camera_ctx = np.zeros((h + w, CAMERA_DIM), dtype=np.float64)
        camera_ctx[:h] = pad_slice(camera, t - h, t)
        yield Window(
            t=t,
            h=h,
            w=w,
            music_ctx=pad_slice(bundle.music, t - h, t + w),
            dance_ctx=pad_slice(bundle.dance, t - h, t + w),
            tag_ctx=tag_ctx,
            camera_ctx=camera_ctx,
            target_tags=pad_slice(tags.astype(np.float32), t, t + w),
            future_valid=min(w, t_total - t),
        )


@dataclass
class DatasetSplit:
    """A named collection of pieces playing one role (train or test)."""

    pieces: list[SequenceBundle] = field(default_factory=list)
    role: str = "train"

    def __post_init__(self):
        if self.role not in ("train", "test"):
            raise ValueError(f"role must be 'train' or 'test', got {self.role!r}")

    def validate(self) -> list[str]:
        """Length sanity warnings; test pieces should run 17 to 35 seconds."""
        warnings = []
        for p in self.pieces:
            if self.role == "test":
                lo, hi = 17 * p.fps, 35 * p.fps
                if not lo <= p.n_frames <= hi:
                    warnings.append(
                        f"{p.name}: {p.n_frames} frames outside [{lo}, {hi}] for a test piece"
                    )
        return warnings
