"""Domain types and camera geometry for keyframe-based dance camera synthesis.

The camera state is the 8-channel MMD-style polar parameterization: a world
reference point ``rp`` the camera looks at, rotation angles ``rot`` (pitch
about x, yaw about y, roll about z, radians), the camera-to-reference
distance ``dist``, and the vertical field of view ``fov`` in degrees.

Conventions applied consistently to data import, losses, metrics, and
rendering:

* rotation order ``R = R_y(yaw) @ R_x(pitch) @ R_z(roll)``,
* camera forward axis ``R @ (0, 0, 1)``, up axis ``R @ (0, 1, 0)``,
  right axis ``up x forward``,
* the eye sits behind the reference point, ``eye = rp - dist * forward``,
* the view frustum has a 16:9 aspect ratio unless stated otherwise,
* rotation channels are plain unwrapped scalars; interpolation blends them
  numerically and never wraps (animation curves are authored continuously).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

N_JOINTS = 60
MUSIC_DIM = 35
CAMERA_DIM = 8
DEFAULT_FPS = 30
DEFAULT_ASPECT = 16.0 / 9.0
#: sigmoid steepness (per radian of angular margin) of the soft visibility mask
VISIBILITY_SHARPNESS = 20.0
#: keyframe intervals longer than this are split with a fixed stride
MAX_INTERVAL = 60


class InvalidPoseError(ValueError):
    """Camera pose with non-finite or out-of-range components."""


def _as_vec(value, n: int, name: str) -> np.ndarray:
    v = np.asarray(value, dtype=np.float64).reshape(-1)
    if v.shape != (n,):
        raise InvalidPoseError(f"{name} must have {n} components, got shape {v.shape}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class CameraPose:
    """One polar camera state: rp (3), rot (3), dist, fov -- 8 scalars."""

    rp: np.ndarray
    rot: np.ndarray
    dist: float
    fov: float

    def __post_init__(self):
        object.__setattr__(self, "rp", _as_vec(self.rp, 3, "rp"))
        object.__setattr__(self, "rot", _as_vec(self.rot, 3, "rot"))
        object.__setattr__(self, "dist", float(self.dist))
        object.__setattr__(self, "fov", float(self.fov))
        if not np.all(np.isfinite(self.as_array())):
            raise InvalidPoseError("pose components must be finite")
        if self.dist < 0.0:
            raise InvalidPoseError(f"dist must be >= 0, got {self.dist}")
        if not 0.0 < self.fov < 180.0:
            raise InvalidPoseError(f"fov must lie in (0, 180), got {self.fov}")

    def as_array(self) -> np.ndarray:
        """The pose as a fresh float64 vector [rp, rot, dist, fov]."""
        return np.concatenate([self.rp, self.rot, [self.dist, self.fov]])

    @classmethod
    def from_array(cls, arr) -> "CameraPose":
        a = np.asarray(arr, dtype=np.float64).reshape(-1)
        if a.shape != (CAMERA_DIM,):
            raise InvalidPoseError(f"camera vector must have {CAMERA_DIM} entries, got {a.shape}")
        return cls(rp=a[0:3], rot=a[3:6], dist=a[6], fov=a[7])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CameraPose):
            return NotImplemented
        return bool(np.array_equal(self.as_array(), other.as_array()))

    def __repr__(self) -> str:
        rp = ", ".join(f"{v:.4g}" for v in self.rp)
        rot = ", ".join(f"{v:.4g}" for v in self.rot)
        return f"CameraPose(rp=({rp}), rot=({rot}), dist={self.dist:.4g}, fov={self.fov:.4g})"


@dataclass(frozen=True, eq=False)
class CameraEye:
    """Cartesian form of a camera pose: eye position, unit view/up axes, fov."""

    eye: np.ndarray
    view_dir: np.ndarray
    up: np.ndarray
    fov: float

    def __post_init__(self):
        object.__setattr__(self, "eye", _as_vec(self.eye, 3, "eye"))
        object.__setattr__(self, "view_dir", _as_vec(self.view_dir, 3, "view_dir"))
        object.__setattr__(self, "up", _as_vec(self.up, 3, "up"))
        object.__setattr__(self, "fov", float(self.fov))
        if abs(np.linalg.norm(self.view_dir) - 1.0) > 1e-6:
            raise InvalidPoseError("view_dir must be a unit vector")
        if abs(np.linalg.norm(self.up) - 1.0) > 1e-6:
            raise InvalidPoseError("up must be a unit vector")
        if abs(float(self.view_dir @ self.up)) > 1e-6:
            raise InvalidPoseError("view_dir and up must be orthogonal")

    @property
    def right(self) -> np.ndarray:
        return np.cross(self.up, self.view_dir)


@dataclass(frozen=True, eq=False)
class DancePoseFrame:
    """Global positions of the 60 skeleton joints for one frame."""

    joints: np.ndarray

    def __post_init__(self):
        j = np.asarray(self.joints, dtype=np.float64)
        if j.shape != (N_JOINTS, 3):
            raise ValueError(f"joints must have shape ({N_JOINTS}, 3), got {j.shape}")
        if not np.all(np.isfinite(j)):
            raise ValueError("joint positions must be finite")
        j.setflags(write=False)
        object.__setattr__(self, "joints", j)


@dataclass(frozen=True, eq=False)
class MusicFeatureFrame:
    """One frame of the 35-d acoustic feature vector."""

    feats: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.feats, dtype=np.float64).reshape(-1)
        if f.shape != (MUSIC_DIM,):
            raise ValueError(f"feats must have {MUSIC_DIM} entries, got {f.shape}")
        if not np.all(np.isfinite(f)):
            raise ValueError("features must be finite")
        f.setflags(write=False)
        object.__setattr__(self, "feats", f)


@dataclass
class KeyframeTags:
    """Per-frame binary keyframe markers for a T-frame timeline."""

    tags: np.ndarray
    fps: int = DEFAULT_FPS

    def __post_init__(self):
        t = np.asarray(self.tags)
        if t.ndim != 1 or len(t) == 0:
            raise ValueError("tags must be a non-empty 1-d array")
        if not np.all(np.isin(t, (0, 1))):
            raise ValueError("tags must contain only 0 and 1")
        self.tags = t.astype(np.uint8)
        self.fps = int(self.fps)

    def __len__(self) -> int:
        return len(self.tags)

    @classmethod
    def from_indices(cls, n_frames: int, indices: Iterable[int], fps: int = DEFAULT_FPS) -> "KeyframeTags":
        tags = np.zeros(n_frames, dtype=np.uint8)
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=int)
        if len(idx) and (idx[0] < 0 or idx[-1] >= n_frames):
            raise ValueError(f"keyframe index outside [0, {n_frames})")
        tags[idx] = 1
        return cls(tags=tags, fps=fps)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.tags)

    def canonicalized(self) -> "KeyframeTags":
        """Copy with forced keyframes at both ends of the timeline."""
        tags = self.tags.copy()
        tags[0] = 1
        tags[-1] = 1
        return KeyframeTags(tags=tags, fps=self.fps)

    def is_canonical(self) -> bool:
        return bool(self.tags[0] == 1 and self.tags[-1] == 1)

    def gaps(self) -> np.ndarray:
        """Frame gaps between consecutive keyframes."""
        return np.diff(self.indices())


@dataclass(frozen=True, eq=False)
class JointMask:
    """Per-joint soft visibility in [0, 1]; ``hard`` thresholds at 0.5."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=np.float64).reshape(-1)
        if np.any(m < 0.0) or np.any(m > 1.0):
            raise ValueError("mask values must lie in [0, 1]")
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def hard(self) -> np.ndarray:
        return self.mask >= 0.5


@dataclass
class SequenceBundle:
    """Aligned music / dance / (optional) camera / (optional) tag streams.

    ``song`` and ``start`` identify where the piece sits in its source song
    (frame offset) so contiguous pieces can be stitched back together.
    """

    music: np.ndarray
    dance: np.ndarray
    camera: np.ndarray | None = None
    tags: KeyframeTags | None = None
    name: str = ""
    fps: int = DEFAULT_FPS
    song: str | None = None
    start: int | None = None

    def __post_init__(self):
        self.music = np.asarray(self.music, dtype=np.float32)
        self.dance = np.asarray(self.dance, dtype=np.float32)
        if self.music.ndim != 2 or self.music.shape[1] != MUSIC_DIM:
            raise ValueError(f"music must be (T, {MUSIC_DIM}), got {self.music.shape}")
        if self.dance.ndim != 3 or self.dance.shape[1:] != (N_JOINTS, 3):
            raise ValueError(f"dance must be (T, {N_JOINTS}, 3), got {self.dance.shape}")
        t = self.music.shape[0]
        if self.dance.shape[0] != t:
            raise ValueError(f"music has {t} frames but dance has {self.dance.shape[0]}")
        if self.camera is not None:
            self.camera = np.asarray(self.camera, dtype=np.float64)
            if self.camera.shape != (t, CAMERA_DIM):
                raise ValueError(f"camera must be ({t}, {CAMERA_DIM}), got {self.camera.shape}")
            if not np.all(np.isfinite(self.camera)):
                raise ValueError("camera stream contains non-finite values")
        if self.tags is not None and len(self.tags) != t:
            raise ValueError(f"tags length {len(self.tags)} != {t} frames")
        if not np.all(np.isfinite(self.music)) or not np.all(np.isfinite(self.dance)):
            raise ValueError("music/dance streams contain non-finite values")

    @property
    def n_frames(self) -> int:
        return self.music.shape[0]

    def camera_pose(self, frame: int) -> CameraPose:
        if self.camera is None:
            raise ValueError("bundle has no camera stream")
        return CameraPose.from_array(self.camera[frame])


# ---------------------------------------------------------------------------
# camera geometry
# ---------------------------------------------------------------------------

_FORWARD0 = np.array([0.0, 0.0, 1.0])
_UP0 = np.array([0.0, 1.0, 0.0])


def rotation_matrix(rot) -> np.ndarray:
    """World rotation ``R_y(yaw) @ R_x(pitch) @ R_z(roll)`` for rot=(pitch, yaw, roll)."""
    pitch, yaw, roll = np.asarray(rot, dtype=np.float64).reshape(3)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    cr, sr = np.cos(roll), np.sin(roll)
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cp, -sp], [0.0, sp, cp]])
    ry = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rz = np.array([[cr, -sr, 0.0], [sr, cr, 0.0], [0.0, 0.0, 1.0]])
    return ry @ rx @ rz


def polar_to_eye(pose: CameraPose) -> CameraEye:
    """Convert a polar pose to its cartesian eye/view/up form.

    The forward axis is the rotated (0, 0, 1); with ``dist > 0`` this equals
    the unit vector from eye to reference point, and it is also used directly
    for the degenerate ``dist == 0`` case.
    """
    if not isinstance(pose, CameraPose):
        pose = CameraPose.from_array(pose)
    rmat = rotation_matrix(pose.rot)
    forward = rmat @ _FORWARD0
    up = rmat @ _UP0
    eye = pose.rp - pose.dist * forward
    return CameraEye(eye=eye, view_dir=forward, up=up, fov=pose.fov)


def _joint_array(frame) -> np.ndarray:
    if isinstance(frame, DancePoseFrame):
        return np.asarray(frame.joints, dtype=np.float64)
    pts = np.asarray(frame, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, 3)
    return pts


def view_angles(pose: CameraPose, points, aspect: float = DEFAULT_ASPECT):
    """Vertical/horizontal view angles (radians) of points in the camera frame.

    Angles are measured from the optical axis; points behind the camera get
    angles above pi/2, so the frustum test never needs a separate depth check.
    """
    cam = polar_to_eye(pose)
    d = _joint_array(points) - cam.eye
    x = d @ cam.right
    y = d @ cam.up
    z = d @ cam.view_dir
    vert = np.abs(np.arctan2(y, z))
    horiz = np.abs(np.arctan2(x, z))
    return vert, horiz


def visibility_margin(pose: CameraPose, points, aspect: float = DEFAULT_ASPECT) -> np.ndarray:
    """Signed angular clearance (radians) of points inside the view frustum.

    Positive margin means inside; a point coincident with the eye is treated
    as maximally outside.
    """
    if aspect <= 0:
        raise ValueError(f"aspect must be positive, got {aspect}")
    pts = _joint_array(points)
    vert, horiz = view_angles(pose, pts, aspect)
    v_half = np.radians(pose.fov) / 2.0
    h_half = np.arctan(aspect * np.tan(v_half))
    margin = np.minimum(v_half - vert, h_half - horiz)
    cam = polar_to_eye(pose)
    degenerate = np.linalg.norm(pts - cam.eye, axis=-1) == 0.0
    return np.where(degenerate, -np.pi, margin)


def joint_visibility(
    pose: CameraPose,
    frame,
    aspect: float = DEFAULT_ASPECT,
    sharpness: float = VISIBILITY_SHARPNESS,
) -> JointMask:
    """Soft per-joint visibility mask of a dance frame under a camera pose.

    The soft value is ``sigmoid(sharpness * margin)`` of the angular margin;
    ``JointMask.hard`` recovers the exact frustum test (margin >= 0).
    """
    margin = visibility_margin(pose, frame, aspect)
    soft = 1.0 / (1.0 + np.exp(-sharpness * margin))
    return JointMask(mask=soft)


# ---------------------------------------------------------------------------
# interpolation and keyframe intervals
# ---------------------------------------------------------------------------

def interpolate_pose(c1: CameraPose, c2: CameraPose, rho: float) -> CameraPose:
    """Blend two poses componentwise over all 8 channels, ``c1 + rho*(c2-c1)``."""
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if rho == 0.0:
        return c1
    if rho == 1.0:
        return c2
    a1, a2 = c1.as_array(), c2.as_array()
    return CameraPose.from_array(a1 + rho * (a2 - a1))


def split_long_intervals(tags: KeyframeTags, max_len: int = MAX_INTERVAL) -> KeyframeTags:
    """Insert keyframes at a fixed stride so no keyframe gap exceeds max_len.

    New keyframes sit at offsets max_len, 2*max_len, ... from the left end of
    each oversized gap; existing keyframes are always preserved.
    """
    if max_len <= 0:
        raise ValueError("max_len must be positive")
    tags = tags.canonicalized()
    idx = set(int(i) for i in tags.indices())
    for a, b in zip(sorted(idx), sorted(idx)[1:]):
        k = a + max_len
        while k < b:
            idx.add(k)
            k += max_len
    return KeyframeTags.from_indices(len(tags), sorted(idx), fps=tags.fps)


def interval_pairs(tags: KeyframeTags) -> list[tuple[int, int]]:
    """Adjacent keyframe pairs (t1, t2), closed by a virtual terminal pair.

    Each pair owns frames [t1, t2-1]; the appended (T-1, T) pair makes the
    last tagged frame a one-frame interval so the pairs tile [0, T-1] exactly.
    """
    if not tags.is_canonical():
        raise ValueError("tags must be canonicalized (both ends tagged)")
    idx = [int(i) for i in tags.indices()]
    pairs = list(zip(idx, idx[1:]))
    pairs.append((idx[-1], len(tags)))
    return pairs
