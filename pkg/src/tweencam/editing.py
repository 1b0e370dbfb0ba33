"""Interactive editing sessions over a synthesized camera track.

A session owns a bundle, the current keyframe tags, optional per-keyframe
pose overrides, and the dense camera. Mutations (tag add/remove/move, pose
edits) re-synthesize the affected intervals and report exactly which ones
changed. Because each interval conditions on the camera history before it,
the default "cascade" policy re-runs everything from the earliest affected
interval to the end; the opt-in "local" policy freezes history and re-runs
only the intervals touching the edit, trading global consistency for speed.

Sessions are safe for concurrent use: all mutations serialize on a
per-session lock, and optimistic version checks reject stale edits.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from tweencam.core import (
    CAMERA_DIM,
    MAX_INTERVAL,
    CameraPose,
    KeyframeTags,
    SequenceBundle,
    interval_pairs,
    split_long_intervals,
)
from tweencam.stage23 import (
    Stage23Model,
    make_interval_job,
    reconstruct_interval,
    synth_keyframes,
    tween_values,
)

POLICIES = ("cascade", "local")
_ids = itertools.count(1)


class EditError(ValueError):
    """Mutation that would violate a session invariant; maps to HTTP 400."""


class VersionConflict(Exception):
    """Stale optimistic version on a mutation; maps to HTTP 409."""


@dataclass
class EditSession:
    bundle: SequenceBundle
    model: Stage23Model
    tags: KeyframeTags
    session_id: str = field(default_factory=lambda: f"s{next(_ids)}")
    pose_overrides: dict[int, np.ndarray] = field(default_factory=dict)
    camera: np.ndarray | None = None
    version: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.tags = split_long_intervals(self.tags, max_len=self.model.config.w)
        if self.camera is None:
            self.camera = np.zeros((self.bundle.n_frames, CAMERA_DIM))
            self._resynthesize(interval_pairs(self.tags))

    # -- internals ------------------------------------------------------------

    def _pose_pair(self, job) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint poses with overrides taking precedence over stage 2.

        An override at t1 pins the interval's start; an override at t2 makes
        the interval land on the pinned pose, keeping the approach into an
        edited keyframe continuous. A one-frame interval has both endpoints
        on frame t1 itself, so only the t1 override applies there: a cut
        stays a jump and never shows the next keyframe's pin a frame early.
        """
        over1 = self.pose_overrides.get(job.t1)
        over2 = self.pose_overrides.get(job.t2) if job.t2 - job.t1 > 1 else over1
        if over1 is None or over2 is None:
            c1, c2 = synth_keyframes(job, self.model)
            c1, c2 = c1.as_array(), c2.as_array()
        if over1 is not None:
            c1 = over1
        if over2 is not None:
            c2 = over2
        return c1, c2

    def _resynthesize(self, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
        h, w = self.model.config.h, self.model.config.w
        for t1, t2 in pairs:
            job = make_interval_job(self.bundle, self.tags, t1, t2, h, w, camera_history=self.camera)
            c1, c2 = self._pose_pair(job)
            tween = tween_values(job, c1, c2, self.model)
            self.camera[t1:t2] = reconstruct_interval(c1, c2, tween.rho_hat)
        return pairs

    def _dirty_pairs(self, frames: set[int], policy: str) -> list[tuple[int, int]]:
        pairs = interval_pairs(self.tags)
        touched = [p for p in pairs if any(p[0] <= f <= p[1] for f in frames)]
        if not touched:
            return []
        if policy == "local":
            return touched
        earliest = touched[0][0]
        return [p for p in pairs if p[0] >= earliest]

    def _check(self, version: int | None, policy: str):
        if policy not in POLICIES:
            raise EditError(f"policy must be one of {POLICIES}")
        if version is not None and version != self.version:
            raise VersionConflict(f"expected version {self.version}, got {version}")

    def _mutate_tags(self, new_indices: set[int]):
        t = self.bundle.n_frames
        tags = KeyframeTags.from_indices(t, sorted(new_indices), fps=self.tags.fps)
        if not tags.is_canonical():
            raise EditError("the first and last frames must stay tagged")
        if len(tags.indices()) > 1 and int(tags.gaps().max()) > min(MAX_INTERVAL, self.model.config.w):
            raise EditError(f"edit would open a keyframe gap wider than {MAX_INTERVAL} frames")
        self.tags = tags

    # -- queries ----------------------------------------------------------------

    def describe(self) -> dict:
        return {
            "session_id": self.session_id,
            "n_frames": self.bundle.n_frames,
            "fps": self.bundle.fps,
            "version": self.version,
            "tags": [int(i) for i in self.tags.indices()],
            "overrides": {int(f): p.tolist() for f, p in sorted(self.pose_overrides.items())},
        }

    # -- mutations ----------------------------------------------------------------

    def edit_pose(
        self, frame: int, pose, version: int | None = None, policy: str = "cascade"
    ) -> list[tuple[int, int]]:
        """Pin the camera pose at a tagged frame; returns re-run intervals."""
        with self.lock:
            self._check(version, policy)
            frame = int(frame)
            if self.tags.tags[frame] != 1:
                raise EditError(f"frame {frame} is not a keyframe")
            arr = pose.as_array() if isinstance(pose, CameraPose) else np.asarray(pose, dtype=np.float64)
            CameraPose.from_array(arr)  # validates ranges
            self.pose_overrides[frame] = arr.reshape(CAMERA_DIM)
            changed = self._resynthesize(self._dirty_pairs({frame}, policy))
            self.version += 1
            return changed

    def clear_pose(
        self, frame: int, version: int | None = None, policy: str = "cascade"
    ) -> list[tuple[int, int]]:
        """Drop a pose override, handing the frame back to the model."""
        with self.lock:
            self._check(version, policy)
            frame = int(frame)
            if frame not in self.pose_overrides:
                raise EditError(f"frame {frame} has no pinned pose")
            del self.pose_overrides[frame]
            changed = self._resynthesize(self._dirty_pairs({frame}, policy))
            self.version += 1
            return changed

    def add_tag(
        self, frame: int, version: int | None = None, policy: str = "cascade"
    ) -> list[tuple[int, int]]:
        with self.lock:
            self._check(version, policy)
            frame = int(frame)
            if not 0 <= frame < self.bundle.n_frames:
                raise EditError(f"frame {frame} outside the timeline")
            idx = set(int(i) for i in self.tags.indices())
            if frame in idx:
                raise EditError(f"frame {frame} is already a keyframe")
            self._mutate_tags(idx | {frame})
            changed = self._resynthesize(self._dirty_pairs({frame}, policy))
            self.version += 1
            return changed

    def remove_tag(
        self, frame: int, version: int | None = None, policy: str = "cascade"
    ) -> list[tuple[int, int]]:
        with self.lock:
            self._check(version, policy)
            frame = int(frame)
            idx = set(int(i) for i in self.tags.indices())
            if frame not in idx:
                raise EditError(f"frame {frame} is not a keyframe")
            if frame in (0, self.bundle.n_frames - 1):
                raise EditError("the boundary keyframes cannot be removed")
            self._mutate_tags(idx - {frame})
            self.pose_overrides.pop(frame, None)
            changed = self._resynthesize(self._dirty_pairs({frame}, policy))
            self.version += 1
            return changed

    def move_tag(
        self, frame: int, to: int, version: int | None = None, policy: str = "cascade"
    ) -> list[tuple[int, int]]:
        """Slide a keyframe to a new frame, carrying any pose override."""
        with self.lock:
            self._check(version, policy)
            frame, to = int(frame), int(to)
            idx = set(int(i) for i in self.tags.indices())
            if frame not in idx:
                raise EditError(f"frame {frame} is not a keyframe")
            if frame in (0, self.bundle.n_frames - 1):
                raise EditError("the boundary keyframes cannot be moved")
            if not 0 <= to < self.bundle.n_frames:
                raise EditError(f"frame {to} outside the timeline")
            if to in idx:
                raise EditError(f"frame {to} is already a keyframe")
            self._mutate_tags((idx - {frame}) | {to})
            if frame in self.pose_overrides:
                self.pose_overrides[to] = self.pose_overrides.pop(frame)
            changed = self._resynthesize(self._dirty_pairs({frame, to}, policy))
            self.version += 1
            return changed

    def resynthesize_all(self, version: int | None = None) -> list[tuple[int, int]]:
        with self.lock:
            self._check(version, "cascade")
            changed = self._resynthesize(interval_pairs(self.tags))
            self.version += 1
            return changed
