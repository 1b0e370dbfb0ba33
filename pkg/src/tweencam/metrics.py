"""Camera-track evaluation: distribution quality, diversity, dancer fidelity.

Two per-sequence descriptor spaces feed the distribution metrics:

* kinetic (22-d) -- for each of 11 channels (the 8 pose channels plus the
  derived 3-d eye position), the mean squared per-frame velocity and the mean
  squared per-frame acceleration; velocity block first, then acceleration.
* shot (63-d) -- per-joint visibility rates (60) plus cuts per second, mean
  shot length in seconds, and mean fov. A cut is a frame whose 8-channel pose
  delta norm exceeds a threshold calibrated on ground-truth tracks.

Frechet distance and mean pairwise Euclidean distance compare sets of these
descriptors; dancer miss rate (DMR) and limb capture difference (LCD) score
individual tracks against the dance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from tweencam.core import (
    CAMERA_DIM,
    DEFAULT_FPS,
    N_JOINTS,
    CameraPose,
    joint_visibility,
)

KINETIC_DIM = 22
SHOT_DIM = 63
_KINDS = ("kinetic", "shot")
_COV_REG = 1e-6
DEFAULT_CUT_THRESHOLD = 1.0
CUT_PERCENTILE = 99.5


@dataclass(frozen=True)
class FeatureVec:
    """One sequence's descriptor in a named feature space."""

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        expected = KINETIC_DIM if self.kind == "kinetic" else SHOT_DIM
        if v.shape != (expected,):
            raise ValueError(f"{self.kind} features must have {expected} dims, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def derived_eye(camera: np.ndarray) -> np.ndarray:
    """Eye positions (T, 3) of a dense (T, 8) track, vectorized."""
    cam = np.asarray(camera, dtype=np.float64)
    pitch, yaw = cam[:, 3], cam[:, 4]
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    # roll spins about the forward axis and cannot move it
    forward = np.stack([sy * cp, -sp, cy * cp], axis=1)
    return cam[:, 0:3] - cam[:, 6:7] * forward


def kinetic_features(camera: np.ndarray) -> FeatureVec:
    """Mean squared velocity/acceleration per channel; needs T >= 3."""
    cam = np.asarray(camera, dtype=np.float64)
    if cam.ndim != 2 or cam.shape[1] != CAMERA_DIM:
        raise ValueError(f"camera must be (T, {CAMERA_DIM})")
    if cam.shape[0] < 3:
        raise ValueError("kinetic features need at least 3 frames")
    channels = np.concatenate([cam, derived_eye(cam)], axis=1)
    vel = np.diff(channels, axis=0)
    acc = np.diff(channels, n=2, axis=0)
    values = np.concatenate([(vel**2).mean(axis=0), (acc**2).mean(axis=0)])
    return FeatureVec(kind="kinetic", values=values)


def hard_visibility(camera: np.ndarray, dance: np.ndarray) -> np.ndarray:
    """(T, 60) boolean per-frame frustum mask of a track over a dance."""
    cam = np.asarray(camera, dtype=np.float64)
    joints = np.asarray(dance, dtype=np.float64)
    if cam.shape[0] != joints.shape[0]:
        raise ValueError(f"camera has {cam.shape[0]} frames, dance {joints.shape[0]}")
    return np.stack(
        [joint_visibility(CameraPose.from_array(cam[t]), joints[t]).hard for t in range(len(cam))]
    )


def frame_delta_norms(camera: np.ndarray) -> np.ndarray:
    """L2 norm of the 8-channel pose change at each frame step, length T-1."""
    cam = np.asarray(camera, dtype=np.float64)
    return np.linalg.norm(np.diff(cam, axis=0), axis=1)


def cut_threshold(cameras: Sequence[np.ndarray], percentile: float = CUT_PERCENTILE) -> float:
    """Calibrate the shot-cut threshold from reference tracks."""
    deltas = np.concatenate([frame_delta_norms(c) for c in cameras])
    if len(deltas) == 0:
        raise ValueError("no frame deltas to calibrate on")
    return float(np.percentile(deltas, percentile))


def shot_features(
    camera: np.ndarray,
    dance: np.ndarray,
    fps: int = DEFAULT_FPS,
    theta_cut: float = DEFAULT_CUT_THRESHOLD,
) -> FeatureVec:
    """Visibility rates plus cut rate, mean shot length, and mean fov."""
    cam = np.asarray(camera, dtype=np.float64)
    rates = hard_visibility(cam, dance).mean(axis=0)
    n_cuts = int(np.sum(frame_delta_norms(cam) > theta_cut))
    seconds = cam.shape[0] / fps
    values = np.concatenate(
        [rates, [n_cuts / seconds, seconds / (n_cuts + 1), cam[:, 7].mean()]]
    )
    return FeatureVec(kind="shot", values=values)


# ---------------------------------------------------------------------------
# distribution metrics
# ---------------------------------------------------------------------------

def _as_matrix(feats, kind: str | None = None) -> tuple[np.ndarray, str | None]:
    if isinstance(feats, np.ndarray):
        return np.asarray(feats, dtype=np.float64), kind
    rows = list(feats)
    if rows and isinstance(rows[0], FeatureVec):
        kinds = {f.kind for f in rows}
        if len(kinds) > 1:
            raise ValueError(f"mixed feature kinds {sorted(kinds)}")
        return np.stack([f.values for f in rows]), rows[0].kind
    return np.asarray(rows, dtype=np.float64), kind


def _sqrt_psd(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((mat + mat.T) / 2.0)
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.T


def fid(feats_a, feats_b) -> float:
    """Frechet distance between two Gaussian fits of descriptor sets."""
    a, kind_a = _as_matrix(feats_a)
    b, kind_b = _as_matrix(feats_b)
    if kind_a is not None and kind_b is not None and kind_a != kind_b:
        raise ValueError(f"cannot compare {kind_a} features with {kind_b}")
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError("feature sets must be 2-d with matching dims")
    if a.shape[0] < 2 or b.shape[0] < 2:
        raise ValueError("need at least 2 sequences per side")
    mu_a, mu_b = a.mean(axis=0), b.mean(axis=0)
    reg = _COV_REG * np.eye(a.shape[1])
    cov_a = np.cov(a, rowvar=False, ddof=1) + reg
    cov_b = np.cov(b, rowvar=False, ddof=1) + reg
    root_a = _sqrt_psd(cov_a)
    inner = _sqrt_psd(root_a @ cov_b @ root_a)
    value = float(np.sum((mu_a - mu_b) ** 2) + np.trace(cov_a + cov_b - 2.0 * inner))
    return max(value, 0.0)


def diversity_dist(feats) -> float:
    """Mean Euclidean distance over all unordered pairs of descriptors."""
    m, _ = _as_matrix(feats)
    if m.shape[0] < 2:
        raise ValueError("need at least 2 sequences")
    diffs = m[:, None, :] - m[None, :, :]
    dists = np.linalg.norm(diffs, axis=-1)
    iu = np.triu_indices(m.shape[0], k=1)
    return float(dists[iu].mean())


# ---------------------------------------------------------------------------
# dancer-fidelity metrics
# ---------------------------------------------------------------------------

def dmr(camera: np.ndarray, dance: np.ndarray) -> float:
    """Fraction of frames where the camera misses the dancer entirely."""
    mask = hard_visibility(camera, dance)
    return float((~mask.any(axis=1)).mean())


def lcd(pred_camera: np.ndarray, gt_camera: np.ndarray, dance: np.ndarray) -> float:
    """Mean per-frame Hamming distance between visibility masks, over 60."""
    pred = hard_visibility(pred_camera, dance)
    gt = hard_visibility(gt_camera, dance)
    return float((pred != gt).sum(axis=1).mean() / N_JOINTS)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def evaluation_report(
    items: Sequence[tuple[str, np.ndarray, np.ndarray, np.ndarray]],
    fps: int = DEFAULT_FPS,
    theta_cut: float | None = None,
) -> tuple[dict, list[dict]]:
    """Full metric report over (name, pred camera, gt camera, dance) items.

    Returns the summary dict {fid_k, fid_s, dist_k, dist_s, dmr, lcd,
    n_sequences} and per-sequence rows for the optional CSV. The cut
    threshold defaults to the calibrated percentile of the ground truth.
    """
    if len(items) < 2:
        raise ValueError("evaluation needs at least 2 sequences")
    if theta_cut is None:
        theta_cut = cut_threshold([gt for _, _, gt, _ in items])
    rows = []
    kin_pred, kin_gt, shot_pred, shot_gt = [], [], [], []
    miss_frames, diff_joints, total_frames = 0.0, 0.0, 0
    for name, pred, gt, dance in items:
        kin_pred.append(kinetic_features(pred))
        kin_gt.append(kinetic_features(gt))
        shot_pred.append(shot_features(pred, dance, fps, theta_cut))
        shot_gt.append(shot_features(gt, dance, fps, theta_cut))
        t = len(pred)
        seq_dmr = dmr(pred, dance)
        seq_lcd = lcd(pred, gt, dance)
        miss_frames += seq_dmr * t
        diff_joints += seq_lcd * t
        total_frames += t
        rows.append({"name": name, "frames": t, "dmr": seq_dmr, "lcd": seq_lcd})
    summary = {
        "fid_k": fid(kin_pred, kin_gt),
        "fid_s": fid(shot_pred, shot_gt),
        "dist_k": diversity_dist(kin_pred),
        "dist_s": diversity_dist(shot_pred),
        "dmr": miss_frames / total_frames,
        "lcd": diff_joints / total_frames,
        "n_sequences": len(items),
    }
    return summary, rows
