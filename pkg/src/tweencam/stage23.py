"""Stages 2 and 3: keyframe pose synthesis, monotone tweens, reconstruction.

Stage 2 decodes a full window of candidate camera poses from music, dance,
and autoregressive camera history, then keeps only the poses at the interval
endpoints t1 and t2-1. Stage 3 decodes raw per-frame increments which are
forced into a monotone 0-to-1 tween curve: subtract the minimum increment,
take the running sum, and normalize anchored at both ends. Dense camera
frames are the affine blend of the two endpoint poses under that curve, so
within an interval every channel moves monotonically from one endpoint value
to the other and never jitters back.

Both stages train jointly; gradients flow through the tween construction and
the blend into both networks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import torch
import torch.nn as nn

from tweencam.checkpoints import load_checkpoint, save_checkpoint
from tweencam.core import (
    CAMERA_DIM,
    DEFAULT_ASPECT,
    MUSIC_DIM,
    N_JOINTS,
    VISIBILITY_SHARPNESS,
    CameraPose,
    KeyframeTags,
    SequenceBundle,
    interval_pairs,
    joint_visibility,
    split_long_intervals,
)
from tweencam.ingest import DatasetSplit, Window, pad_slice
from tweencam.nets import ContextDecoder, FeatureEncoder, decode_pose_channels

_SPAN_EPS = 1e-9


@dataclass
class LossWeights:
    lam_rec: float = 1.0
    lam_vel: float = 1.0
    lam_acc: float = 1.0
    lam_ba: float = 1.0

    def __post_init__(self):
        for name in ("lam_rec", "lam_vel", "lam_acc", "lam_ba"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass
class Stage23Config:
    h: int = 60
    w: int = 60
    embed_dim: int = 256
    n_layers: int = 6
    n_heads: int = 8
    dropout: float = 0.1
    lr: float = 1e-4
    batch_size: int = 16
    n_epochs: int = 10
    weights: LossWeights = field(default_factory=LossWeights)

    def __post_init__(self):
        if self.h <= 0 or self.w <= 0:
            raise ValueError("h and w must be positive")
        if self.embed_dim % 2 or (self.embed_dim // 2) % 2:
            raise ValueError("embed_dim must be divisible by 4")


@dataclass
class IntervalJob:
    """One adjacent-keyframe pair plus its window anchored at t1.

    The window's future half spans [t1, t1+w); the interval owns frames
    [t1, t2-1]. t2 may equal the sequence length for the terminal one-frame
    interval that closes the timeline.
    """

    t1: int
    t2: int
    window: Window

    def __post_init__(self):
        length = self.t2 - self.t1
        if not 0 < length <= self.window.w:
            raise ValueError(f"interval length {length} outside (0, {self.window.w}]")
        if self.window.t != self.t1:
            raise ValueError("window must be anchored at t1")

    @property
    def length(self) -> int:
        return self.t2 - self.t1


@dataclass(frozen=True)
class TweenComputation:
    """Trace of the monotone tween construction for one interval."""

    delta_tilde: np.ndarray
    delta_breve: np.ndarray
    rho_breve: np.ndarray
    rho_hat: np.ndarray

    def __post_init__(self):
        for name in ("delta_tilde", "delta_breve", "rho_breve", "rho_hat"):
            arr = np.asarray(getattr(self, name), dtype=np.float64).reshape(-1)
            object.__setattr__(self, name, arr)
        if np.any(self.delta_breve < 0):
            raise ValueError("delta_breve must be non-negative")
        if np.any(np.diff(self.rho_breve) < 0):
            raise ValueError("rho_breve must be non-decreasing")
        r = self.rho_hat
        if np.any(np.diff(r) < 0) or r[-1] != 1.0 or (len(r) > 1 and r[0] != 0.0):
            raise ValueError("rho_hat must run monotonically from 0 to 1")


# ---------------------------------------------------------------------------
# monotone tween construction
# ---------------------------------------------------------------------------

def monotone_normalize(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw increments -> (non-negative increments, running sum, tween values).

    The tween is anchored: first value 0, last value 1, non-decreasing, for
    any real input. Flat inputs (span below 1e-9) fall back to a linear ramp;
    a single-frame interval is the right anchor [1.0] alone.
    """
    delta = np.asarray(delta, dtype=np.float64).reshape(-1)
    if len(delta) == 0:
        raise ValueError("empty increment vector")
    breve = delta - delta.min()
    rho = np.cumsum(breve)
    if len(delta) == 1:
        return breve, rho, np.ones(1)
    span = rho[-1] - rho[0]
    if span < _SPAN_EPS:
        return breve, rho, np.linspace(0.0, 1.0, len(delta))
    return breve, rho, (rho - rho[0]) / span


def monotone_normalize_t(delta: torch.Tensor) -> torch.Tensor:
    """Differentiable tween construction; mirrors monotone_normalize."""
    if delta.shape[-1] == 1:
        return torch.ones_like(delta)
    breve = delta - delta.min(dim=-1, keepdim=True).values
    rho = torch.cumsum(breve, dim=-1)
    span = rho[..., -1:] - rho[..., :1]
    lin = torch.linspace(0.0, 1.0, delta.shape[-1], dtype=delta.dtype, device=delta.device)
    lin = lin.expand_as(rho)
    norm = (rho - rho[..., :1]) / span.clamp(min=_SPAN_EPS)
    return torch.where(span < _SPAN_EPS, lin, norm)


def reconstruct_interval(c1, c2, rho_hat) -> np.ndarray:
    """Blend the endpoint poses under the tween: rows for frames t1..t2-1.

    Frames where the tween is exactly 0 or 1 receive the endpoint pose
    verbatim, so keyframe poses survive bit-exact.
    """
    a1 = c1.as_array() if isinstance(c1, CameraPose) else np.asarray(c1, dtype=np.float64)
    a2 = c2.as_array() if isinstance(c2, CameraPose) else np.asarray(c2, dtype=np.float64)
    rho = np.asarray(rho_hat, dtype=np.float64).reshape(-1)
    out = a1[None, :] + rho[:, None] * (a2 - a1)[None, :]
    out[rho == 0.0] = a1
    out[rho == 1.0] = a2
    return out


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

class Stage23Model(nn.Module):
    """Two decoder stacks with identical structure and independent weights:
    one emits candidate keyframe poses, the other tween increments."""

    def __init__(self, config: Stage23Config):
        super().__init__()
        self.config = config
        d = config.embed_dim

        self.kf_music_enc = FeatureEncoder(MUSIC_DIM, d // 2)
        self.kf_pose_enc = FeatureEncoder(N_JOINTS * 3, d // 2)
        self.kf_cam_enc = FeatureEncoder(CAMERA_DIM, d)
        self.kf_decoder = ContextDecoder(d, config.n_layers, config.n_heads, config.dropout)
        self.kf_head = nn.Linear(d, CAMERA_DIM)

        self.tw_music_enc = FeatureEncoder(MUSIC_DIM, d // 2)
        self.tw_pose_enc = FeatureEncoder(N_JOINTS * 3, d // 2)
        self.tw_cond_enc = FeatureEncoder(CAMERA_DIM, d)
        self.tw_decoder = ContextDecoder(d, config.n_layers, config.n_heads, config.dropout)
        self.tw_head = nn.Linear(d, 1)

    def keyframe_poses(
        self, music: torch.Tensor, dance: torch.Tensor, cam_hist: torch.Tensor
    ) -> torch.Tensor:
        """(B, h+w, 35), (B, h+w, 180), (B, h+w, 8) -> (B, w, 8) valid poses."""
        h = self.config.h
        cam = cam_hist.clone()
        cam[:, h:] = 0.0
        mp = torch.cat([self.kf_music_enc(music), self.kf_pose_enc(dance)], dim=-1)
        out = self.kf_decoder(self.kf_cam_enc(cam), mp)
        return decode_pose_channels(self.kf_head(out[:, h:]))

    def tween_deltas(
        self, music: torch.Tensor, dance: torch.Tensor, cond: torch.Tensor
    ) -> torch.Tensor:
        """Condition stream = camera history plus the two keyframe poses
        written sparsely into the future half; returns (B, w) raw increments."""
        h = self.config.h
        mp = torch.cat([self.tw_music_enc(music), self.tw_pose_enc(dance)], dim=-1)
        out = self.tw_decoder(self.tw_cond_enc(cond), mp)
        return self.tw_head(out[:, h:]).squeeze(-1)


def _job_tensors(jobs: Sequence[IntervalJob], dtype=torch.float32):
    music = torch.as_tensor(np.stack([j.window.music_ctx for j in jobs]), dtype=dtype)
    dance = torch.as_tensor(
        np.stack([j.window.dance_ctx.reshape(len(j.window.dance_ctx), -1) for j in jobs]),
        dtype=dtype,
    )
    cam = torch.as_tensor(np.stack([j.window.camera_ctx for j in jobs]), dtype=dtype)
    return music, dance, cam


def _sparse_condition(jobs, c1s: torch.Tensor, c2s: torch.Tensor, cam_hist: torch.Tensor):
    """History plus the two endpoint poses at their future offsets, zeros
    elsewhere; built from one-hots so gradients reach both poses."""
    b, span, _ = cam_hist.shape
    h = jobs[0].window.h
    w = jobs[0].window.w
    offs = torch.as_tensor([j.t2 - 1 - j.t1 for j in jobs])
    e0 = torch.zeros(b, w, dtype=c1s.dtype)
    e0[:, 0] = 1.0
    e2 = torch.zeros(b, w, dtype=c2s.dtype)
    e2[torch.arange(b), offs] = 1.0
    keep1 = (offs > 0).to(c1s.dtype).view(b, 1, 1)
    future = keep1 * e0.unsqueeze(-1) * c1s.unsqueeze(1) + e2.unsqueeze(-1) * c2s.unsqueeze(1)
    hist = cam_hist[:, :h].to(c1s.dtype)
    return torch.cat([hist, future], dim=1)


def make_interval_job(
    bundle: SequenceBundle,
    tags: KeyframeTags,
    t1: int,
    t2: int,
    h: int = 60,
    w: int = 60,
    camera_history: np.ndarray | None = None,
) -> IntervalJob:
    """Build the window-anchored job for one adjacent keyframe pair.

    camera_history (dense (T, 8)) fills the history half of the window;
    ground truth during training, the growing synthesis during inference.
    """
    t_total = bundle.n_frames
    cam = camera_history if camera_history is not None else np.zeros((t_total, CAMERA_DIM))
    tag_arr = tags.tags.astype(np.float32)
    camera_ctx = np.zeros((h + w, CAMERA_DIM), dtype=np.float64)
    camera_ctx[:h] = pad_slice(cam, t1 - h, t1)
    tag_ctx = np.zeros(h + w, dtype=np.float32)
    tag_ctx[:h] = pad_slice(tag_arr, t1 - h, t1)
    window = Window(
        t=t1,
        h=h,
        w=w,
        music_ctx=pad_slice(bundle.music, t1 - h, t1 + w),
        dance_ctx=pad_slice(bundle.dance, t1 - h, t1 + w),
        tag_ctx=tag_ctx,
        camera_ctx=camera_ctx,
        target_tags=pad_slice(tag_arr, t1, t1 + w),
        future_valid=min(w, t_total - t1),
    )
    return IntervalJob(t1=t1, t2=t2, window=window)


def make_interval_jobs(
    bundle: SequenceBundle,
    tags: KeyframeTags,
    h: int = 60,
    w: int = 60,
    camera_history: np.ndarray | None = None,
) -> list[IntervalJob]:
    """One IntervalJob per adjacent keyframe pair (terminal pair included)."""
    return [
        make_interval_job(bundle, tags, t1, t2, h, w, camera_history)
        for t1, t2 in interval_pairs(tags)
    ]


def synth_keyframes(job: IntervalJob, model: Stage23Model) -> tuple[CameraPose, CameraPose]:
    """Stage 2 for one interval: poses at t1 and t2-1, all others discarded."""
    model.eval()
    with torch.no_grad():
        music, dance, cam = _job_tensors([job])
        poses = model.keyframe_poses(music, dance, cam)[0].double().numpy()
    off = job.t2 - 1 - job.t1
    return CameraPose.from_array(poses[0]), CameraPose.from_array(poses[off])


def tween_values(job: IntervalJob, c1, c2, model: Stage23Model) -> TweenComputation:
    """Stage 3 for one interval: raw increments through the monotone pipeline."""
    a1 = c1.as_array() if isinstance(c1, CameraPose) else np.asarray(c1, dtype=np.float64)
    a2 = c2.as_array() if isinstance(c2, CameraPose) else np.asarray(c2, dtype=np.float64)
    model.eval()
    with torch.no_grad():
        music, dance, cam = _job_tensors([job])
        c1t = torch.as_tensor(a1, dtype=torch.float32).unsqueeze(0)
        c2t = torch.as_tensor(a2, dtype=torch.float32).unsqueeze(0)
        cond = _sparse_condition([job], c1t, c2t, cam)
        delta = model.tween_deltas(music, dance, cond)[0].double().numpy()
    delta_tilde = delta[: job.length]
    breve, rho_breve, rho_hat = monotone_normalize(delta_tilde)
    return TweenComputation(
        delta_tilde=delta_tilde, delta_breve=breve, rho_breve=rho_breve, rho_hat=rho_hat
    )


# ---------------------------------------------------------------------------
# losses
# ---------------------------------------------------------------------------

def soft_visibility_t(
    poses: torch.Tensor,
    joints: torch.Tensor,
    aspect: float = DEFAULT_ASPECT,
    sharpness: float = VISIBILITY_SHARPNESS,
) -> torch.Tensor:
    """Differentiable per-joint visibility, (L, 8) x (L, J, 3) -> (L, J).

    Same geometry as the numpy path: frustum margin in radians through a
    sigmoid of the stated sharpness.
    """
    pitch, yaw, roll = poses[:, 3], poses[:, 4], poses[:, 5]
    cp, sp = torch.cos(pitch), torch.sin(pitch)
    cy, sy = torch.cos(yaw), torch.sin(yaw)
    cr, sr = torch.cos(roll), torch.sin(roll)
    one = torch.ones_like(cp)
    zero = torch.zeros_like(cp)
    rx = torch.stack([one, zero, zero, zero, cp, -sp, zero, sp, cp], -1).view(-1, 3, 3)
    ry = torch.stack([cy, zero, sy, zero, one, zero, -sy, zero, cy], -1).view(-1, 3, 3)
    rz = torch.stack([cr, -sr, zero, sr, cr, zero, zero, zero, one], -1).view(-1, 3, 3)
    rmat = ry @ rx @ rz
    forward = rmat[:, :, 2]
    up = rmat[:, :, 1]
    right = torch.cross(up, forward, dim=-1)
    eye = poses[:, 0:3] - poses[:, 6:7] * forward
    d = joints - eye.unsqueeze(1)
    x = (d * right.unsqueeze(1)).sum(-1)
    y = (d * up.unsqueeze(1)).sum(-1)
    z = (d * forward.unsqueeze(1)).sum(-1)
    vert = torch.atan2(y, z).abs()
    horiz = torch.atan2(x, z).abs()
    v_half = torch.deg2rad(poses[:, 7]) / 2.0
    h_half = torch.atan(aspect * torch.tan(v_half))
    margin = torch.minimum(v_half.unsqueeze(1) - vert, h_half.unsqueeze(1) - horiz)
    return torch.sigmoid(sharpness * margin)


def _to_t(x, dtype=torch.float64) -> torch.Tensor:
    return x.to(dtype) if torch.is_tensor(x) else torch.as_tensor(np.asarray(x), dtype=dtype)


def stage23_losses(
    pred_poses,
    gt_poses,
    pred_mask,
    gt_mask,
    interval: tuple[int, int],
    weights: LossWeights,
):
    """Per-interval reconstruction, velocity, acceleration, and aim losses.

    All rows cover frames [t1, t2-1]. Position/velocity/acceleration terms
    are mean squared differences over progressively shorter slices (an
    interval shorter than 2 or 3 frames zeroes the respective term); the aim
    term penalizes ground-truth-visible joints the prediction drops, as the
    mean absolute gap between the binary mask and its product with the soft
    predicted mask. Returns (total, components) with total differentiable.
    """
    t1, t2 = interval
    length = t2 - t1
    pred = _to_t(pred_poses)
    gt = _to_t(gt_poses)
    if pred.shape != gt.shape or pred.shape[0] != length:
        raise ValueError(f"pose blocks must be ({length}, {CAMERA_DIM})")
    zero = torch.zeros((), dtype=pred.dtype)
    l_rec = ((pred - gt) ** 2).mean()
    l_vel = zero
    if length >= 2:
        l_vel = ((torch.diff(pred, dim=0) - torch.diff(gt, dim=0)) ** 2).mean()
    l_acc = zero
    if length >= 3:
        l_acc = ((torch.diff(pred, n=2, dim=0) - torch.diff(gt, n=2, dim=0)) ** 2).mean()
    pm = _to_t(pred_mask, dtype=pred.dtype)
    gm = _to_t(gt_mask, dtype=pred.dtype)
    if pm.shape != gm.shape:
        raise ValueError("visibility masks must share a shape")
    l_ba = (gm - pm * gm).abs().mean()
    total = (
        weights.lam_rec * l_rec
        + weights.lam_vel * l_vel
        + weights.lam_acc * l_acc
        + weights.lam_ba * l_ba
    )
    components = {
        "rec": float(l_rec.detach()),
        "vel": float(l_vel.detach()),
        "acc": float(l_acc.detach()),
        "ba": float(l_ba.detach()),
        "total": float(total.detach()),
    }
    return total, components


def save_stage23(path, model: Stage23Model) -> None:
    arrays = {k: v.detach().cpu().numpy() for k, v in model.state_dict().items()}
    save_checkpoint(path, "stage23", model.config, arrays)


def load_stage23(path) -> Stage23Model:
    kind, config, arrays = load_checkpoint(path)
    if kind != "stage23":
        raise ValueError(f"checkpoint holds a {kind!r} model, not a stage23 model")
    weights = LossWeights(**config.pop("weights"))
    model = Stage23Model(Stage23Config(weights=weights, **config))
    model.load_state_dict({k: torch.as_tensor(v.copy()) for k, v in arrays.items()})
    model.eval()
    return model


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

def _forward_interval(model: Stage23Model, job: IntervalJob, music, dance, cam, gt_joints_t):
    """Differentiable stage-2 + stage-3 + blend for one job; returns the
    predicted (L, 8) poses and (L, J) soft visibility."""
    poses = model.keyframe_poses(music, dance, cam)
    off = job.t2 - 1 - job.t1
    c1 = poses[0, 0]
    c2 = poses[0, off]
    cond = _sparse_condition([job], c1.unsqueeze(0), c2.unsqueeze(0), cam)
    delta = model.tween_deltas(music, dance, cond)[0, : job.length]
    rho = monotone_normalize_t(delta)
    pred = c1.unsqueeze(0) + rho.unsqueeze(1) * (c2 - c1).unsqueeze(0)
    soft = soft_visibility_t(pred, gt_joints_t)
    return pred, soft


def _job_targets(piece: SequenceBundle, job: IntervalJob):
    gt_cam = piece.camera[job.t1 : job.t2]
    gt_joints = piece.dance[job.t1 : job.t2].astype(np.float64)
    hard = np.stack(
        [
            joint_visibility(CameraPose.from_array(gt_cam[i]), gt_joints[i]).hard
            for i in range(job.length)
        ]
    ).astype(np.float64)
    return gt_cam, gt_joints, hard


def train_stage23(
    split: DatasetSplit, config: Stage23Config, seed: int = 0, log=None
) -> tuple[Stage23Model, list[dict]]:
    """Joint teacher-forced training of both stages over all intervals."""
    usable = [p for p in split.pieces if p.tags is not None and p.camera is not None]
    if not usable:
        raise ValueError("training split has no pieces with tags and camera")
    items = []
    for piece in usable:
        tags = split_long_intervals(piece.tags, max_len=config.w)
        for job in make_interval_jobs(piece, tags, config.h, config.w, camera_history=piece.camera):
            gt_cam, gt_joints, hard = _job_targets(piece, job)
            items.append((job, gt_cam, gt_joints, hard))

    torch.manual_seed(seed)
    model = Stage23Model(config)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    rng = np.random.default_rng(seed)
    logs: list[dict] = []
    for epoch in range(config.n_epochs):
        model.train()
        order = rng.permutation(len(items))
        sums = {"rec": 0.0, "vel": 0.0, "acc": 0.0, "ba": 0.0, "total": 0.0}
        for i in range(0, len(items), config.batch_size):
            batch = [items[j] for j in order[i : i + config.batch_size]]
            opt.zero_grad()
            losses = []
            for job, gt_cam, gt_joints, hard in batch:
                music, dance, cam = _job_tensors([job])
                gt_joints_t = torch.as_tensor(gt_joints, dtype=torch.float32)
                pred, soft = _forward_interval(model, job, music, dance, cam, gt_joints_t)
                total, comps = stage23_losses(
                    pred.double(),
                    torch.as_tensor(gt_cam),
                    soft.double(),
                    torch.as_tensor(hard),
                    (job.t1, job.t2),
                    config.weights,
                )
                losses.append(total)
                for key in sums:
                    sums[key] += comps[key]
            torch.stack(losses).mean().backward()
            opt.step()
        entry = {"epoch": epoch, **{k: v / len(items) for k, v in sums.items()}}
        logs.append(entry)
        if log is not None:
            log(entry)
    return model, logs


# ---------------------------------------------------------------------------
# inference
# ---------------------------------------------------------------------------

def model_pose_source(model: Stage23Model) -> Callable[[IntervalJob], tuple[np.ndarray, np.ndarray]]:
    """Default endpoint poses: stage 2 outputs at t1 and t2-1."""

    def source(job: IntervalJob):
        c1, c2 = synth_keyframes(job, model)
        return c1.as_array(), c2.as_array()

    return source


def user_pose_source(poses: dict[int, np.ndarray]) -> Callable[[IntervalJob], tuple[np.ndarray, np.ndarray]]:
    """Endpoint poses pinned by the caller at tagged frames.

    Interval (t1, t2) runs from the pose at t1 toward the pose at t2; the
    pose at t2 itself opens the next interval, so tagged frames reproduce
    the given poses bit-exact. A missing right pose holds the left one.
    A one-frame interval (a cut) collapses both endpoints onto frame t1,
    whose pose is the one tagged at t1 -- never the next tag's.
    """
    table = {int(k): np.asarray(v, dtype=np.float64).reshape(CAMERA_DIM) for k, v in poses.items()}

    def source(job: IntervalJob):
        if job.t1 not in table:
            raise KeyError(f"no pose given for keyframe {job.t1}")
        c1 = table[job.t1]
        if job.t2 - job.t1 == 1:
            return c1, c1
        return c1, table.get(job.t2, c1)

    return source


def gt_pose_source(camera: np.ndarray) -> Callable[[IntervalJob], tuple[np.ndarray, np.ndarray]]:
    """Endpoint poses copied from a dense reference track at t1 and t2-1."""
    cam = np.asarray(camera, dtype=np.float64)

    def source(job: IntervalJob):
        return cam[job.t1], cam[job.t2 - 1]

    return source


def synthesize_camera(
    bundle: SequenceBundle,
    tags: KeyframeTags,
    model: Stage23Model,
    pose_source: Callable[[IntervalJob], tuple[np.ndarray, np.ndarray]] | None = None,
) -> np.ndarray:
    """Dense (T, 8) camera: intervals left to right, history autoregressive.

    Endpoint poses come from pose_source (stage 2 by default); tween curves
    always come from stage 3. Each interval writes frames [t1, t2-1]; the
    jump from t2-1 to the next interval's t2 is a shot cut and is never
    smoothed.
    """
    if not tags.is_canonical():
        raise ValueError("tags must be canonical")
    h, w = model.config.h, model.config.w
    if len(tags.indices()) > 1 and int(tags.gaps().max()) > w:
        raise ValueError(f"tag gaps must not exceed w={w}")
    if pose_source is None:
        pose_source = model_pose_source(model)
    t_total = bundle.n_frames
    out = np.zeros((t_total, CAMERA_DIM), dtype=np.float64)
    for t1, t2 in interval_pairs(tags):
        job = make_interval_job(bundle, tags, t1, t2, h, w, camera_history=out)
        c1, c2 = pose_source(job)
        tween = tween_values(job, c1, c2, model)
        out[t1:t2] = reconstruct_interval(c1, c2, tween.rho_hat)
    return out
