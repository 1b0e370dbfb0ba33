"""Stage 1: per-frame keyframe detection over sliding windows.

The detector sees h frames of history and w frames of future music and dance,
plus the keyframe tags of the history half only, and emits one keyframe
probability per future frame. Inference slides the window forward w frames at
a time, feeding its own thresholded predictions back as history, then
canonicalizes the result and splits oversized gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import torch
import torch.nn as nn

from tweencam.checkpoints import load_checkpoint, save_checkpoint
from tweencam.core import (
    MUSIC_DIM,
    N_JOINTS,
    KeyframeTags,
    SequenceBundle,
    split_long_intervals,
)
from tweencam.ingest import DatasetSplit, Window, make_windows, pad_slice
from tweencam.nets import ContextDecoder, FeatureEncoder

_EPS = 1e-7


@dataclass
class DetectorConfig:
    h: int = 60
    w: int = 60
    embed_dim: int = 256
    n_layers: int = 4
    n_heads: int = 8
    dropout: float = 0.1
    #: positive-class weight in the detection loss; keyframes are rare
    lambda_kf: float = 5.0
    lr: float = 1e-4
    batch_size: int = 32
    n_epochs: int = 10

    def __post_init__(self):
        if self.h <= 0 or self.w <= 0:
            raise ValueError("h and w must be positive")
        if self.lambda_kf <= 0:
            raise ValueError("lambda_kf must be positive")
        if self.embed_dim % 2 or (self.embed_dim // 2) % 2:
            raise ValueError("embed_dim must be divisible by 4")


@dataclass(frozen=True)
class KeyframeProbs:
    """Keyframe probabilities for the w future frames of one window."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "probs", p)


class KeyframeDetector(nn.Module):
    """Tag-history queries cross-attend fused music-dance context."""

    def __init__(self, config: DetectorConfig):
        super().__init__()
        self.config = config
        d = config.embed_dim
        self.music_enc = FeatureEncoder(MUSIC_DIM, d // 2)
        self.pose_enc = FeatureEncoder(N_JOINTS * 3, d // 2)
        self.tag_enc = FeatureEncoder(1, d)
        self.decoder = ContextDecoder(d, config.n_layers, config.n_heads, config.dropout)
        self.head = nn.Linear(d, 1)

    def forward(self, music: torch.Tensor, dance: torch.Tensor, tags: torch.Tensor) -> torch.Tensor:
        """(B, h+w, 35), (B, h+w, 180), (B, h+w) -> keyframe probs (B, w)."""
        h, w = self.config.h, self.config.w
        if music.shape[1] != h + w or dance.shape[1] != h + w or tags.shape[1] != h + w:
            raise ValueError(f"window streams must span h+w={h + w} frames")
        # future tag slots are forced to zero so targets can never leak in
        tags = tags.clone()
        tags[:, h:] = 0.0
        mp = torch.cat([self.music_enc(music), self.pose_enc(dance)], dim=-1)
        query = self.tag_enc(tags.unsqueeze(-1))
        out = self.decoder(query, mp)
        logits = self.head(out[:, h:]).squeeze(-1)
        return torch.sigmoid(logits)


def _window_tensors(windows: Sequence[Window], dtype=torch.float32):
    music = torch.as_tensor(np.stack([w.music_ctx for w in windows]), dtype=dtype)
    dance_flat = np.stack([w.dance_ctx.reshape(len(w.dance_ctx), -1) for w in windows])
    dance = torch.as_tensor(dance_flat, dtype=dtype)
    tags = torch.as_tensor(np.stack([w.tag_ctx for w in windows]), dtype=dtype)
    target = torch.as_tensor(np.stack([w.target_tags for w in windows]), dtype=dtype)
    valid = torch.zeros(len(windows), windows[0].w, dtype=dtype)
    for i, w in enumerate(windows):
        valid[i, : w.future_valid] = 1.0
    return music, dance, tags, target, valid


def detector_forward(window: Window, model: KeyframeDetector) -> KeyframeProbs:
    """Run one window through the detector, returning w probabilities."""
    model.eval()
    with torch.no_grad():
        music, dance, tags, _, _ = _window_tensors([window])
        probs = model(music, dance, tags)[0]
    return KeyframeProbs(probs=probs.double().numpy())


def wce_loss(probs, gt, lambda_kf: float, valid=None) -> torch.Tensor:
    """Class-weighted binary cross entropy, averaged over the window.

    The keyframe (positive) class is weighted by lambda_kf; probabilities are
    clamped to [1e-7, 1 - 1e-7]. ``valid`` optionally zeroes padded positions
    (the mean then runs over valid positions only).
    """
    if isinstance(probs, KeyframeProbs):
        probs = probs.probs
    p = torch.as_tensor(probs, dtype=torch.float64) if not torch.is_tensor(probs) else probs
    k = torch.as_tensor(gt, dtype=p.dtype) if not torch.is_tensor(gt) else gt.to(p.dtype)
    if p.shape != k.shape:
        raise ValueError(f"probs shape {tuple(p.shape)} != tags shape {tuple(k.shape)}")
    p = torch.clamp(p, _EPS, 1.0 - _EPS)
    terms = lambda_kf * k * torch.log(p) + (1.0 - k) * torch.log(1.0 - p)
    if valid is not None:
        v = torch.as_tensor(valid, dtype=p.dtype) if not torch.is_tensor(valid) else valid.to(p.dtype)
        return -(terms * v).sum() / v.sum().clamp(min=1.0)
    return -terms.mean()


def detect_keyframes(
    bundle: SequenceBundle, model: KeyframeDetector, threshold: float = 0.5
) -> KeyframeTags:
    """Autoregressive sliding-window tagging of a whole sequence.

    Each step emits min(w, frames left) thresholded tags, appends them to the
    history, and advances by that amount. The result is canonicalized and
    long gaps are split, so it is valid regardless of model quality.
    """
    t_total = bundle.n_frames
    if t_total == 0:
        raise ValueError("cannot tag an empty sequence")
    h, w = model.config.h, model.config.w
    model.eval()
    history = np.zeros(0, dtype=np.float32)
    with torch.no_grad():
        for t in range(0, t_total, w):
            tag_ctx = np.zeros(h + w, dtype=np.float32)
            tag_ctx[:h] = pad_slice(history, t - h, t)
            music = pad_slice(bundle.music, t - h, t + w)[None]
            dance = pad_slice(bundle.dance, t - h, t + w).reshape(1, h + w, -1)
            probs = model(
                torch.as_tensor(music),
                torch.as_tensor(dance),
                torch.as_tensor(tag_ctx[None]),
            )[0].numpy()
            emit = min(w, t_total - t)
            history = np.concatenate([history, (probs[:emit] >= threshold).astype(np.float32)])
    tags = KeyframeTags(tags=history.astype(np.uint8), fps=bundle.fps).canonicalized()
    return split_long_intervals(tags, max_len=w)


def save_detector(path, model: KeyframeDetector) -> None:
    arrays = {k: v.detach().cpu().numpy() for k, v in model.state_dict().items()}
    save_checkpoint(path, "detector", model.config, arrays)


def load_detector(path) -> KeyframeDetector:
    kind, config, arrays = load_checkpoint(path)
    if kind != "detector":
        raise ValueError(f"checkpoint holds a {kind!r} model, not a detector")
    model = KeyframeDetector(DetectorConfig(**config))
    model.load_state_dict({k: torch.as_tensor(v.copy()) for k, v in arrays.items()})
    model.eval()
    return model


def train_detector(
    split: DatasetSplit, config: DetectorConfig, seed: int = 0, log=None
) -> tuple[KeyframeDetector, list[dict]]:
    """Teacher-forced training over all windows of the split's pieces."""
    pieces = [p for p in split.pieces if p.tags is not None]
    if not pieces:
        raise ValueError("training split has no tagged pieces")
    windows = [w for p in pieces for w in make_windows(p, h=config.h, w=config.w)]
    torch.manual_seed(seed)
    model = KeyframeDetector(config)
    opt = torch.optim.Adam(model.parameters(), lr=config.lr)
    music, dance, tags, target, valid = _window_tensors(windows)
    n = len(windows)
    rng = np.random.default_rng(seed)
    logs: list[dict] = []
    for epoch in range(config.n_epochs):
        model.train()
        order = rng.permutation(n)
        total = 0.0
        for i in range(0, n, config.batch_size):
            idx = torch.as_tensor(order[i : i + config.batch_size])
            opt.zero_grad()
            probs = model(music[idx], dance[idx], tags[idx])
            loss = wce_loss(probs, target[idx], config.lambda_kf, valid=valid[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        model.eval()
        with torch.no_grad():
            probs = model(music, dance, tags)
            pred = (probs >= 0.5).float() * valid
            pos = target * valid
            tp = float((pred * pos).sum())
            precision = tp / max(float(pred.sum()), 1.0)
            recall = tp / max(float(pos.sum()), 1.0)
        entry = {
            "epoch": epoch,
            "loss": total / n,
            "precision": precision,
            "recall": recall,
        }
        logs.append(entry)
        if log is not None:
            log(entry)
    return model, logs
