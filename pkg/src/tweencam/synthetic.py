"""Deterministic synthetic music-dance-camera sequences for tests and demos.

The scene is a dancer drifting slowly inside a unit box while the camera
reference point shadows the dancer's root, with distance and fov eased
between keyframe values. Keyframes land on musical pulses (every 15 frames,
with occasional adjacent pairs acting as cuts), and the pseudo music features
mark those pulses, so all three stages have learnable structure.
"""

from __future__ import annotations

import numpy as np

from tweencam.core import (
    CAMERA_DIM,
    DEFAULT_FPS,
    MUSIC_DIM,
    N_JOINTS,
    KeyframeTags,
    SequenceBundle,
    interval_pairs,
)
from tweencam.ingest import DatasetSplit

_PULSE = 15
#: one fixed skeleton shared by every synthetic dancer
_SKELETON = np.clip(np.random.default_rng(777).normal(scale=0.25, size=(N_JOINTS, 3)), -0.6, 0.6)


def _smoothstep(x: np.ndarray) -> np.ndarray:
    return x * x * (3.0 - 2.0 * x)


def _root_path(t: int, rng) -> np.ndarray:
    frames = np.arange(t)[:, None]
    amp = np.array([0.8, 0.2, 0.8])
    freq = rng.uniform(0.5, 1.5, 3) * (2.0 * np.pi / 240.0)
    phase = rng.uniform(0, 2.0 * np.pi, 3)
    return amp * np.sin(frames * freq + phase)


def _keyframe_indices(t: int, rng) -> list[int]:
    idx = [0]
    while idx[-1] < t - 1:
        if len(idx) > 1 and idx[-1] - idx[-2] > 1 and rng.uniform() < 0.15:
            step = 1  # an adjacent pair: the shot cut
        else:
            step = int(rng.choice([_PULSE, 2 * _PULSE, 3 * _PULSE]))
        idx.append(min(idx[-1] + step, t - 1))
    return idx


def _music_track(t: int, tag_idx: list[int], rng) -> np.ndarray:
    music = np.zeros((t, MUSIC_DIM), dtype=np.float32)
    frames = np.arange(t)
    phase = frames % _PULSE
    music[:, 0] = np.exp(-phase / 4.0)
    mf_freq = rng.uniform(0.01, 0.2, 20)
    mf_phase = rng.uniform(0, 6.28, 20)
    music[:, 1:21] = np.sin(frames[:, None] * mf_freq + mf_phase)
    bar = (frames // (2 * _PULSE)) % 12
    music[frames, 21 + bar] = 1.0
    music[phase == 0, 33] = 1.0
    music[tag_idx, 34] = 1.0
    return music


def synthetic_bundle(t: int = 240, seed: int = 0, name: str | None = None) -> SequenceBundle:
    """One aligned synthetic sequence with tags and dense ground-truth camera."""
    if t < 2:
        raise ValueError("need at least 2 frames")
    rng = np.random.default_rng(seed)
    frames = np.arange(t)

    root = _root_path(t, rng)
    wobble = 0.08 * np.sin(
        frames[:, None, None] * rng.uniform(0.2, 0.6) + rng.uniform(0, 6.28, (N_JOINTS, 3))
    )
    dance = (root[:, None, :] + _SKELETON[None] + wobble).astype(np.float32)

    tag_idx = _keyframe_indices(t, rng)
    tags = KeyframeTags.from_indices(t, tag_idx)

    poses = {}
    for f in tag_idx:
        poses[f] = np.concatenate(
            [
                root[f] + rng.normal(scale=0.05, size=3),
                rng.uniform(-0.15, 0.15, 3),
                [rng.uniform(3.0, 5.0), rng.uniform(45.0, 65.0)],
            ]
        )
    camera = np.zeros((t, CAMERA_DIM))
    for t1, t2 in interval_pairs(tags):
        c1 = poses[t1]
        c2 = poses.get(t2, c1)
        length = t2 - t1
        ramp = _smoothstep(np.arange(length) / length)
        camera[t1:t2] = c1 + ramp[:, None] * (c2 - c1)

    music = _music_track(t, tag_idx, rng)
    return SequenceBundle(
        music=music,
        dance=dance,
        camera=camera,
        tags=tags,
        name=name or f"synth{seed}",
        fps=DEFAULT_FPS,
        song=f"song{seed}",
        start=0,
    )


def synthetic_dataset(
    n_train: int = 10, n_test: int = 4, t: int = 240, seed: int = 0
) -> tuple[DatasetSplit, DatasetSplit]:
    """Disjoint-seed train and test splits of synthetic sequences."""
    train = DatasetSplit(
        pieces=[synthetic_bundle(t=t, seed=seed + i, name=f"train{i}") for i in range(n_train)],
        role="train",
    )
    test = DatasetSplit(
        pieces=[
            synthetic_bundle(t=t, seed=seed + 1000 + i, name=f"test{i}") for i in range(n_test)
        ],
        role="test",
    )
    return train, test
