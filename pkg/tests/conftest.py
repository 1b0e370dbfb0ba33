import numpy as np
import pytest
import torch

from tweencam.core import KeyframeTags, SequenceBundle


TINY = dict(embed_dim=32, n_layers=1, n_heads=2, dropout=0.0)


@pytest.fixture(autouse=True)
def _single_thread_torch():
    torch.set_num_threads(1)


def smooth_bundle(t=90, seed=0, keyframes=None, name="fixture"):
    """A bundle with gently varying streams and a valid camera track."""
    rng = np.random.default_rng(seed)
    frames = np.arange(t)[:, None]
    music = (np.sin(frames * rng.uniform(0.05, 0.3, 35)) * rng.uniform(0.2, 1.0, 35)).astype(
        np.float32
    )
    base = rng.normal(scale=0.5, size=(60, 3))
    sway = 0.1 * np.sin(frames[:, :, None] * 0.21 + rng.uniform(0, 6.28, (60, 3)))
    dance = (base[None] + sway).astype(np.float32)
    camera = np.zeros((t, 8))
    camera[:, 0:3] = 0.2 * np.sin(frames * np.array([0.03, 0.05, 0.02]))
    camera[:, 3:6] = 0.1 * np.sin(frames * np.array([0.04, 0.07, 0.01]))
    camera[:, 6] = 4.0 + np.sin(frames[:, 0] * 0.05)
    camera[:, 7] = 55.0 + 10.0 * np.sin(frames[:, 0] * 0.02)
    if keyframes is None:
        keyframes = [0, t // 3, 2 * t // 3, t - 1]
    tags = KeyframeTags.from_indices(t, keyframes)
    return SequenceBundle(music=music, dance=dance, camera=camera, tags=tags, name=name)
