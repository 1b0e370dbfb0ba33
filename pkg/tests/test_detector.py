import numpy as np
import pytest
import torch
import torch.nn as nn

from tweencam.detector import (
    DetectorConfig,
    KeyframeDetector,
    KeyframeProbs,
    detect_keyframes,
    detector_forward,
    train_detector,
    wce_loss,
)
from tweencam.ingest import DatasetSplit, make_windows

from conftest import smooth_bundle

TINY = dict(embed_dim=32, n_layers=1, n_heads=2, dropout=0.0)


def tiny_config(**kw):
    return DetectorConfig(**{**TINY, **kw})


def make_model(seed=0, **kw):
    torch.manual_seed(seed)
    return KeyframeDetector(tiny_config(**kw))


class ConstModel(nn.Module):
    """Stand-in emitting a fixed probability everywhere."""

    def __init__(self, config, value):
        super().__init__()
        self.config = config
        self.value = value

    def forward(self, music, dance, tags):
        return torch.full((music.shape[0], self.config.w), self.value)


# --- loss --------------------------------------------------------------------

def test_wce_hand_values():
    assert float(wce_loss(np.array([0.5]), np.array([1.0]), 5.0)) == pytest.approx(
        5.0 * np.log(2.0), rel=1e-12
    )
    assert float(wce_loss(np.array([0.5, 0.5]), np.array([0.0, 0.0]), 7.0)) == pytest.approx(
        np.log(2.0), rel=1e-12
    )


def test_wce_perfect_prediction_near_zero():
    probs = np.array([1.0, 0.0, 1.0])
    gt = np.array([1.0, 0.0, 1.0])
    assert float(wce_loss(probs, gt, 5.0)) < 1e-6
    assert float(wce_loss(probs, gt, 5.0)) >= 0.0


def test_wce_nonnegative_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = rng.uniform(0, 1, 10)
        k = rng.integers(0, 2, 10).astype(float)
        assert float(wce_loss(p, k, rng.uniform(0.5, 10))) >= 0.0


def test_wce_length_mismatch():
    with pytest.raises(ValueError):
        wce_loss(np.array([0.5, 0.5]), np.array([1.0]), 5.0)


def test_wce_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    p0 = rng.uniform(0.05, 0.95, 8)
    k = rng.integers(0, 2, 8).astype(float)
    lam = 4.0
    p = torch.tensor(p0, dtype=torch.float64, requires_grad=True)
    wce_loss(p, k, lam).backward()
    eps = 1e-6
    for i in range(8):
        hi, lo = p0.copy(), p0.copy()
        hi[i] += eps
        lo[i] -= eps
        fd = (float(wce_loss(hi, k, lam)) - float(wce_loss(lo, k, lam))) / (2 * eps)
        rel = abs(fd - float(p.grad[i])) / max(abs(fd), 1e-12)
        assert rel < 1e-4


def test_wce_accepts_probs_wrapper():
    kp = KeyframeProbs(probs=np.full(4, 0.5))
    assert float(wce_loss(kp, np.zeros(4), 2.0)) == pytest.approx(np.log(2.0), rel=1e-12)


# --- forward -----------------------------------------------------------------

def test_forward_shape_and_range():
    model = make_model()
    b = smooth_bundle(t=100)
    win = next(iter(make_windows(b)))
    out = detector_forward(win, model)
    assert out.probs.shape == (60,)
    assert np.all((out.probs >= 0) & (out.probs <= 1))


def test_forward_ignores_future_tag_slots():
    model = make_model()
    b = smooth_bundle(t=100)
    win = next(iter(make_windows(b)))
    ref = detector_forward(win, model).probs
    win.tag_ctx = win.tag_ctx.copy()
    win.tag_ctx[60:] = 1.0
    poked = detector_forward(win, model).probs
    assert np.array_equal(ref, poked)


def test_forward_deterministic():
    model = make_model()
    b = smooth_bundle(t=100)
    win = next(iter(make_windows(b)))
    a = detector_forward(win, model).probs
    b2 = detector_forward(win, model).probs
    assert np.array_equal(a, b2)


def test_forward_rejects_bad_span():
    model = make_model()
    with pytest.raises(ValueError):
        model(torch.zeros(1, 80, 35), torch.zeros(1, 80, 180), torch.zeros(1, 80))


# --- inference ---------------------------------------------------------------

def test_detect_single_window_length():
    model = make_model()
    b = smooth_bundle(t=60)
    tags = detect_keyframes(b, model)
    assert len(tags) == 60
    assert tags.is_canonical()


def test_detect_constant_zero_model():
    cfg = tiny_config()
    model = ConstModel(cfg, 0.0)
    b = smooth_bundle(t=150)
    tags = detect_keyframes(b, model)
    assert list(tags.indices()) == [0, 60, 120, 149]


def test_detect_gaps_bounded_random_weights():
    for seed in range(3):
        model = make_model(seed=seed)
        b = smooth_bundle(t=200, seed=seed)
        tags = detect_keyframes(b, model)
        assert tags.is_canonical()
        assert np.all(tags.gaps() <= 60)


def test_detect_empty_sequence():
    model = make_model()
    b = smooth_bundle(t=60)
    b.music = b.music[:0]
    b.dance = b.dance[:0]
    b.camera = None
    b.tags = None
    with pytest.raises(ValueError):
        detect_keyframes(b, model)


# --- training ----------------------------------------------------------------

def test_train_loss_decreases():
    split = DatasetSplit(pieces=[smooth_bundle(t=120, seed=s) for s in range(2)], role="train")
    cfg = tiny_config(lr=1e-3, n_epochs=6, batch_size=4)
    model, logs = train_detector(split, cfg, seed=0)
    assert len(logs) == 6
    assert logs[-1]["loss"] < logs[0]["loss"]
    assert 0.0 <= logs[-1]["precision"] <= 1.0
    assert 0.0 <= logs[-1]["recall"] <= 1.0


def test_train_requires_tags():
    b = smooth_bundle(t=90)
    b.tags = None
    with pytest.raises(ValueError):
        train_detector(DatasetSplit(pieces=[b], role="train"), tiny_config())
