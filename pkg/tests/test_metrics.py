import numpy as np
import pytest

from tweencam.metrics import (
    FeatureVec,
    cut_threshold,
    derived_eye,
    diversity_dist,
    dmr,
    evaluation_report,
    fid,
    hard_visibility,
    kinetic_features,
    lcd,
    shot_features,
)


def static_camera(t, rp=(0, 0, 0), rot=(0, 0, 0), dist=5.0, fov=60.0):
    cam = np.zeros((t, 8))
    cam[:, 0:3] = rp
    cam[:, 3:6] = rot
    cam[:, 6] = dist
    cam[:, 7] = fov
    return cam


def centered_dance(t, offset=(0, 0, 0)):
    dance = np.zeros((t, 60, 3))
    dance[:, :, 0] += offset[0]
    dance[:, :, 1] += offset[1]
    dance[:, :, 2] += offset[2]
    return dance


# --- kinetic -----------------------------------------------------------------

def test_kinetic_static_zero():
    f = kinetic_features(static_camera(30))
    assert f.kind == "kinetic" and f.values.shape == (22,)
    assert np.all(f.values == 0)


def test_kinetic_constant_velocity():
    cam = static_camera(30)
    cam[:, 0] = np.arange(30)  # rp x advances 1 unit per frame
    f = kinetic_features(cam).values
    assert f[0] == pytest.approx(1.0)
    # derived eye x channel moves identically (zero rotation)
    assert f[8] == pytest.approx(1.0)
    assert np.all(f[11:] == pytest.approx(0.0))


def test_kinetic_frame_dropping_quadruples_velocity():
    rng = np.random.default_rng(0)
    cam = static_camera(60)
    cam[:, 0] = np.cumsum(rng.uniform(0.5, 1.5, 60))
    full = kinetic_features(cam).values
    dropped = kinetic_features(cam[::2]).values
    assert dropped[0] == pytest.approx(4.0 * full[0], rel=0.2)


def test_kinetic_translation_invariant_in_eye():
    rng = np.random.default_rng(1)
    cam = static_camera(40)
    cam[:, 0:3] = rng.normal(size=(40, 3)).cumsum(axis=0) * 0.1
    shifted = cam.copy()
    shifted[:, 0:3] += np.array([100.0, -50.0, 7.0])
    assert np.allclose(kinetic_features(cam).values, kinetic_features(shifted).values)


def test_kinetic_needs_three_frames():
    with pytest.raises(ValueError):
        kinetic_features(static_camera(2))


def test_derived_eye_matches_convention():
    cam = static_camera(1, rot=(0, np.pi / 2, 0), dist=5.0)
    assert np.allclose(derived_eye(cam)[0], [-5, 0, 0], atol=1e-12)


# --- shot --------------------------------------------------------------------

def test_shot_all_visible():
    t = 30
    cam = static_camera(t)
    dance = centered_dance(t, offset=(0, 0, 2))
    f = shot_features(cam, dance).values
    assert f.shape == (63,)
    assert np.all(f[:60] == 1.0)
    assert f[60] == 0.0
    assert f[61] == pytest.approx(t / 30)
    assert f[62] == pytest.approx(60.0)


def test_shot_single_jump():
    t = 30
    cam = static_camera(t)
    cam[15:, 0] += 10.0  # one 10-unit jump with theta_cut = 1.0
    dance = centered_dance(t, offset=(0, 0, 2))
    f = shot_features(cam, dance, fps=30, theta_cut=1.0).values
    assert f[60] == pytest.approx(1.0 / (t / 30))
    assert f[61] == pytest.approx(t / (2 * 30))


def test_cut_threshold_percentile():
    cams = [static_camera(201)]
    cams[0][:, 0] = np.arange(201) * 0.01
    theta = cut_threshold(cams, percentile=50.0)
    assert theta == pytest.approx(0.01)


# --- fid ---------------------------------------------------------------------

def test_fid_identical_sets_near_zero():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(10, 22))
    assert fid(a, a.copy()) <= 1e-6


def test_fid_unit_gaussian_shift():
    # two-point sets realizing mean 0 and 1 with sample variance exactly 1
    a = np.array([[-2 ** -0.5], [2 ** -0.5]])
    b = a + 1.0
    assert fid(a, b) == pytest.approx(1.0, abs=1e-6)


def test_fid_symmetric_and_nonnegative():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(8, 5))
    b = rng.normal(size=(9, 5)) + 0.3
    assert fid(a, b) == pytest.approx(fid(b, a), rel=1e-9)
    assert fid(a, b) >= 0.0


def test_fid_kind_mismatch():
    ka = [FeatureVec("kinetic", np.zeros(22)), FeatureVec("kinetic", np.ones(22))]
    sb = [FeatureVec("shot", np.zeros(63)), FeatureVec("shot", np.ones(63))]
    with pytest.raises(ValueError, match="kinetic"):
        fid(ka, sb)


def test_fid_needs_two_each():
    with pytest.raises(ValueError):
        fid(np.zeros((1, 4)), np.zeros((5, 4)))


# --- diversity ---------------------------------------------------------------

def test_diversity_identical_zero():
    assert diversity_dist(np.ones((5, 7))) == 0.0


def test_diversity_single_pair():
    a = np.zeros((2, 3))
    a[1, 0] = 2.5
    assert diversity_dist(a) == pytest.approx(2.5)


def test_diversity_collinear_three():
    a = np.array([[0.0], [1.0], [2.0]])
    assert diversity_dist(a) == pytest.approx(4.0 / 3.0)


# --- dmr / lcd ---------------------------------------------------------------

def test_dmr_tracking_root_zero():
    t = 30
    cam = static_camera(t)
    dance = centered_dance(t, offset=(0, 0, 0))  # dancer at the reference point
    assert dmr(cam, dance) == 0.0


def test_dmr_three_of_thirty():
    t = 30
    cam = static_camera(t)
    cam[10:13, 0] = 1000.0  # reference point far from the dancer for 3 frames
    dance = centered_dance(t, offset=(0, 0, 2))
    assert dmr(cam, dance) == pytest.approx(0.1)


def test_lcd_exact_match_zero():
    t = 20
    cam = static_camera(t)
    dance = centered_dance(t, offset=(0, 0, 2))
    assert lcd(cam, cam.copy(), dance) == 0.0


def test_lcd_six_of_sixty():
    t = 20
    wide = static_camera(t, fov=170.0)
    narrow = static_camera(t, fov=40.0)
    dance = centered_dance(t, offset=(0, 0, 5))
    # 6 joints pushed to a vertical angle between the two half-fovs
    dance[:, :6, 1] = 4.5
    mask_w = hard_visibility(wide, dance)
    mask_n = hard_visibility(narrow, dance)
    assert mask_w.sum() == t * 60 and mask_n.sum() == t * 54
    assert lcd(narrow, wide, dance) == pytest.approx(0.1)


def test_lcd_blind_pred_counts_gt_joints():
    t = 10
    gt = static_camera(t)
    blind = static_camera(t, rp=(1000.0, 0, 0))
    dance = centered_dance(t, offset=(0, 0, 2))
    assert lcd(blind, gt, dance) == pytest.approx(1.0)


# --- report ------------------------------------------------------------------

def test_evaluation_report_shape():
    rng = np.random.default_rng(4)
    items = []
    for i in range(3):
        t = 40
        gt = static_camera(t)
        gt[:, 0] = rng.normal(scale=0.05, size=t).cumsum()
        pred = gt + rng.normal(scale=0.01, size=(t, 8))
        pred[:, 6] = np.abs(pred[:, 6])
        pred[:, 7] = np.clip(pred[:, 7], 1, 179)
        dance = centered_dance(t, offset=(0, 0, 2))
        items.append((f"seq{i}", pred, gt, dance))
    summary, rows = evaluation_report(items)
    assert set(summary) == {"fid_k", "fid_s", "dist_k", "dist_s", "dmr", "lcd", "n_sequences"}
    assert summary["n_sequences"] == 3
    assert len(rows) == 3
    assert all(set(r) == {"name", "frames", "dmr", "lcd"} for r in rows)
    assert 0.0 <= summary["dmr"] <= 1.0 and 0.0 <= summary["lcd"] <= 1.0
