import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tweencam.core import (
    DEFAULT_ASPECT,
    CameraPose,
    DancePoseFrame,
    InvalidPoseError,
    KeyframeTags,
    SequenceBundle,
    interpolate_pose,
    interval_pairs,
    joint_visibility,
    polar_to_eye,
    rotation_matrix,
    split_long_intervals,
    visibility_margin,
)


def make_pose(rp=(0, 0, 0), rot=(0, 0, 0), dist=5.0, fov=60.0):
    return CameraPose(rp=np.array(rp, float), rot=np.array(rot, float), dist=dist, fov=fov)


pose_strategy = st.builds(
    make_pose,
    rp=st.tuples(*[st.floats(-10, 10) for _ in range(3)]),
    rot=st.tuples(*[st.floats(-np.pi, np.pi) for _ in range(3)]),
    dist=st.floats(0.1, 20.0),
    fov=st.floats(10.0, 170.0),
)


# --- pose containers ---------------------------------------------------------

def test_pose_roundtrip_array():
    p = make_pose(rp=(1, 2, 3), rot=(0.1, -0.2, 0.3), dist=4.5, fov=72.0)
    q = CameraPose.from_array(p.as_array())
    assert p == q
    assert p.as_array().dtype == np.float64


def test_pose_validation():
    with pytest.raises(InvalidPoseError):
        make_pose(dist=-1.0)
    with pytest.raises(InvalidPoseError):
        make_pose(fov=0.0)
    with pytest.raises(InvalidPoseError):
        make_pose(fov=180.0)
    with pytest.raises(InvalidPoseError):
        CameraPose(rp=np.array([np.nan, 0, 0]), rot=np.zeros(3), dist=1, fov=60)


def test_tags_canonicalize_and_gaps():
    t = KeyframeTags.from_indices(100, [10, 50])
    assert not t.is_canonical()
    c = t.canonicalized()
    assert list(c.indices()) == [0, 10, 50, 99]
    assert list(c.gaps()) == [10, 40, 49]


def test_tags_reject_bad_values():
    with pytest.raises(ValueError):
        KeyframeTags(tags=np.array([0, 2, 1]))
    with pytest.raises(ValueError):
        KeyframeTags.from_indices(10, [10])


def test_bundle_shape_checks():
    music = np.zeros((5, 35), np.float32)
    dance = np.zeros((5, 60, 3), np.float32)
    b = SequenceBundle(music=music, dance=dance)
    assert b.n_frames == 5
    with pytest.raises(ValueError):
        SequenceBundle(music=music, dance=dance[:4])
    with pytest.raises(ValueError):
        SequenceBundle(music=music, dance=dance, camera=np.zeros((4, 8)))


# --- geometry ----------------------------------------------------------------

def test_eye_zero_rotation():
    cam = polar_to_eye(make_pose(dist=5.0))
    assert np.allclose(cam.eye, [0, 0, -5])
    assert np.allclose(cam.view_dir, [0, 0, 1])
    assert np.allclose(cam.up, [0, 1, 0])
    assert np.allclose(cam.right, [1, 0, 0])


def test_eye_quarter_yaw():
    # yaw pi/2 turns +z into +x, so the eye backs off along -x
    cam = polar_to_eye(make_pose(rot=(0, np.pi / 2, 0), dist=5.0))
    assert np.allclose(cam.eye, [-5, 0, 0], atol=1e-12)
    assert np.allclose(cam.view_dir, [1, 0, 0], atol=1e-12)
    assert np.allclose(cam.up, [0, 1, 0], atol=1e-12)


def test_eye_degenerate_distance():
    cam = polar_to_eye(make_pose(rp=(1, 2, 3), dist=0.0))
    assert np.allclose(cam.eye, [1, 2, 3])
    assert np.allclose(cam.view_dir, [0, 0, 1])


def test_rotation_matrix_orthonormal():
    rng = np.random.default_rng(0)
    for _ in range(20):
        r = rotation_matrix(rng.uniform(-np.pi, np.pi, 3))
        assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
        assert np.isclose(np.linalg.det(r), 1.0)


@settings(max_examples=100, deadline=None)
@given(pose_strategy)
def test_reference_point_on_optical_axis(pose):
    # rp must sit dead center in the frame whenever dist > 0
    margin = visibility_margin(pose, pose.rp)
    v_half = np.radians(pose.fov) / 2
    h_half = np.arctan(DEFAULT_ASPECT * np.tan(v_half))
    assert abs(margin[0] - min(v_half, h_half)) < 1e-6


def test_visibility_boundary_vertical():
    # fov 60 -> half angle 30 deg; points just inside/outside on the vertical edge
    pose = make_pose(dist=5.0, fov=60.0)
    inside = [0.0, np.tan(np.radians(29.9)) * 5.0, 0.0]
    outside = [0.0, np.tan(np.radians(30.1)) * 5.0, 0.0]
    assert joint_visibility(pose, inside).hard[0]
    assert not joint_visibility(pose, outside).hard[0]


def test_visibility_behind_camera():
    pose = make_pose(dist=5.0)
    assert not joint_visibility(pose, [0.0, 0.0, -10.0]).hard[0]
    assert joint_visibility(pose, [0.0, 0.0, -10.0]).mask[0] < 0.01


def test_visibility_at_eye_is_zero():
    pose = make_pose(dist=5.0)
    m = joint_visibility(pose, [0.0, 0.0, -5.0])
    assert not m.hard[0]
    assert m.mask[0] < 1e-10


def test_visibility_soft_matches_hard_away_from_edge():
    rng = np.random.default_rng(1)
    pose = make_pose(dist=5.0, fov=60.0)
    pts = rng.uniform(-8, 8, size=(200, 3))
    margin = visibility_margin(pose, pts)
    soft = joint_visibility(pose, pts).mask
    clear = np.abs(margin) > 0.3
    assert np.array_equal(soft[clear] >= 0.5, margin[clear] >= 0)


def test_visibility_full_frame_shape():
    frame = DancePoseFrame(joints=np.zeros((60, 3)))
    mask = joint_visibility(make_pose(dist=5.0), frame)
    assert mask.mask.shape == (60,)
    assert np.all(mask.hard)


def test_wide_fov_keeps_side_points():
    # horizontal half angle grows with aspect: atan(16/9 * tan(fov/2))
    pose = make_pose(dist=5.0, fov=60.0)
    h_half = np.arctan(DEFAULT_ASPECT * np.tan(np.radians(30.0)))
    x_in = np.tan(h_half - 0.01) * 5.0
    x_out = np.tan(h_half + 0.01) * 5.0
    assert joint_visibility(pose, [x_in, 0.0, 0.0]).hard[0]
    assert not joint_visibility(pose, [x_out, 0.0, 0.0]).hard[0]


# --- interpolation -----------------------------------------------------------

def test_interpolate_endpoints_exact():
    c1 = make_pose(rp=(0.1, 0.2, 0.3), rot=(1, 2, 3), dist=2.0, fov=40.0)
    c2 = make_pose(rp=(-1, 5, 0.7), rot=(0, -1, 0.5), dist=7.0, fov=90.0)
    assert interpolate_pose(c1, c2, 0.0) is c1
    assert interpolate_pose(c1, c2, 1.0) is c2


@settings(max_examples=100, deadline=None)
@given(pose_strategy, pose_strategy, st.floats(0, 1))
def test_interpolate_affine(c1, c2, rho):
    mid = interpolate_pose(c1, c2, rho)
    expect = c1.as_array() + rho * (c2.as_array() - c1.as_array())
    assert np.allclose(mid.as_array(), expect, atol=1e-12)


def test_interpolate_rejects_out_of_range():
    c = make_pose()
    with pytest.raises(ValueError):
        interpolate_pose(c, c, 1.5)
    with pytest.raises(ValueError):
        interpolate_pose(c, c, -0.1)


# --- interval splitting ------------------------------------------------------

def test_split_examples():
    t = split_long_intervals(KeyframeTags.from_indices(151, [0, 150]))
    assert list(t.indices()) == [0, 60, 120, 150]
    t = split_long_intervals(KeyframeTags.from_indices(62, [0, 61]))
    assert list(t.indices()) == [0, 60, 61]
    t = split_long_intervals(KeyframeTags.from_indices(61, [0, 60]))
    assert list(t.indices()) == [0, 60]


def test_split_preserves_existing_keyframes():
    base = KeyframeTags.from_indices(200, [0, 45, 199])
    out = split_long_intervals(base)
    assert set(base.canonicalized().indices()) <= set(out.indices())


@settings(max_examples=100, deadline=None)
@given(
    st.integers(2, 400).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), max_size=12))
    )
)
def test_split_gap_cap_and_idempotence(case):
    n, idx = case
    tags = KeyframeTags.from_indices(n, idx)
    out = split_long_intervals(tags)
    assert out.is_canonical()
    assert np.all(out.gaps() <= 60) if len(out.indices()) > 1 else True
    again = split_long_intervals(out)
    assert np.array_equal(again.tags, out.tags)


def test_interval_pairs_tile_timeline():
    tags = KeyframeTags.from_indices(61, [0, 30, 60])
    pairs = interval_pairs(tags)
    assert pairs == [(0, 30), (30, 60), (60, 61)]
    covered = [f for a, b in pairs for f in range(a, b)]
    assert covered == list(range(61))


def test_interval_pairs_require_canonical():
    with pytest.raises(ValueError):
        interval_pairs(KeyframeTags.from_indices(20, [5]))
