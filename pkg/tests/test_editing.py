import numpy as np
import pytest

from tweencam.core import CameraPose, KeyframeTags, interval_pairs
from tweencam.editing import EditError, EditSession, VersionConflict
from tweencam.stage23 import Stage23Config, Stage23Model

from conftest import TINY, smooth_bundle


@pytest.fixture(scope="module")
def model():
    return Stage23Model(Stage23Config(**TINY))


def make_session(model, t=121, keyframes=(0, 40, 80, 120), seed=3):
    bundle = smooth_bundle(t=t, seed=seed, keyframes=list(keyframes))
    return EditSession(bundle=bundle, model=model, tags=bundle.tags)


def test_session_initial_synthesis_covers_timeline(model):
    s = make_session(model)
    assert s.camera.shape == (121, 8)
    assert np.all(s.camera[:, 7] > 0)  # a real pose landed on every frame
    assert s.version == 0
    assert s.describe()["tags"] == [0, 40, 80, 120]


def test_edit_pose_pins_frame_and_bumps_version(model):
    s = make_session(model)
    pose = CameraPose(rp=np.array([1.0, 2.0, 3.0]), rot=np.zeros(3), dist=4.0, fov=55.0)
    changed = s.edit_pose(40, pose, version=0)
    assert s.version == 1
    np.testing.assert_array_equal(s.camera[40], pose.as_array())
    # cascade re-runs from the interval ending at the edit through the end
    assert changed == [(0, 40), (40, 80), (80, 120), (120, 121)]


def test_edit_pose_untagged_frame_rejected(model):
    s = make_session(model)
    with pytest.raises(EditError):
        s.edit_pose(41, np.concatenate([np.zeros(6), [4.0, 60.0]]))


def test_edit_pose_invalid_pose_rejected(model):
    s = make_session(model)
    bad = np.concatenate([np.zeros(6), [-1.0, 60.0]])  # negative distance
    with pytest.raises(Exception):
        s.edit_pose(40, bad)


def test_version_conflict(model):
    s = make_session(model)
    s.add_tag(20, version=0)
    with pytest.raises(VersionConflict):
        s.add_tag(60, version=0)
    s.add_tag(60, version=1)  # refreshed version goes through
    assert s.describe()["tags"] == [0, 20, 40, 60, 80, 120]


def test_local_policy_touches_only_adjacent_intervals(model):
    s = make_session(model)
    before = s.camera.copy()
    changed = s.edit_pose(40, np.concatenate([np.zeros(6), [4.0, 55.0]]), policy="local")
    assert changed == [(0, 40), (40, 80)]
    np.testing.assert_array_equal(s.camera[80:], before[80:])  # frozen past the edit


def test_add_tag_splits_interval(model):
    s = make_session(model)
    changed = s.add_tag(60, policy="local")
    assert s.describe()["tags"] == [0, 40, 60, 80, 120]
    assert changed == [(40, 60), (60, 80)]


def test_add_duplicate_or_out_of_range_rejected(model):
    s = make_session(model)
    with pytest.raises(EditError):
        s.add_tag(40)
    with pytest.raises(EditError):
        s.add_tag(500)
    with pytest.raises(EditError):
        s.add_tag(-1)


def test_remove_tag_gap_cap_enforced(model):
    s = make_session(model)
    with pytest.raises(EditError):
        s.remove_tag(40)  # would open a gap of 80 > 60
    s.add_tag(20, policy="local")
    s.add_tag(60, policy="local")
    changed = s.remove_tag(40, policy="local")  # now gaps stay at 40
    assert s.describe()["tags"] == [0, 20, 60, 80, 120]
    assert changed == [(20, 60)]


def test_remove_boundary_rejected(model):
    s = make_session(model)
    with pytest.raises(EditError):
        s.remove_tag(0)
    with pytest.raises(EditError):
        s.remove_tag(120)


def test_pins_hold_on_cut_and_terminal_frames(model):
    # 40/41 is a one-frame interval (a cut) and 120 sits in the virtual
    # terminal pair; both degenerate intervals must still honour pins.
    s = make_session(model, keyframes=(0, 40, 41, 80, 120))
    rng = np.random.default_rng(7)
    for frame in (40, 41, 120):
        pose = np.concatenate([rng.normal(size=3), rng.uniform(-0.3, 0.3, 3), [4.0, 55.0]])
        s.edit_pose(frame, pose)
        np.testing.assert_array_equal(s.camera[frame], pose)
    # The pins coexist: re-synthesizing everything keeps all three.
    s.resynthesize_all()
    for frame, pose in sorted(s.pose_overrides.items()):
        np.testing.assert_array_equal(s.camera[frame], pose)


def test_clear_pose_returns_frame_to_model(model):
    s = make_session(model)
    original = s.camera[40].copy()
    s.edit_pose(40, np.concatenate([np.ones(3), np.zeros(3), [5.0, 70.0]]))
    assert not np.array_equal(s.camera[40], original)
    changed = s.clear_pose(40)
    assert changed == [(0, 40), (40, 80), (80, 120), (120, 121)]
    np.testing.assert_array_equal(s.camera[40], original)
    assert 40 not in s.pose_overrides
    with pytest.raises(EditError):
        s.clear_pose(40)  # nothing pinned any more


def test_remove_drops_override(model):
    s = make_session(model)
    s.add_tag(20)
    s.edit_pose(20, np.concatenate([np.zeros(6), [4.0, 50.0]]))
    assert 20 in s.pose_overrides
    s.remove_tag(20)
    assert 20 not in s.pose_overrides


def test_move_tag_carries_override(model):
    s = make_session(model)
    pose = np.concatenate([[0.5, 1.0, -0.5], np.zeros(3), [3.5, 48.0]])
    s.edit_pose(40, pose)
    s.move_tag(40, 45, policy="local")
    assert s.describe()["tags"] == [0, 45, 80, 120]
    assert 40 not in s.pose_overrides
    np.testing.assert_array_equal(s.pose_overrides[45], pose)
    np.testing.assert_array_equal(s.camera[45], pose)


def test_move_validation(model):
    s = make_session(model)
    with pytest.raises(EditError):
        s.move_tag(0, 5)  # boundary immovable
    with pytest.raises(EditError):
        s.move_tag(41, 42)  # not a keyframe
    with pytest.raises(EditError):
        s.move_tag(40, 80)  # destination already tagged
    with pytest.raises(EditError):
        s.move_tag(80, 30)  # would open gap 90 between 30/40-ish layout


def test_move_local_recomputes_both_neighborhoods(model):
    s = make_session(model)
    changed = s.move_tag(40, 50, policy="local")
    # old site 40 and new site 50 both fall inside (0, 50) and (50, 80)
    assert changed == [(0, 50), (50, 80)]


def test_resynthesize_all_is_deterministic(model):
    s = make_session(model)
    first = s.camera.copy()
    changed = s.resynthesize_all()
    assert changed == interval_pairs(s.tags)
    np.testing.assert_array_equal(s.camera, first)
    assert s.version == 1


def test_overrides_respected_on_full_resynthesis(model):
    s = make_session(model)
    pose = np.concatenate([[1.0, 0.0, 2.0], np.zeros(3), [4.5, 62.0]])
    s.edit_pose(80, pose)
    s.resynthesize_all()
    np.testing.assert_array_equal(s.camera[80], pose)


def test_session_splits_wide_initial_gaps(model):
    bundle = smooth_bundle(t=150, seed=9, keyframes=[0, 149])
    s = EditSession(bundle=bundle, model=model, tags=bundle.tags)
    assert s.describe()["tags"] == [0, 60, 120, 149]
