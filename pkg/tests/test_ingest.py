import json

import numpy as np
import pytest

from tweencam.core import KeyframeTags, SequenceBundle
from tweencam.ingest import (
    DatasetSplit,
    densify_keyframes,
    load_array,
    load_bundle,
    load_camera,
    make_windows,
    save_array,
    save_bundle,
    save_camera,
    stitch_adjacent,
)


def make_bundle(t=120, name="b", song=None, start=None, with_camera=True, with_tags=True, seed=0):
    rng = np.random.default_rng(seed)
    music = rng.normal(size=(t, 35)).astype(np.float32)
    dance = rng.normal(size=(t, 60, 3)).astype(np.float32)
    camera = None
    if with_camera:
        camera = np.concatenate(
            [
                rng.normal(size=(t, 6)),
                rng.uniform(1, 5, size=(t, 1)),
                rng.uniform(30, 90, size=(t, 1)),
            ],
            axis=1,
        )
    tags = KeyframeTags.from_indices(t, [0, t // 2, t - 1]) if with_tags else None
    return SequenceBundle(
        music=music, dance=dance, camera=camera, tags=tags, name=name, song=song, start=start
    )


# --- binary arrays -----------------------------------------------------------

def test_array_roundtrip_bitexact(tmp_path):
    rng = np.random.default_rng(3)
    arr = rng.normal(size=(7, 60, 3)).astype(np.float32)
    p = tmp_path / "a.ndf"
    save_array(p, arr)
    back = load_array(p)
    assert back.dtype == np.float32
    assert np.array_equal(back.view(np.uint32), arr.view(np.uint32))


def test_array_bad_magic(tmp_path):
    p = tmp_path / "bad.ndf"
    p.write_bytes(b"XXXX" + b"\x00" * 16)
    with pytest.raises(ValueError, match="magic"):
        load_array(p)


def test_array_truncated_payload(tmp_path):
    p = tmp_path / "a.ndf"
    save_array(p, np.ones((4, 4), np.float32))
    data = p.read_bytes()
    p.write_bytes(data[:-4])
    with pytest.raises(ValueError, match="payload"):
        load_array(p)


def test_array_rejects_nonfinite(tmp_path):
    with pytest.raises(ValueError):
        save_array(tmp_path / "x.ndf", np.array([np.inf], np.float32))


# --- camera files ------------------------------------------------------------

def test_camera_roundtrip_bitexact(tmp_path):
    rng = np.random.default_rng(5)
    cam = np.concatenate(
        [rng.normal(size=(9, 6)), rng.uniform(0.5, 9, (9, 1)), rng.uniform(20, 160, (9, 1))], axis=1
    )
    p = tmp_path / "camera.json"
    save_camera(p, cam)
    back = load_camera(p, n_frames=9)
    assert np.array_equal(back, cam)


def test_densify_linear_and_constant_tail():
    entries = [
        {"frame": 0, "rp": [0, 0, 0], "rot": [0, 0, 0], "dist": 2.0, "fov": 40.0},
        {"frame": 4, "rp": [4, 0, 0], "rot": [0, 0, 0], "dist": 6.0, "fov": 80.0},
    ]
    cam = densify_keyframes(entries, n_frames=7)
    assert np.allclose(cam[0], [0, 0, 0, 0, 0, 0, 2, 40])
    assert np.allclose(cam[2], [2, 0, 0, 0, 0, 0, 4, 60])
    # frames at and after the last keyframe hold its pose
    for f in (4, 5, 6):
        assert np.allclose(cam[f], [4, 0, 0, 0, 0, 0, 6, 80])


def test_densify_stored_ramp_oracle():
    entries = [
        {"frame": 0, "rp": [0, 0, 0], "rot": [0, 0, 0], "dist": 2.0, "fov": 40.0,
         "ramp": [0.0, 0.1, 0.5, 0.9]},
        {"frame": 4, "rp": [8, 0, 0], "rot": [0, 0, 0], "dist": 2.0, "fov": 40.0},
    ]
    cam = densify_keyframes(entries, n_frames=5)
    # frame-by-frame evaluation of the stored ramp against hand arithmetic
    assert np.allclose(cam[:, 0], [0.0, 0.8, 4.0, 7.2, 8.0])


def test_densify_rejects_bad_ramp_length():
    entries = [
        {"frame": 0, "rp": [0, 0, 0], "rot": [0, 0, 0], "dist": 2, "fov": 40, "ramp": [0.0]},
        {"frame": 3, "rp": [1, 0, 0], "rot": [0, 0, 0], "dist": 2, "fov": 40},
    ]
    with pytest.raises(ValueError, match="ramp"):
        densify_keyframes(entries, n_frames=4)


def test_load_camera_keyframe_form(tmp_path):
    doc = {
        "fps": 30,
        "keyframes": [
            {"frame": 0, "rp": [0, 1, 0], "rot": [0, 0, 0], "dist": 3.0, "fov": 50.0},
            {"frame": 2, "rp": [2, 1, 0], "rot": [0, 0, 0], "dist": 3.0, "fov": 50.0},
        ],
    }
    p = tmp_path / "camera.json"
    p.write_text(json.dumps(doc))
    cam = load_camera(p, n_frames=4)
    assert cam.shape == (4, 8)
    assert np.allclose(cam[:, 0], [0, 1, 2, 2])


# --- bundles -----------------------------------------------------------------

def test_bundle_roundtrip_bitexact(tmp_path):
    b = make_bundle(t=50, name="piece", song="songA", start=100)
    save_bundle(b, tmp_path / "piece")
    back = load_bundle(tmp_path / "piece")
    assert np.array_equal(back.music.view(np.uint32), b.music.view(np.uint32))
    assert np.array_equal(back.dance.view(np.uint32), b.dance.view(np.uint32))
    assert np.array_equal(back.camera, b.camera)
    assert np.array_equal(back.tags.tags, b.tags.tags)
    assert (back.name, back.song, back.start, back.fps) == ("piece", "songA", 100, 30)


def test_bundle_optional_streams_absent(tmp_path):
    b = make_bundle(t=30, with_camera=False, with_tags=False)
    save_bundle(b, tmp_path / "b")
    assert not (tmp_path / "b" / "camera.json").exists()
    back = load_bundle(tmp_path / "b")
    assert back.camera is None and back.tags is None


def test_bundle_length_mismatch_fails(tmp_path):
    b = make_bundle(t=40)
    save_bundle(b, tmp_path / "b")
    save_array(tmp_path / "b" / "music.ndf", np.zeros((39, 35), np.float32))
    with pytest.raises(ValueError, match="frames"):
        load_bundle(tmp_path / "b")


# --- stitching ---------------------------------------------------------------

def test_stitch_adjacent_merges():
    a = make_bundle(t=60, name="a", song="s", start=0, seed=1)
    b = make_bundle(t=40, name="b", song="s", start=60, seed=2)
    out = stitch_adjacent([a, b])
    assert len(out) == 1
    merged = out[0]
    assert merged.n_frames == 100
    assert np.array_equal(merged.music[:60], a.music)
    assert np.array_equal(merged.music[60:], b.music)
    assert merged.tags.is_canonical()
    assert merged.start == 0


def test_stitch_gap_and_other_song_pass_through():
    a = make_bundle(t=60, name="a", song="s", start=0)
    b = make_bundle(t=60, name="b", song="s", start=130)
    c = make_bundle(t=60, name="c", song="other", start=60)
    out = stitch_adjacent([a, b, c])
    assert sorted(p.name for p in out) == ["a", "b", "c"]


def test_stitch_overlap_is_error():
    a = make_bundle(t=60, name="a", song="s", start=0)
    b = make_bundle(t=60, name="b", song="s", start=30)
    with pytest.raises(ValueError, match="overlap"):
        stitch_adjacent([a, b])


def test_stitch_preserves_total_frames():
    pieces = [
        make_bundle(t=60, name=f"p{i}", song="s", start=60 * i, seed=i) for i in range(4)
    ]
    out = stitch_adjacent(pieces)
    assert len(out) == 1
    assert out[0].n_frames == 240


# --- windows -----------------------------------------------------------------

def test_windows_positions_and_padding():
    b = make_bundle(t=120)
    wins = list(make_windows(b, h=60, w=60, stride=60))
    assert [w.t for w in wins] == [0, 60]
    w0 = wins[0]
    assert np.all(w0.music_ctx[:60] == 0)
    assert np.all(w0.dance_ctx[:60] == 0)
    assert np.array_equal(w0.music_ctx[60:], b.music[:60])
    w1 = wins[1]
    assert np.array_equal(w1.tag_ctx[:60], b.tags.tags[:60].astype(np.float32))
    assert np.array_equal(w1.camera_ctx[:60], b.camera[:60])


def test_windows_future_slots_always_zero():
    b = make_bundle(t=180)
    for w in make_windows(b):
        assert np.all(w.tag_ctx[60:] == 0)
        assert np.all(w.camera_ctx[60:] == 0)


def test_windows_cover_each_frame_once():
    b = make_bundle(t=150)
    covered = []
    for w in make_windows(b, h=60, w=60):
        covered.extend(range(w.t, w.t + w.future_valid))
    assert covered == list(range(150))


def test_window_targets_match_tags():
    b = make_bundle(t=90)
    wins = list(make_windows(b))
    assert np.array_equal(wins[0].target_tags, b.tags.tags[:60].astype(np.float32))
    # second window: 30 real frames then zero padding
    assert np.array_equal(wins[1].target_tags[:30], b.tags.tags[60:].astype(np.float32))
    assert np.all(wins[1].target_tags[30:] == 0)
    assert wins[1].future_valid == 30


# --- splits ------------------------------------------------------------------

def test_split_role_validation():
    with pytest.raises(ValueError):
        DatasetSplit(pieces=[], role="dev")


def test_split_length_warnings():
    short = make_bundle(t=100, name="short")
    ok = make_bundle(t=20 * 30, name="ok")
    warns = DatasetSplit(pieces=[short, ok], role="test").validate()
    assert len(warns) == 1 and "short" in warns[0]
    assert DatasetSplit(pieces=[short], role="train").validate() == []
