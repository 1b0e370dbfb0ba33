import json

import numpy as np
import pytest
from click.testing import CliRunner
from scipy.io import wavfile

from tweencam.cli import RunConfig, main
from tweencam.ingest import load_bundle, load_camera, save_array, save_camera, save_tags
from tweencam.synthetic import synthetic_bundle

runner = CliRunner()


def write_raw_piece(piece_dir, bundle, song, start, music_as_wav=False):
    piece_dir.mkdir(parents=True)
    save_array(piece_dir / "dance.ndf", bundle.dance)
    if music_as_wav:
        sr = 22050
        n = int(round(bundle.n_frames * sr / bundle.fps))
        y = (0.3 * np.sin(2 * np.pi * 220.0 * np.arange(n) / sr) * 32767).astype(np.int16)
        wavfile.write(piece_dir / "music.wav", sr, y)
    else:
        save_array(piece_dir / "music.ndf", bundle.music)
    save_camera(piece_dir / "camera.json", bundle.camera, fps=bundle.fps)
    save_tags(piece_dir / "tags.json", bundle.tags)
    with open(piece_dir / "meta.json", "w") as f:
        json.dump({"song": song, "start": start, "fps": bundle.fps}, f)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Raw tree -> preprocess -> tiny stage-1 and stage-2/3 checkpoints."""
    root = tmp_path_factory.mktemp("cli")
    raw, data = root / "raw", root / "data"
    write_raw_piece(raw / "train" / "p0", synthetic_bundle(t=120, seed=0), "songA", 0)
    write_raw_piece(raw / "train" / "p1", synthetic_bundle(t=120, seed=1), "songA", 120)
    write_raw_piece(raw / "train" / "p2", synthetic_bundle(t=120, seed=2), "songB", 0)
    write_raw_piece(raw / "test" / "q0", synthetic_bundle(t=120, seed=1000), "songC", 0)
    write_raw_piece(raw / "test" / "q1", synthetic_bundle(t=120, seed=1001), "songD", 0, music_as_wav=True)
    (raw / "train" / "broken").mkdir()  # no streams at all

    r = runner.invoke(main, ["preprocess", str(raw), str(data)])
    assert r.exit_code == 0, r.output
    tiny = ["--epochs", "1", "--embed-dim", "32", "--layers", "1", "--heads", "2", "--seed", "0"]
    s1, s23 = root / "stage1.ckpt", root / "stage23.ckpt"
    r = runner.invoke(main, ["train-stage1", str(data), str(s1), *tiny])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["train-stage23", str(data), str(s23), *tiny])
    assert r.exit_code == 0, r.output
    return {"root": root, "raw": raw, "data": data, "stage1": s1, "stage23": s23}


def test_preprocess_layout_and_manifest(workspace):
    data = workspace["data"]
    manifest = json.loads((data / "manifest.json").read_text())
    assert manifest["schema_version"] == 1
    # adjacent same-song train pieces were stitched; the broken piece dropped
    assert manifest["splits"] == {"test": ["q0", "q1"], "train": ["p0+p1", "p2"]}
    merged = load_bundle(data / "train" / "p0+p1")
    assert merged.n_frames == 240
    assert merged.camera is not None and merged.tags is not None


def test_preprocess_warns_about_broken_piece(workspace):
    raw, out = workspace["raw"], workspace["root"] / "data2"
    r = runner.invoke(main, ["preprocess", str(raw), str(out)])
    assert r.exit_code == 0
    assert "skipping train/broken" in r.stderr


def test_preprocess_reruns_byte_identical(workspace):
    raw, out = workspace["raw"], workspace["root"] / "data3"
    runner.invoke(main, ["preprocess", str(raw), str(out)])
    first = (out / "manifest.json").read_bytes()
    music = (out / "test" / "q1" / "music.ndf").read_bytes()
    runner.invoke(main, ["preprocess", str(raw), str(out)])
    assert (out / "manifest.json").read_bytes() == first
    assert (out / "test" / "q1" / "music.ndf").read_bytes() == music


def test_synthesize_full_mode(workspace, tmp_path):
    out = tmp_path / "camera.json"
    r = runner.invoke(
        main,
        [
            "synthesize", str(workspace["data"] / "test" / "q0"),
            "-o", str(out), "--mode", "full",
            "--stage1", str(workspace["stage1"]), "--stage23", str(workspace["stage23"]),
        ],
    )
    assert r.exit_code == 0, r.output
    cam = load_camera(out)
    assert cam.shape == (120, 8)
    assert np.all(cam[:, 6] >= 0) and np.all((cam[:, 7] > 0) & (cam[:, 7] < 180))


def test_synthesize_full_requires_detector(workspace, tmp_path):
    r = runner.invoke(
        main,
        [
            "synthesize", str(workspace["data"] / "test" / "q0"),
            "-o", str(tmp_path / "c.json"), "--mode", "full",
            "--stage23", str(workspace["stage23"]),
        ],
    )
    assert r.exit_code != 0
    assert "--stage1" in r.stderr


def test_synthesize_tags_given_is_reproducible(workspace, tmp_path):
    args = [
        "synthesize", str(workspace["data"] / "test" / "q0"),
        "--mode", "tags-given", "--stage23", str(workspace["stage23"]),
    ]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert runner.invoke(main, [*args, "-o", str(a)]).exit_code == 0
    assert runner.invoke(main, [*args, "-o", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_synthesize_keyframes_given_pins_poses(workspace, tmp_path):
    poses = {
        "fps": 30,
        "keyframes": [
            {"frame": f, "rp": [0.1 * f, 0.0, 0.2], "rot": [0.0, 0.01 * f, 0.0], "dist": 4.0, "fov": 50.0 + f / 10}
            for f in (0, 50, 100, 119)
        ],
    }
    poses_path = tmp_path / "poses.json"
    poses_path.write_text(json.dumps(poses))
    out = tmp_path / "camera.json"
    r = runner.invoke(
        main,
        [
            "synthesize", str(workspace["data"] / "test" / "q0"),
            "-o", str(out), "--mode", "keyframes-given",
            "--stage23", str(workspace["stage23"]), "--poses", str(poses_path),
        ],
    )
    assert r.exit_code == 0, r.output
    cam = load_camera(out)
    for entry in poses["keyframes"]:
        f = entry["frame"]
        expect = [*entry["rp"], *entry["rot"], entry["dist"], entry["fov"]]
        np.testing.assert_array_equal(cam[f], expect)


def test_synthesize_keyframes_given_requires_boundary_poses(workspace, tmp_path):
    poses_path = tmp_path / "poses.json"
    poses_path.write_text(
        json.dumps({"fps": 30, "keyframes": [{"frame": 50, "rp": [0, 0, 0], "rot": [0, 0, 0], "dist": 4, "fov": 50}]})
    )
    r = runner.invoke(
        main,
        [
            "synthesize", str(workspace["data"] / "test" / "q0"),
            "-o", str(tmp_path / "c.json"), "--mode", "keyframes-given",
            "--stage23", str(workspace["stage23"]), "--poses", str(poses_path),
        ],
    )
    assert r.exit_code != 0
    assert "first and last" in r.stderr


def test_eval_writes_report_and_csv(workspace, tmp_path):
    report, rows = tmp_path / "report.json", tmp_path / "rows.csv"
    r = runner.invoke(
        main,
        ["eval", str(workspace["data"]), "-o", str(report), "--csv", str(rows), "--stage23", str(workspace["stage23"])],
    )
    assert r.exit_code == 0, r.output
    summary = json.loads(report.read_text())
    assert set(summary) == {"fid_k", "fid_s", "dist_k", "dist_s", "dmr", "lcd", "n_sequences"}
    assert summary["n_sequences"] == 2
    assert 0.0 <= summary["dmr"] <= 1.0 and 0.0 <= summary["lcd"] <= 1.0
    lines = rows.read_text().strip().splitlines()
    assert lines[0] == "name,frames,dmr,lcd"
    assert len(lines) == 3


def test_serve_help_lists_options(workspace):
    r = runner.invoke(main, ["serve", "--help"])
    assert r.exit_code == 0
    for opt in ("--port", "--stage1", "--stage23", "--data-root"):
        assert opt in r.output


def test_runconfig_roundtrip(tmp_path):
    config = RunConfig(seed=7)
    path = tmp_path / "run.json"
    config.to_file(path)
    assert RunConfig.from_file(path) == config
