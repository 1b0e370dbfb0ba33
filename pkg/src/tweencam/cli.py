"""Command-line pipeline: preprocess, train, synthesize, evaluate, serve.

Raw piece layout for ``preprocess`` (one directory per piece under
``RAW_DIR/train`` and ``RAW_DIR/test``):

- ``dance.ndf`` or ``dance.json``  joint tracks, required
- ``music.wav`` or ``music.ndf``   audio (features extracted) or features
- ``camera.json``                  optional supervision
- ``tags.json``                    optional keyframe tags
- ``meta.json``                    optional {name, song, start, fps}

Outputs are deterministic: manifests carry no timestamps, keys are sorted,
and re-running a command on unchanged inputs writes identical bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np
import torch

from tweencam.audio_features import extract_music_features, load_wav
from tweencam.core import DEFAULT_FPS, KeyframeTags, SequenceBundle, split_long_intervals
from tweencam.detector import DetectorConfig, detect_keyframes, load_detector, save_detector, train_detector
from tweencam.ingest import (
    DatasetSplit,
    entry_pose,
    load_array,
    load_bundle,
    load_camera,
    load_tags,
    save_array,
    save_bundle,
    save_camera,
    stitch_adjacent,
)
from tweencam.metrics import evaluation_report
from tweencam.stage23 import (
    LossWeights,
    Stage23Config,
    load_stage23,
    save_stage23,
    synthesize_camera,
    user_pose_source,
)

MANIFEST_NAME = "manifest.json"
SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    """Aggregate configuration for a full pipeline run."""

    seed: int = 0
    fps: int = DEFAULT_FPS
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    stage23: Stage23Config = field(default_factory=Stage23Config)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path) as f:
            doc = json.load(f)
        det = DetectorConfig(**doc.get("detector", {}))
        s23 = doc.get("stage23", {})
        weights = LossWeights(**s23.pop("weights")) if "weights" in s23 else LossWeights()
        return cls(
            seed=int(doc.get("seed", 0)),
            fps=int(doc.get("fps", DEFAULT_FPS)),
            detector=det,
            stage23=Stage23Config(**s23, weights=weights),
        )

    def to_file(self, path) -> None:
        with open(path, "w") as f:
            json.dump(dataclasses.asdict(self), f, indent=1, sort_keys=True)
            f.write("\n")


def _warn(message: str) -> None:
    click.echo(f"warning: {message}", err=True)


def _log_entry(entry: dict) -> None:
    click.echo(json.dumps(entry, sort_keys=True), err=True)


def _override(config, **updates):
    updates = {k: v for k, v in updates.items() if v is not None}
    return dataclasses.replace(config, **updates) if updates else config


# ---------------------------------------------------------------------------
# raw ingestion
# ---------------------------------------------------------------------------

def _load_raw_piece(piece_dir: Path, fps: int, cache_dir: Path | None = None) -> SequenceBundle:
    meta = {}
    if (piece_dir / "meta.json").exists():
        with open(piece_dir / "meta.json") as f:
            meta = json.load(f)
    fps = int(meta.get("fps", fps))

    dance_path = next((piece_dir / n for n in ("dance.ndf", "dance.json") if (piece_dir / n).exists()), None)
    if dance_path is None:
        raise FileNotFoundError("no dance.ndf or dance.json")
    from tweencam.ingest import _load_dance

    dance = _load_dance(dance_path)

    cache = cache_dir / "music.ndf" if cache_dir is not None else None
    if (piece_dir / "music.ndf").exists():
        music = load_array(piece_dir / "music.ndf").astype(np.float32)
    elif cache is not None and cache.exists():
        music = load_array(cache).astype(np.float32)
    elif (piece_dir / "music.wav").exists():
        y, sr = load_wav(piece_dir / "music.wav")
        music = extract_music_features(y, sr, fps=fps)
        if cache is not None:
            cache.parent.mkdir(parents=True, exist_ok=True)
            save_array(cache, music)
    else:
        raise FileNotFoundError("no music.wav or music.ndf")

    t = min(len(music), len(dance))
    if abs(len(music) - len(dance)) > fps:
        raise ValueError(f"music ({len(music)}) and dance ({len(dance)}) disagree by over a second")
    music, dance = music[:t], dance[:t]

    camera = tags = None
    if (piece_dir / "camera.json").exists():
        camera = load_camera(piece_dir / "camera.json", n_frames=t)
    if (piece_dir / "tags.json").exists():
        tags = load_tags(piece_dir / "tags.json", n_frames=t)

    return SequenceBundle(
        music=music,
        dance=dance,
        camera=camera,
        tags=tags,
        name=str(meta.get("name", piece_dir.name)),
        fps=fps,
        song=meta.get("song"),
        start=meta.get("start"),
    )


@click.group()
def main():
    """Music- and dance-driven camera synthesis pipeline."""
    torch.set_num_threads(1)


@main.command()
@click.argument("raw_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("out_dir", type=click.Path(file_okay=False, path_type=Path))
@click.option("--fps", default=DEFAULT_FPS, show_default=True, help="Frame rate for feature extraction.")
@click.option("--stitch/--no-stitch", default=True, show_default=True, help="Merge adjacent training pieces of the same song.")
def preprocess(raw_dir: Path, out_dir: Path, fps: int, stitch: bool):
    """Extract features from raw pieces and write train/test bundles."""
    manifest = {"schema_version": SCHEMA_VERSION, "fps": fps, "splits": {}}
    for role in ("train", "test"):
        role_dir = raw_dir / role
        piece_dirs = sorted(p for p in role_dir.iterdir() if p.is_dir()) if role_dir.is_dir() else []
        pieces = []
        for piece_dir in piece_dirs:
            try:
                pieces.append(_load_raw_piece(piece_dir, fps, cache_dir=out_dir / "cache" / role / piece_dir.name))
            except Exception as exc:
                _warn(f"skipping {role}/{piece_dir.name}: {exc}")
        if role == "train" and stitch:
            pieces = stitch_adjacent(pieces)
        names = []
        for piece in pieces:
            save_bundle(piece, out_dir / role / piece.name)
            names.append(piece.name)
        manifest["splits"][role] = sorted(names)
        for warning in DatasetSplit(pieces, role=role).validate():
            _warn(warning)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / MANIFEST_NAME, "w") as f:
        json.dump(manifest, f, indent=1, sort_keys=True)
        f.write("\n")
    click.echo(f"wrote {sum(len(v) for v in manifest['splits'].values())} bundles to {out_dir}")


def _load_split(data_dir: Path, role: str) -> DatasetSplit:
    with open(data_dir / MANIFEST_NAME) as f:
        manifest = json.load(f)
    names = manifest["splits"].get(role, [])
    pieces = [load_bundle(data_dir / role / name) for name in names]
    if not pieces:
        raise click.ClickException(f"no {role} bundles listed in {data_dir / MANIFEST_NAME}")
    return DatasetSplit(pieces, role=role)


def _config_options(fn):
    for option in reversed(
        [
            click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="RunConfig JSON file."),
            click.option("--epochs", type=int, default=None, help="Training epochs."),
            click.option("--embed-dim", type=int, default=None),
            click.option("--layers", "n_layers", type=int, default=None),
            click.option("--heads", "n_heads", type=int, default=None),
            click.option("--batch-size", type=int, default=None),
            click.option("--lr", type=float, default=None),
            click.option("--seed", type=int, default=None),
        ]
    ):
        fn = option(fn)
    return fn


@main.command("train-stage1")
@click.argument("data_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("checkpoint", type=click.Path(dir_okay=False, path_type=Path))
@_config_options
@click.option("--lambda-kf", type=float, default=None, help="Positive-class weight in the detection loss.")
def train_stage1(data_dir, checkpoint, config_path, epochs, embed_dim, n_layers, n_heads, batch_size, lr, seed, lambda_kf):
    """Train the keyframe detector on the train split."""
    run = RunConfig.from_file(config_path) if config_path else RunConfig()
    config = _override(
        run.detector,
        n_epochs=epochs,
        embed_dim=embed_dim,
        n_layers=n_layers,
        n_heads=n_heads,
        batch_size=batch_size,
        lr=lr,
        lambda_kf=lambda_kf,
    )
    split = _load_split(data_dir, "train")
    model, logs = train_detector(split, config, seed=seed if seed is not None else run.seed, log=_log_entry)
    save_detector(checkpoint, model)
    last = logs[-1]
    click.echo(f"saved {checkpoint} (loss {last['loss']:.4f}, recall {last['recall']:.3f})")


@main.command("train-stage23")
@click.argument("data_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("checkpoint", type=click.Path(dir_okay=False, path_type=Path))
@_config_options
@click.option("--w-rec", type=float, default=None, help="Reconstruction loss weight.")
@click.option("--w-vel", type=float, default=None, help="Velocity loss weight.")
@click.option("--w-acc", type=float, default=None, help="Acceleration loss weight.")
@click.option("--w-ba", type=float, default=None, help="Body-attention loss weight.")
def train_stage23(data_dir, checkpoint, config_path, epochs, embed_dim, n_layers, n_heads, batch_size, lr, seed, w_rec, w_vel, w_acc, w_ba):
    """Train the keyframe-pose and tween model on the train split."""
    run = RunConfig.from_file(config_path) if config_path else RunConfig()
    weights = _override(run.stage23.weights, lam_rec=w_rec, lam_vel=w_vel, lam_acc=w_acc, lam_ba=w_ba)
    config = _override(
        run.stage23,
        n_epochs=epochs,
        embed_dim=embed_dim,
        n_layers=n_layers,
        n_heads=n_heads,
        batch_size=batch_size,
        lr=lr,
        weights=weights,
    )
    split = _load_split(data_dir, "train")
    from tweencam.stage23 import train_stage23 as run_training

    model, logs = run_training(split, config, seed=seed if seed is not None else run.seed, log=_log_entry)
    save_stage23(checkpoint, model)
    click.echo(f"saved {checkpoint} (loss {logs[-1]['total']:.4f})")


def _resolve_tags(bundle: SequenceBundle, mode: str, stage1, tags_file, poses_file, w: int):
    """Tags plus an optional pose table, per synthesis mode."""
    if mode == "full":
        if stage1 is None:
            raise click.ClickException("--mode full needs --stage1")
        detector = load_detector(stage1)
        return detect_keyframes(bundle, detector), None
    if mode == "tags-given":
        if tags_file is not None:
            tags = load_tags(tags_file, bundle.n_frames)
        elif bundle.tags is not None:
            tags = bundle.tags
        else:
            raise click.ClickException("--mode tags-given needs --tags or a tagged bundle")
        return split_long_intervals(tags.canonicalized(), max_len=w), None
    if mode == "keyframes-given":
        if poses_file is None:
            raise click.ClickException("--mode keyframes-given needs --poses")
        with open(poses_file) as f:
            doc = json.load(f)
        table = {int(e["frame"]): np.array(entry_pose(e), dtype=np.float64) for e in doc["keyframes"]}
        if 0 not in table or bundle.n_frames - 1 not in table:
            raise click.ClickException("keyframe poses must cover the first and last frames")
        tags = KeyframeTags.from_indices(bundle.n_frames, sorted(table), fps=bundle.fps)
        return tags, table
    raise click.ClickException(f"unknown mode {mode!r}")


@main.command()
@click.argument("bundle_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Camera JSON output.")
@click.option("--mode", type=click.Choice(["full", "tags-given", "keyframes-given"]), default="full", show_default=True)
@click.option("--stage1", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Keyframe detector checkpoint.")
@click.option("--stage23", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Pose and tween checkpoint.")
@click.option("--tags", "tags_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Keyframe tags JSON (tags-given).")
@click.option("--poses", "poses_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Keyframe poses JSON (keyframes-given).")
@click.option("--seed", type=int, default=0, show_default=True)
def synthesize(bundle_dir, out_path, mode, stage1, stage23, tags_file, poses_file, seed):
    """Synthesize a camera track for one bundle."""
    torch.manual_seed(seed)
    bundle = load_bundle(bundle_dir)
    model = load_stage23(stage23)
    tags, table = _resolve_tags(bundle, mode, stage1, tags_file, poses_file, model.config.w)
    source = user_pose_source(table) if table is not None else None
    camera = synthesize_camera(bundle, tags, model, pose_source=source)
    save_camera(out_path, camera, fps=bundle.fps)
    click.echo(f"wrote {out_path} ({len(camera)} frames, {len(tags.indices())} keyframes)")


@main.command("eval")
@click.argument("data_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Report JSON output.")
@click.option("--stage1", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Detector checkpoint; omit to reuse ground-truth tags.")
@click.option("--stage23", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), help="Optional per-sequence CSV.")
@click.option("--theta-cut", type=float, default=None, help="Cut threshold; default calibrates on ground truth.")
def evaluate(data_dir, out_path, stage1, stage23, csv_path, theta_cut):
    """Synthesize the test split and report distribution metrics."""
    model = load_stage23(stage23)
    detector = load_detector(stage1) if stage1 else None
    split = _load_split(data_dir, "test")
    items = []
    for piece in split.pieces:
        if piece.camera is None:
            _warn(f"{piece.name}: no ground-truth camera, skipped")
            continue
        if detector is not None:
            tags = detect_keyframes(piece, detector)
        elif piece.tags is not None:
            tags = split_long_intervals(piece.tags, max_len=model.config.w)
        else:
            _warn(f"{piece.name}: no tags and no detector, skipped")
            continue
        pred = synthesize_camera(piece, tags, model)
        items.append((piece.name, pred, piece.camera, piece.dance))
    if len(items) < 2:
        raise click.ClickException("evaluation needs at least 2 test sequences with cameras")
    summary, rows = evaluation_report(items, fps=split.pieces[0].fps, theta_cut=theta_cut)
    with open(out_path, "w") as f:
        json.dump(summary, f, indent=1, sort_keys=True)
        f.write("\n")
    if csv_path:
        with open(csv_path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=["name", "frames", "dmr", "lcd"])
            writer.writeheader()
            writer.writerows(rows)
    click.echo(json.dumps(summary, sort_keys=True))


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--stage23", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--stage1", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Optional detector for untagged bundles.")
@click.option("--data-root", type=click.Path(exists=True, file_okay=False, path_type=Path), help="Directory of bundle directories served by name.")
def serve(port, host, stage23, stage1, data_root):
    """Run the HTTP editing service."""
    import uvicorn

    from tweencam.service import create_app

    app = create_app(
        load_stage23(stage23),
        data_root=data_root,
        detector=load_detector(stage1) if stage1 else None,
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
