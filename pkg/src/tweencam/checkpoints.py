"""Single-file model checkpoints: a zip of raw arrays plus a JSON manifest.

The manifest records a format version, the model kind, its config, and the
name/shape/dtype of every parameter array; payloads are little-endian raw
bytes. Loading reconstructs numpy arrays exactly.
"""

from __future__ import annotations

import dataclasses
import io
import json
import zipfile

import numpy as np

FORMAT_VERSION = 1


def _config_dict(config) -> dict:
    if dataclasses.is_dataclass(config):
        return dataclasses.asdict(config)
    return dict(config)


def save_checkpoint(path, kind: str, config, arrays: dict[str, np.ndarray]) -> None:
    manifest = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "config": _config_dict(config),
        "arrays": {},
    }
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for i, (name, arr) in enumerate(sorted(arrays.items())):
            a = np.asarray(arr)
            fname = f"arrays/{i:04d}.bin"
            manifest["arrays"][name] = {
                "file": fname,
                "shape": list(a.shape),
                "dtype": str(a.dtype),
            }
            le = a.astype(a.dtype.newbyteorder("<"), copy=False)
            zf.writestr(fname, le.tobytes())
        zf.writestr("manifest.json", json.dumps(manifest, indent=1, sort_keys=True))


def load_checkpoint(path) -> tuple[str, dict, dict[str, np.ndarray]]:
    with zipfile.ZipFile(path) as zf:
        manifest = json.loads(zf.read("manifest.json"))
        if manifest.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint version {manifest.get('format_version')}")
        arrays = {}
        for name, info in manifest["arrays"].items():
            raw = zf.read(info["file"])
            dtype = np.dtype(info["dtype"]).newbyteorder("<")
            arr = np.frombuffer(raw, dtype=dtype).reshape(info["shape"])
            arrays[name] = arr.astype(np.dtype(info["dtype"]), copy=False)
    return manifest["kind"], manifest["config"], arrays
