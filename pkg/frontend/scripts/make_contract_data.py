"""Stage a throwaway data root for the frontend contract tests.

Writes one synthetic bundle and one untrained (but fully functional) camera
checkpoint into the directory given as argv[1], then prints where everything
landed as JSON on stdout.
"""

import json
import sys
from pathlib import Path

import torch

from tweencam.ingest import save_bundle
from tweencam.stage23 import Stage23Config, Stage23Model, save_stage23
from tweencam.synthetic import synthetic_bundle


def main() -> None:
    out = Path(sys.argv[1])
    bundles = out / "bundles"
    bundles.mkdir(parents=True, exist_ok=True)

    bundle = synthetic_bundle(t=121, seed=4, name="clip")
    save_bundle(bundle, bundles / "clip")

    torch.manual_seed(0)
    model = Stage23Model(Stage23Config(embed_dim=32, n_layers=1, n_heads=2, dropout=0.0))
    ckpt = out / "stage23.ckpt"
    save_stage23(ckpt, model)

    print(
        json.dumps(
            {
                "data_root": str(bundles),
                "ckpt": str(ckpt),
                "bundle": "clip",
                "n_frames": bundle.n_frames,
                "tags": [int(i) for i in bundle.tags.indices()],
            }
        )
    )


if __name__ == "__main__":
    main()
