"""Regenerate fixtures/camera_math.json from the authoritative Python math.

The browser client re-implements only the polar->eye conversion; these vectors
pin it to the server implementation. Run from frontend/:

    python3 scripts/make_fixtures.py
"""

import json
from pathlib import Path

import numpy as np

from tweencam.core import CameraPose, polar_to_eye

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "camera_math.json"


def main() -> None:
    rng = np.random.default_rng(20260814)
    cases = []
    for i in range(64):
        pose = CameraPose(
            rp=rng.uniform(-5, 5, 3),
            rot=rng.uniform(-np.pi, np.pi, 3),
            dist=0.0 if i % 16 == 0 else float(rng.uniform(0.0, 12.0)),
            fov=float(rng.uniform(20.0, 120.0)),
        )
        eye = polar_to_eye(pose)
        cases.append(
            {
                "pose": {
                    "rp": pose.rp.tolist(),
                    "rot": pose.rot.tolist(),
                    "dist": pose.dist,
                    "fov": pose.fov,
                },
                "eye": eye.eye.tolist(),
                "view_dir": eye.view_dir.tolist(),
                "up": eye.up.tolist(),
                "right": eye.right.tolist(),
            }
        )
    OUT.write_text(json.dumps({"cases": cases}, indent=1) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
