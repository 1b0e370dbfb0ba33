"""Editing a synthesized track: move keyframes, pin poses, watch what re-runs.

An editing session wraps one sequence with its tags, a dense camera, and a
version counter. Every mutation re-synthesizes only the intervals it
dirtied and reports them, so an editor UI can splice updates in place. The
``cascade`` policy (default) re-runs everything downstream of the edit
because later intervals condition on the camera history; ``local`` freezes
history for cheap, strictly local tweaks.

Run:  python3 demos/04_editing_session.py
"""

import numpy as np
import torch

from tweencam.editing import EditError, EditSession
from tweencam.stage23 import Stage23Config, Stage23Model, train_stage23
from tweencam.synthetic import synthetic_dataset

torch.set_num_threads(1)
np.set_printoptions(precision=3, suppress=True)

# A briefly trained model keeps the demo output sensible.
train, test = synthetic_dataset(n_train=6, n_test=1, t=240, seed=3)
config = Stage23Config(embed_dim=64, n_layers=1, n_heads=2, dropout=0.0, n_epochs=3, lr=1e-3, batch_size=16)
model, _ = train_stage23(train, config, seed=0)

bundle = test.pieces[0]
session = EditSession(bundle=bundle, model=model, tags=bundle.tags)
info = session.describe()
print(f"session {info['session_id']}: {info['n_frames']} frames, tags {info['tags'][:6]}...")

# --- moving a keyframe ---------------------------------------------------------
tag = info["tags"][2]
changed = session.move_tag(tag, tag + 5, policy="local")
print(f"\nmove {tag} -> {tag + 5} (local): re-ran {changed}")
changed = session.move_tag(tag + 5, tag)  # cascade by default
print(f"move back (cascade):  re-ran {len(changed)} intervals, {changed[:3]}...")

# --- pinning a pose --------------------------------------------------------------
# Pull the camera way back at one keyframe. The edited frame holds the pose
# exactly; neighbors blend toward it from both sides.
frame = session.describe()["tags"][3]
before = session.camera[frame].copy()
wide = np.concatenate([before[0:6], [before[6] + 3.0, 90.0]])
session.edit_pose(frame, wide)
print(f"\npinned frame {frame}:")
print("  before:", before)
print("  after :", session.camera[frame])
print("  approach dist:", session.camera[frame - 3 : frame + 1, 6])

# --- guardrails -------------------------------------------------------------------
# Edits that would break the invariants are rejected before anything re-runs.
for attempt, kwargs in [
    ("remove the opening keyframe", dict(frame=0)),
]:
    try:
        session.remove_tag(**kwargs)
    except EditError as exc:
        print(f"\nrejected ({attempt}): {exc}")

try:
    session.edit_pose(frame + 1, wide)
except EditError as exc:
    print(f"rejected (pose between keyframes): {exc}")

stale = session.version - 1
try:
    session.add_tag(5, version=stale)
except Exception as exc:
    print(f"rejected (stale version {stale}): {exc}")

print(f"\nfinal version {session.describe()['version']}, overrides at {list(session.pose_overrides)}")
