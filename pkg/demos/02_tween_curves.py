"""How raw network outputs become a monotone blending curve.

Stage 3 emits one unconstrained value per frame of an interval. Four fixed
steps turn those into interpolation weights that are non-decreasing and hit
0 and 1 exactly, no matter what the network said:

  1. shift by the minimum            -> non-negative increments
  2. running sum                     -> non-decreasing curve
  3. anchor and divide by the span   -> exact 0..1 endpoints
  4. flat spans fall back to a straight line

Run:  python3 demos/02_tween_curves.py
"""

import numpy as np

from tweencam.core import CameraPose
from tweencam.stage23 import monotone_normalize, reconstruct_interval

np.set_printoptions(precision=3, suppress=True)


def sparkline(values):
    blocks = " .:-=+*#%@"
    lo, hi = float(np.min(values)), float(np.max(values))
    span = (hi - lo) or 1.0
    return "".join(blocks[int((v - lo) / span * (len(blocks) - 1))] for v in values)


# --- the construction, step by step ------------------------------------------
raw = np.array([0.2, -0.1, 0.3, 0.1, -0.4, 0.6, 0.0, 0.2])
breve, cum, rho = monotone_normalize(raw)
print("raw deltas :", raw)
print("shifted    :", breve)
print("running sum:", cum)
print("normalized :", rho)
print("monotone   :", bool(np.all(np.diff(rho) >= 0)), "| endpoints:", rho[0], rho[-1])

# --- what different shapes feel like -----------------------------------------
# Large early deltas give an ease-out; large late deltas an ease-in; a flat
# vector degrades to linear; a single spike approximates a cut.
shapes = {
    "ease-out": np.linspace(1.0, 0.0, 24),
    "ease-in": np.linspace(0.0, 1.0, 24),
    "linear (flat fallback)": np.zeros(24),
    "hold then cut": np.concatenate([np.zeros(23), [5.0]]),
}
print()
for name, delta in shapes.items():
    _, _, curve = monotone_normalize(delta)
    print(f"  {name:24s} {sparkline(curve)}")

# --- driving actual camera channels ------------------------------------------
# One shared curve blends all 8 channels between the interval's endpoint
# poses, so channels never fight each other (no jitter, no overshoot).
c1 = CameraPose(rp=np.zeros(3), rot=np.zeros(3), dist=3.0, fov=40.0)
c2 = CameraPose(rp=np.array([1.0, 0.0, 0.5]), rot=np.array([0.0, 0.6, 0.0]), dist=5.0, fov=65.0)
_, _, rho = monotone_normalize(np.linspace(1.0, 0.0, 10))
frames = reconstruct_interval(c1.as_array(), c2.as_array(), rho)
print("\nfov channel under the ease-out curve:")
print(" ", frames[:, 7])
print("total variation equals the endpoint gap:",
      float(np.abs(np.diff(frames[:, 7])).sum()), "==", abs(c2.fov - c1.fov))
