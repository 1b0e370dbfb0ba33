"""A tour of the 8-channel camera pose and its screen geometry.

The camera is parameterized relative to the performer: a pivot point ``rp``
the lens always looks at, Euler rotations (pitch, yaw, roll), the distance
from pivot to the eye, and the vertical field of view in degrees. This
script unpacks one pose into world-space axes and then walks a joint across
the frustum edge to show how visibility responds.

Run:  python3 demos/01_camera_geometry.py
"""

import numpy as np

from tweencam.core import CameraPose, joint_visibility, polar_to_eye, visibility_margin

np.set_printoptions(precision=4, suppress=True)

# --- one pose, unpacked ------------------------------------------------------
# Pivot at the dancer's chest height, a quarter-turn of yaw, 4 units back.
pose = CameraPose(
    rp=np.array([0.0, 1.2, 0.0]),
    rot=np.array([0.1, np.pi / 4, 0.0]),
    dist=4.0,
    fov=55.0,
)
eye = polar_to_eye(pose)
print("pose channels :", pose.as_array())
print("eye position  :", eye.eye)
print("view direction:", eye.view_dir)
print("up vector     :", eye.up)
print("right vector  :", eye.right)

# The eye always sits dist behind the pivot along the view direction, so the
# pivot reprojects to the exact screen center:
print("eye + dist*view == rp:", np.allclose(eye.eye + pose.dist * eye.view_dir, pose.rp))

# --- sliding a joint across the frustum edge --------------------------------
# A 55-degree lens at 16:9 has a wider horizontal half-angle than vertical.
# Move a joint sideways until it falls off screen; the margin crosses zero
# right at the hard visibility flip, and the soft sigmoid mirrors it.
print("\n  offset   margin(rad)   soft   hard")
for offset in np.linspace(0.0, 6.0, 13):
    joint = pose.rp + offset * eye.right
    margin = float(visibility_margin(pose, joint[None])[0])
    soft = joint_visibility(pose, joint[None]).mask[0]
    hard = margin >= 0.0
    print(f"  {offset:6.2f}   {margin:+10.4f}   {soft:5.3f}   {'on' if hard else 'off'}")

# --- a cut is just a different pose ------------------------------------------
# Distance 0 is degenerate (the joint sits at the eye); the margin pins to
# -pi so the frame counts as fully missed rather than exploding.
collapsed = CameraPose(rp=pose.rp, rot=pose.rot, dist=0.0, fov=55.0)
print("\ndegenerate dist=0 margin:", visibility_margin(collapsed, pose.rp))
