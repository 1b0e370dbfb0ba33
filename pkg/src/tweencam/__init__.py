"""Music- and dance-conditioned keyframe camera synthesis."""

from tweencam.core import (
    CAMERA_DIM,
    DEFAULT_ASPECT,
    DEFAULT_FPS,
    MAX_INTERVAL,
    MUSIC_DIM,
    N_JOINTS,
    CameraEye,
    CameraPose,
    DancePoseFrame,
    InvalidPoseError,
    JointMask,
    KeyframeTags,
    MusicFeatureFrame,
    SequenceBundle,
    interpolate_pose,
    interval_pairs,
    joint_visibility,
    polar_to_eye,
    split_long_intervals,
)

__version__ = "0.1.0"

__all__ = [
    "CAMERA_DIM",
    "DEFAULT_ASPECT",
    "DEFAULT_FPS",
    "MAX_INTERVAL",
    "MUSIC_DIM",
    "N_JOINTS",
    "CameraEye",
    "CameraPose",
    "DancePoseFrame",
    "InvalidPoseError",
    "JointMask",
    "KeyframeTags",
    "MusicFeatureFrame",
    "SequenceBundle",
    "interpolate_pose",
    "interval_pairs",
    "joint_visibility",
    "polar_to_eye",
    "split_long_intervals",
    "__version__",
]
