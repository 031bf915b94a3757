"""Pose distance and set-to-set pose loss."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geom.pose import Pose, relative_angle


@dataclass(frozen=True)
class PoseDistanceWeights:
    """Quadratic weights: w_t per squared meter, w_r per squared radian."""

    w_t: float = 1.0
    w_r: float = 1.0

    def __post_init__(self):
        if self.w_t < 0 or self.w_r < 0 or (self.w_t == 0 and self.w_r == 0):
            raise ValueError("weights must be nonnegative and not both zero")


DEFAULT_WEIGHTS = PoseDistanceWeights()


def pose_distance(a: Pose, b: Pose,
                  w: PoseDistanceWeights = DEFAULT_WEIGHTS) -> float:
    """w_t * |t_a - t_b|^2 + w_r * (geodesic rotation angle)^2."""
    dt = a.translation - b.translation
    ang = relative_angle(a, b)
    return float(w.w_t * (dt @ dt) + w.w_r * ang * ang)


def pose_set_loss(pred: list[Pose], truth: list[Pose],
                  w: PoseDistanceWeights = DEFAULT_WEIGHTS) -> float:
    """Bidirectional sum of closest-match distances between two pose sets.

    Every predicted pose is charged its distance to the nearest truth pose,
    and every truth pose its distance to the nearest prediction.
    """
    if not pred or not truth:
        raise ValueError("pose sets must be nonempty")
    d = np.array([[pose_distance(p, t, w) for t in truth] for p in pred])
    return float(d.min(axis=1).sum() + d.min(axis=0).sum())
