"""Heuristic collision estimation from partial clouds and support normals."""
from __future__ import annotations

import numpy as np

from ..geom.cloud import PartialCloud
from ..geom.pose import Pose


def hce_score(object_cloud: PartialCloud, support_cloud: PartialCloud,
              pose: Pose) -> float:
    """Penetration evidence score; higher means more likely colliding.

    For each transformed object point, take its nearest support point and
    the cosine between their offset and the support normal; the score is
    the negative mean cosine.  Points deep inside the support sit behind
    the local surface, so their cosine goes to -1 and the score rises.
    A coincident point pair contributes cosine -1 outright.
    """
    if len(object_cloud) == 0 or len(support_cloud) == 0:
        raise ValueError("clouds must be nonempty")
    obj = pose.apply(object_cloud.points)
    idx, dist = support_cloud.index.nearest_many(obj)
    diff = obj - support_cloud.points[idx]
    normals = support_cloud.normals[idx]
    cos = np.full(len(obj), -1.0)
    ok = dist > 1e-12
    cos[ok] = np.einsum("ij,ij->i", diff[ok], normals[ok]) / dist[ok]
    return float(-np.mean(cos))


def hce_collides(object_cloud: PartialCloud, support_cloud: PartialCloud,
                 pose: Pose, threshold: float = 0.0) -> bool:
    return hce_score(object_cloud, support_cloud, pose) > threshold


def hce_score_brute(object_cloud: PartialCloud, support_cloud: PartialCloud,
                    pose: Pose) -> float:
    """Linear-scan reference implementation (no spatial index)."""
    obj = pose.apply(object_cloud.points)
    total = 0.0
    for p in obj:
        d2 = np.einsum("ij,ij->i", support_cloud.points - p,
                       support_cloud.points - p)
        j = int(np.argmin(d2))
        diff = p - support_cloud.points[j]
        dist = float(np.linalg.norm(diff))
        total += -1.0 if dist <= 1e-12 else float(diff @ support_cloud.normals[j] / dist)
    return -total / len(obj)
