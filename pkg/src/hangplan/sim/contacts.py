"""Contact pair extraction and point-cloud contact annotation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geom.cloud import PartialCloud
from ..geom.pose import Pose, identity, inverse
from ..geom.trimesh import closest_points
from .scene import Body, HangScene


@dataclass(frozen=True)
class ContactPair:
    """A touching object/support point pair at a settled pose (world frame)."""

    object_point: np.ndarray
    support_point: np.ndarray
    distance: float

    def __post_init__(self):
        op = np.asarray(self.object_point, dtype=float).reshape(3).copy()
        sp = np.asarray(self.support_point, dtype=float).reshape(3).copy()
        op.setflags(write=False)
        sp.setflags(write=False)
        object.__setattr__(self, "object_point", op)
        object.__setattr__(self, "support_point", sp)


def contact_pairs(a: Body, pose_a: Pose, b: Body, pose_b: Pose,
                  tau: float) -> list[tuple[np.ndarray, np.ndarray, float]]:
    """World-frame near-touching pairs (point on a, point on b, distance).

    Candidates come from both bodies' surface samples against the other
    body's exact surface, then greedy clustering (radius tau on both ends)
    keeps the closest pair per contact region.  The construction is
    symmetric: swapping the bodies swaps each pair's ends.
    """
    raw = []
    for flip, (src, src_pose, dst, dst_pose) in enumerate(
            ((a, pose_a, b, pose_b), (b, pose_b, a, pose_a))):
        world = src_pose.apply(src.samples_dense)
        into_dst = inverse(dst_pose).apply(world)
        near = dst.sdf.query(into_dst) <= tau * 1.5
        if not near.any():
            continue
        d, cp = closest_points(dst.mesh, into_dst[near])
        keep = d <= tau
        src_pts = world[near][keep]
        dst_pts = dst_pose.apply(cp[keep])
        for sp, dp, dist in zip(src_pts, dst_pts, d[keep]):
            pair = (sp, dp) if flip == 0 else (dp, sp)
            raw.append((pair[0], pair[1], float(dist)))
    if not raw:
        return []

    def sym_key(entry):
        ka = tuple(np.round(entry[0], 9))
        kb = tuple(np.round(entry[1], 9))
        return (round(entry[2], 12), min(ka, kb), max(ka, kb))

    raw.sort(key=sym_key)
    picked: list[tuple[np.ndarray, np.ndarray, float]] = []
    pa = np.array([r[0] for r in raw])
    pb = np.array([r[1] for r in raw])
    alive = np.ones(len(raw), dtype=bool)
    for i in range(len(raw)):
        if not alive[i]:
            continue
        picked.append(raw[i])
        both_near = ((np.linalg.norm(pa - pa[i], axis=1) <= tau)
                     & (np.linalg.norm(pb - pb[i], axis=1) <= tau))
        alive &= ~both_near
    return picked


def extract_contacts(scene: HangScene, pose: Pose, tau: float) -> list[ContactPair]:
    """Deduplicated contact pairs at a non-penetrating pose.

    Raises if the pose interpenetrates the support beyond SDF tolerance.
    """
    if scene.clearance(pose) < -scene.cell:
        raise ValueError("cannot extract contacts from a penetrating pose")
    pairs = contact_pairs(scene.obj, pose, scene.support, identity(), tau)
    return [ContactPair(o, s, d) for o, s, d in pairs]


def annotate_cloud_contacts(contacts: list[ContactPair],
                            object_cloud: PartialCloud,
                            support_cloud: PartialCloud,
                            r: float):
    """Per-point contact scores and positive correspondence labels.

    Clouds must be in the same (world) frame as the contacts.  Scores are
    s_i = max_k exp(-||p_i - c_k||^2 / r^2); a pair (u, v) is positive when
    both points lie within r of the same contact's two ends.
    """
    if len(object_cloud) == 0 or len(support_cloud) == 0:
        raise ValueError("clouds must be nonempty")
    s_obj = np.zeros(len(object_cloud))
    s_sup = np.zeros(len(support_cloud))
    pairs: set[tuple[int, int]] = set()
    for c in contacts:
        d_obj = np.linalg.norm(object_cloud.points - c.object_point, axis=1)
        d_sup = np.linalg.norm(support_cloud.points - c.support_point, axis=1)
        np.maximum(s_obj, np.exp(-(d_obj / r) ** 2), out=s_obj)
        np.maximum(s_sup, np.exp(-(d_sup / r) ** 2), out=s_sup)
        us = np.flatnonzero(d_obj <= r)
        vs = np.flatnonzero(d_sup <= r)
        pairs.update((int(u), int(v)) for u in us for v in vs)
    return s_obj, s_sup, sorted(pairs)
