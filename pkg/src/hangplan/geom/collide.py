"""Exact mesh-mesh collision via BVH pair traversal plus containment."""
from __future__ import annotations

import numpy as np

from .intersect import tri_pairs_intersect
from .pose import Pose, compose, inverse
from .trimesh import TriMesh

_BATCH = 256


def _transformed_boxes(bvh, rot: np.ndarray, trans: np.ndarray):
    """Conservative AABBs of BVH nodes after a rigid transform."""
    center = 0.5 * (bvh.node_min + bvh.node_max)
    extent = 0.5 * (bvh.node_max - bvh.node_min)
    new_center = center @ rot.T + trans
    new_extent = extent @ np.abs(rot).T
    return new_center - new_extent, new_center + new_extent


def mesh_collide(a: TriMesh, pose_a: Pose, b: TriMesh, pose_b: Pose) -> bool:
    """True iff any triangle pair intersects or either mesh sits inside the other."""
    rel = compose(inverse(pose_a), pose_b)      # b-local -> a-local
    rot = rel.matrix
    trans = rel.translation

    bvh_a = a.bvh
    bvh_b = b.bvh
    b_min, b_max = _transformed_boxes(bvh_b, rot, trans)

    tv_b = b.tri_verts @ rot.T + trans

    stack = [(0, 0)]
    pairs_a: list[np.ndarray] = []
    pairs_b: list[np.ndarray] = []
    pending = 0
    while stack:
        na, nb = stack.pop()
        if (np.any(bvh_a.node_min[na] > b_max[nb])
                or np.any(bvh_a.node_max[na] < b_min[nb])):
            continue
        leaf_a = bvh_a.count[na] > 0
        leaf_b = bvh_b.count[nb] > 0
        if leaf_a and leaf_b:
            ta = bvh_a.leaf_triangles(na)
            tb = bvh_b.leaf_triangles(nb)
            ga, gb = np.meshgrid(ta, tb, indexing="ij")
            pairs_a.append(ga.ravel())
            pairs_b.append(gb.ravel())
            pending += ga.size
            if pending >= _BATCH:
                if _any_pair_hit(a.tri_verts, tv_b, pairs_a, pairs_b):
                    return True
                pairs_a.clear()
                pairs_b.clear()
                pending = 0
        elif leaf_a or (not leaf_b and (bvh_b.node_max[nb] - bvh_b.node_min[nb]).max()
                        > (bvh_a.node_max[na] - bvh_a.node_min[na]).max()):
            stack.append((na, bvh_b.left[nb]))
            stack.append((na, bvh_b.right[nb]))
        else:
            stack.append((bvh_a.left[na], nb))
            stack.append((bvh_a.right[na], nb))
    if pending and _any_pair_hit(a.tri_verts, tv_b, pairs_a, pairs_b):
        return True

    # Containment: a representative interior point of each mesh tested for
    # membership in the other catches full-inside configurations that produce
    # no surface crossings.
    seed_a_in_b = inverse(rel).apply(a.interior_seed())
    if b.contains(seed_a_in_b[None])[0]:
        return True
    seed_b_in_a = rel.apply(b.interior_seed())
    return bool(a.contains(seed_b_in_a[None])[0])


def _any_pair_hit(tv_a, tv_b, pairs_a, pairs_b) -> bool:
    ia = np.concatenate(pairs_a)
    ib = np.concatenate(pairs_b)
    return bool(tri_pairs_intersect(tv_a[ia], tv_b[ib]).any())
