"""Removability: does a collision-free escape path off the support exist?"""
from __future__ import annotations

import numpy as np

from ..geom.pose import (Pose, compose, quat_mul, relative_angle, rotvec_to_quat,
                         slerp_rotvec)
from .scene import HangScene
from .settle import SettleConfig

DEFAULT_FORCE_DIRS = np.array([
    [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
])
ROT_WEIGHT = 0.1   # meters of translation equivalent to one radian


def _escaped(scene: HangScene, pose: Pose, radius: float) -> bool:
    return scene.support_gap(pose) > radius


def _line_escape(scene: HangScene, pose: Pose, direction: np.ndarray,
                 radius: float, margin: float, step: float) -> bool:
    """Straight translational sweep; True if it exits cleanly past radius."""
    travel = 0.0
    limit = radius + 0.05
    current = pose
    while travel < limit:
        travel += step
        current = compose(Pose(np.zeros(3), direction * travel), pose)
        if scene.clearance(current) < margin:
            return False
        if _escaped(scene, current, radius):
            return True
    return False


def pose_seed(pose: Pose, base_seed: int) -> int:
    """Deterministic seed derived from a pose, for reproducible re-checks."""
    h = hash((base_seed,) + tuple(np.round(pose.rotation, 9))
             + tuple(np.round(pose.translation, 9)))
    return h & 0x7FFFFFFF


def check_removable(scene: HangScene, stable_pose: Pose,
                    force_dirs: np.ndarray | None = None,
                    cfg: SettleConfig | None = None,
                    max_nodes: int = 1500, seed: int = 0) -> bool:
    """True iff an escape motion to beyond escape_radius exists.

    Straight sweeps along the force directions are tried first; otherwise a
    tree of collision-free rigid motions is grown from the settled pose with
    a fixed node budget.  Budget exhaustion is a conservative "no".
    """
    cfg = cfg or SettleConfig()
    if force_dirs is None:
        force_dirs = DEFAULT_FORCE_DIRS
    radius = cfg.escape_radius
    margin = 0.35 * scene.cell
    step = max(scene.cell, 0.002)

    if _escaped(scene, stable_pose, radius):
        return True
    for d in force_dirs:
        if _line_escape(scene, stable_pose, np.asarray(d, dtype=float),
                        radius, margin, step):
            return True

    # Escape tree over SE(3) around the support.
    rng = np.random.default_rng(seed)
    lo, hi = scene.support.mesh.bounds()
    reach = radius + 0.5 * scene.obj.mesh.bbox_diagonal + 0.05
    box_lo = lo - reach
    box_hi = hi + reach
    ext_step = 0.015

    nodes = [stable_pose]
    trans = [stable_pose.translation]
    quats = [rotvec_to_quat(stable_pose.rotation)]

    # Attempts are bounded too: a tightly locked pose rejects most
    # extensions and must still terminate within the budget.
    for _ in range(3 * max_nodes):
        if len(nodes) >= max_nodes:
            break
        if rng.random() < 0.35:
            base = nodes[rng.integers(len(nodes))]
            d = force_dirs[rng.integers(len(force_dirs))]
            target = Pose(base.rotation,
                          base.translation + d * rng.uniform(0.02, 0.12))
        else:
            base_rot = nodes[rng.integers(len(nodes))].rotation
            wobble = rng.normal(scale=0.4, size=3)
            target = Pose(compose(Pose(wobble), Pose(base_rot)).rotation,
                          rng.uniform(box_lo, box_hi))

        t_arr = np.asarray(trans)
        q_arr = np.asarray(quats)
        tq = rotvec_to_quat(target.rotation)
        ang = 2.0 * np.arccos(np.minimum(1.0, np.abs(q_arr @ tq)))
        dist = np.linalg.norm(t_arr - target.translation, axis=1) + ROT_WEIGHT * ang
        near = nodes[int(np.argmin(dist))]

        d_total = (np.linalg.norm(target.translation - near.translation)
                   + ROT_WEIGHT * relative_angle(target, near))
        if d_total < 1e-9:
            continue
        f = min(1.0, ext_step / d_total)
        new = Pose(slerp_rotvec(near.rotation, target.rotation, f),
                   near.translation + f * (target.translation - near.translation))
        mid = Pose(slerp_rotvec(near.rotation, new.rotation, 0.5),
                   0.5 * (near.translation + new.translation))
        if scene.clearance(mid) < margin or scene.clearance(new) < margin:
            continue
        nodes.append(new)
        trans.append(new.translation)
        quats.append(rotvec_to_quat(new.rotation))
        if _escaped(scene, new, radius):
            return True
    return False
