"""Ground-truth stable hanging pose search by propose-settle-verify."""
from __future__ import annotations

import numpy as np

from ..geom.pose import Pose, compose, random_rotvec
from ..match.metrics import DEFAULT_WEIGHTS, pose_distance
from ..sim.removal import check_removable, pose_seed
from ..sim.scene import HangScene
from ..sim.settle import SettleConfig, settle
from .families import Scene

DEDUP_DISTANCE = 0.05   # pose-distance threshold for near-duplicate hangs


def _align_rotation(from_dir: np.ndarray, to_dir: np.ndarray) -> np.ndarray:
    """Axis-angle rotation taking one unit direction onto another."""
    c = float(np.clip(from_dir @ to_dir, -1.0, 1.0))
    axis = np.cross(from_dir, to_dir)
    n = np.linalg.norm(axis)
    if n < 1e-12:
        if c > 0.0:
            return np.zeros(3)
        helper = np.array([1.0, 0.0, 0.0])
        if abs(from_dir[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        axis = np.cross(from_dir, helper)
        return axis / np.linalg.norm(axis) * np.pi
    return axis / n * np.arccos(c)


def sample_start_pose(scene: Scene, rng: np.random.Generator,
                      shell_radius: float = 0.02) -> Pose:
    """Proposal: put the object's hang feature near a random point of the
    support's hang segment.

    Half the proposals use a fully random orientation; the other half align
    the object's threading axis with the segment (random spin and a little
    wobble), which is what makes narrow holes reachable at all.
    """
    t = rng.uniform()
    seg_dir = scene.hang_segment[1] - scene.hang_segment[0]
    anchor = scene.hang_segment[0] + t * seg_dir
    seg_dir = seg_dir / np.linalg.norm(seg_dir)
    offset = rng.normal(size=3)
    offset *= rng.uniform(0.0, shell_radius) / np.linalg.norm(offset)
    if rng.random() < 0.5:
        rot = random_rotvec(rng)
    else:
        align = Pose(_align_rotation(scene.feature_axis, seg_dir))
        spin = Pose(seg_dir * rng.uniform(0.0, 2.0 * np.pi))
        wobble = Pose(rng.normal(scale=np.deg2rad(12.0), size=3))
        rot = compose(wobble, compose(spin, align)).rotation
    target = anchor + offset
    return Pose(rot, target - Pose(rot).apply(scene.object_feature))


def sample_hang_poses(scene: Scene, sim: HangScene, n_samples: int,
                      rng_seed: int, cfg: SettleConfig | None = None,
                      max_keep: int = 8,
                      dedup_distance: float = DEDUP_DISTANCE) -> list[Pose]:
    """Stable AND removable hanging poses found from n_samples proposals.

    Settled duplicates (pose distance below dedup_distance) are collapsed
    before the more expensive removability check.  May return an empty list.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    cfg = cfg or SettleConfig()
    rng = np.random.default_rng(rng_seed)
    margin = 0.5 * sim.cell

    settled: list[Pose] = []
    for _ in range(n_samples):
        start = sample_start_pose(scene, rng)
        if sim.clearance(start) < margin:
            continue
        verdict = settle(sim, start, cfg)
        if not verdict.stable:
            continue
        pose = verdict.settled_pose
        if any(pose_distance(pose, p, DEFAULT_WEIGHTS) < dedup_distance
               for p in settled):
            continue
        settled.append(pose)

    kept: list[Pose] = []
    for pose in settled:
        if len(kept) >= max_keep:
            break
        if check_removable(sim, pose, cfg=cfg, seed=pose_seed(pose, rng_seed)):
            kept.append(pose)
    return kept
