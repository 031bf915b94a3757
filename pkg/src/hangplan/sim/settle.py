"""Quasi-static settling: greedy center-of-mass descent over screw moves."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..geom.pose import Pose, compose, inverse
from .contacts import ContactPair, extract_contacts
from .scene import HangScene


class Outcome(str, Enum):
    STABLE = "stable"
    FELL = "fell"
    PENETRATING = "penetrating"
    NOT_REMOVABLE = "not_removable"


@dataclass(frozen=True)
class SettleConfig:
    gravity_step: float = 0.003      # m per descent move
    max_iters: int = 300
    slide_candidates: int = 26       # signed lattice directions per iteration
    rest_iters: int = 4              # quiet iterations required for stability
    fall_height: float = 0.22        # m of total drop counted as falling off
    escape_radius: float = 0.06      # m of support gap counted as off-support
    rotation_step: float = np.deg2rad(2.0)

    def __post_init__(self):
        if min(self.gravity_step, self.max_iters, self.slide_candidates,
               self.rest_iters, self.fall_height, self.escape_radius) <= 0:
            raise ValueError("all settle parameters must be positive")
        if self.rest_iters >= self.max_iters:
            raise ValueError("rest_iters must be below max_iters")


@dataclass(frozen=True)
class StabilityVerdict:
    outcome: Outcome
    settled_pose: Pose
    contacts: list[ContactPair] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.outcome == Outcome.STABLE


_LATTICE_DIRS = None


def _lattice_directions(count: int) -> np.ndarray:
    """Signed unit directions: 6 axis, 12 face-diagonal, 8 body-diagonal."""
    global _LATTICE_DIRS
    if _LATTICE_DIRS is None:
        dirs = []
        for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1],
                  [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, -1, 0], [1, 0, -1],
                  [0, 1, -1], [1, 1, 1], [1, 1, -1], [1, -1, 1], [-1, 1, 1]):
            a = np.asarray(v, dtype=float)
            a /= np.linalg.norm(a)
            dirs.extend([a, -a])
        _LATTICE_DIRS = np.array(dirs)
    return _LATTICE_DIRS[:count]


def _descent_moves(com: np.ndarray, cfg: SettleConfig) -> list[tuple[float, Pose]]:
    """Candidate rigid moves sorted by how much they lower the mass center.

    Translations along the signed lattice directions, plus small rotations
    about the mass center combined with a gravity drop (pivoting escape
    modes).  Moves that cannot lower the mass center are dropped: the
    acceptance rule is strict descent, so they would never be chosen.
    """
    moves = []
    step = cfg.gravity_step
    for d in _lattice_directions(cfg.slide_candidates):
        if d[2] < -1e-12:
            moves.append((-d[2] * step, Pose(np.zeros(3), d * step), d[2]))
    for axis in range(3):
        for sign in (1.0, -1.0):
            rot = np.zeros(3)
            rot[axis] = sign * cfg.rotation_step
            # Rotate about the mass center, then drop: descent equals step.
            pivot = Pose(rot, com - Pose(rot).apply(com))
            drop = Pose(np.zeros(3), [0.0, 0.0, -step])
            moves.append((step, compose(drop, pivot), -1.0))
    moves.sort(key=lambda m: (-m[0], m[2]))
    return [(m[0], m[1]) for m in moves]


def _batched_clearance(scene: HangScene, poses: list[Pose]) -> np.ndarray:
    """Two-sided clearance of several poses in two stacked SDF queries."""
    o = scene.obj.samples_settle
    s = scene.support.samples_settle
    k = len(poses)
    obj_world = np.concatenate([p.apply(o) for p in poses])
    d1 = scene.support.sdf.query(obj_world).reshape(k, -1).min(axis=1)
    sup_local = np.concatenate([inverse(p).apply(s) for p in poses])
    d2 = scene.obj.sdf.query(sup_local).reshape(k, -1).min(axis=1)
    return np.minimum(d1, d2)


def settle(scene: HangScene, start: Pose, cfg: SettleConfig | None = None,
           contact_radius: float | None = None) -> StabilityVerdict:
    """Greedy energy descent until the object rests, falls, or escapes.

    Candidates are accepted only with clearance above a strictly positive
    margin, so settled poses never interpenetrate the support at mesh level.
    Exhausting the iteration budget while still descending counts as a fall.
    """
    cfg = cfg or SettleConfig()
    margin = 0.5 * scene.cell
    if contact_radius is None:
        contact_radius = 2.0 * scene.cell
    if scene.clearance(start) < -scene.cell:
        return StabilityVerdict(Outcome.PENETRATING, start)

    pose = start
    start_com_z = scene.com_world(start)[2]
    quiet = 0
    for _ in range(cfg.max_iters):
        if start_com_z - scene.com_world(pose)[2] > cfg.fall_height:
            return StabilityVerdict(Outcome.FELL, pose)
        if scene.support_gap(pose) > cfg.escape_radius:
            return StabilityVerdict(Outcome.FELL, pose)
        com = scene.com_world(pose)
        moves = _descent_moves(com, cfg)
        # Free fall is the common case: test the steepest move alone first,
        # then the rest as one batched clearance query.
        accepted = None
        first = compose(moves[0][1], pose)
        if scene.clearance(first) >= margin:
            accepted = first
        else:
            rest = [compose(m, pose) for _, m in moves[1:]]
            clear = _batched_clearance(scene, rest)
            for candidate, c in zip(rest, clear):
                if c >= margin:
                    accepted = candidate
                    break
        if accepted is None:
            # Candidates are deterministic in the pose, so one quiet
            # iteration repeats forever; count it as rest_iters quiet passes.
            quiet += cfg.rest_iters
        else:
            pose = accepted
            quiet = 0
        if quiet >= cfg.rest_iters:
            contacts = extract_contacts(scene, pose, contact_radius)
            if not contacts:
                return StabilityVerdict(Outcome.FELL, pose)
            return StabilityVerdict(Outcome.STABLE, pose, contacts)
    return StabilityVerdict(Outcome.FELL, pose)
