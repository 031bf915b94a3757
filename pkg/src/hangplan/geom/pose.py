"""Rigid transforms stored as axis-angle rotation plus translation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


def canonicalize_rotvec(r: np.ndarray) -> np.ndarray:
    """Reduce an axis-angle vector so its magnitude lies in [0, pi].

    An angle above pi is re-expressed as (2pi - angle) about the negated
    axis.  At exactly pi the sign is fixed so the first nonzero component
    is positive, keeping the representation unique.
    """
    r = np.asarray(r, dtype=float).reshape(3).copy()
    angle = float(np.linalg.norm(r))
    if angle < _EPS:
        return np.zeros(3)
    axis = r / angle
    angle = angle % (2.0 * np.pi)
    if angle > np.pi:
        angle = 2.0 * np.pi - angle
        axis = -axis
    if abs(angle - np.pi) < 1e-12:
        for c in axis:
            if abs(c) > _EPS:
                if c < 0.0:
                    axis = -axis
                break
    return axis * angle


def rotvec_to_matrix(r: np.ndarray) -> np.ndarray:
    """Rodrigues formula: axis-angle vector to 3x3 rotation matrix."""
    r = np.asarray(r, dtype=float).reshape(3)
    angle = float(np.linalg.norm(r))
    if angle < _EPS:
        return np.eye(3)
    axis = r / angle
    kx, ky, kz = axis
    k_cross = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
    return np.eye(3) + np.sin(angle) * k_cross + (1.0 - np.cos(angle)) * (k_cross @ k_cross)


def matrix_to_rotvec(m: np.ndarray) -> np.ndarray:
    """Rotation matrix to canonical axis-angle via quaternion extraction."""
    m = np.asarray(m, dtype=float)
    # Shepperd's method: pick the largest of (w, x, y, z) for stability.
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    cand = np.array([tr, m[0, 0], m[1, 1], m[2, 2]])
    i = int(np.argmax(cand))
    if i == 0:
        s = np.sqrt(max(tr + 1.0, 0.0)) * 2.0
        q = np.array([0.25 * s,
                      (m[2, 1] - m[1, 2]) / s,
                      (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    elif i == 1:
        s = np.sqrt(max(1.0 + m[0, 0] - m[1, 1] - m[2, 2], 0.0)) * 2.0
        q = np.array([(m[2, 1] - m[1, 2]) / s,
                      0.25 * s,
                      (m[0, 1] + m[1, 0]) / s,
                      (m[0, 2] + m[2, 0]) / s])
    elif i == 2:
        s = np.sqrt(max(1.0 + m[1, 1] - m[0, 0] - m[2, 2], 0.0)) * 2.0
        q = np.array([(m[0, 2] - m[2, 0]) / s,
                      (m[0, 1] + m[1, 0]) / s,
                      0.25 * s,
                      (m[2, 1] + m[1, 2]) / s])
    else:
        s = np.sqrt(max(1.0 + m[2, 2] - m[0, 0] - m[1, 1], 0.0)) * 2.0
        q = np.array([(m[1, 0] - m[0, 1]) / s,
                      (m[0, 2] + m[2, 0]) / s,
                      (m[2, 1] + m[1, 2]) / s,
                      0.25 * s])
    return quat_to_rotvec(q)


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def rotvec_to_quat(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(3)
    angle = float(np.linalg.norm(r))
    if angle < _EPS:
        return np.array([1.0, 0.0, 0.0, 0.0])
    axis = r / angle
    half = 0.5 * angle
    return np.concatenate([[np.cos(half)], np.sin(half) * axis])


def quat_to_rotvec(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float) / np.linalg.norm(q)
    if q[0] < 0.0:
        q = -q
    sin_half = float(np.linalg.norm(q[1:]))
    if sin_half < _EPS:
        return np.zeros(3)
    angle = 2.0 * np.arctan2(sin_half, q[0])
    return canonicalize_rotvec(q[1:] / sin_half * angle)


@dataclass(frozen=True)
class Pose:
    """SE(3) transform: canonical axis-angle rotation and translation (m)."""

    rotation: np.ndarray = field(default_factory=lambda: np.zeros(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        rot = canonicalize_rotvec(self.rotation)
        trans = np.asarray(self.translation, dtype=float).reshape(3).copy()
        rot.setflags(write=False)
        trans.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", trans)

    @property
    def matrix(self) -> np.ndarray:
        return rotvec_to_matrix(self.rotation)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform an (N, 3) array of points (or a single 3-vector)."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix.T + self.translation

    def apply_vectors(self, vectors: np.ndarray) -> np.ndarray:
        """Rotate direction vectors; translation does not apply."""
        return np.asarray(vectors, dtype=float) @ self.matrix.T

    def angle(self) -> float:
        return float(np.linalg.norm(self.rotation))


def identity() -> Pose:
    return Pose()


def compose(a: Pose, b: Pose) -> Pose:
    """Pose applying b first, then a: x -> a(b(x))."""
    q = quat_mul(rotvec_to_quat(a.rotation), rotvec_to_quat(b.rotation))
    return Pose(quat_to_rotvec(q), a.apply(b.translation))


def inverse(p: Pose) -> Pose:
    rot = -p.rotation
    return Pose(rot, -(rotvec_to_matrix(rot) @ p.translation))


def relative_angle(a: Pose, b: Pose) -> float:
    """Geodesic angle of the rotation taking b's orientation to a's."""
    q = quat_mul(rotvec_to_quat(a.rotation),
                 np.array([1.0, -1.0, -1.0, -1.0]) * rotvec_to_quat(b.rotation))
    w = min(1.0, abs(float(q[0])))
    return 2.0 * np.arccos(w)


def from_matrix(m: np.ndarray, t: np.ndarray) -> Pose:
    return Pose(matrix_to_rotvec(m), t)


def random_rotvec(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed rotation, drawn via a random unit quaternion."""
    q = rng.normal(size=4)
    return quat_to_rotvec(q / np.linalg.norm(q))


def slerp_rotvec(ra: np.ndarray, rb: np.ndarray, t: float) -> np.ndarray:
    """Geodesic interpolation between two axis-angle rotations."""
    qa = rotvec_to_quat(ra)
    qb = rotvec_to_quat(rb)
    if float(np.dot(qa, qb)) < 0.0:
        qb = -qb
    dot = min(1.0, max(-1.0, float(np.dot(qa, qb))))
    omega = np.arccos(dot)
    if omega < 1e-9:
        q = qa + t * (qb - qa)
    else:
        q = (np.sin((1.0 - t) * omega) * qa + np.sin(t * omega) * qb) / np.sin(omega)
    return quat_to_rotvec(q / np.linalg.norm(q))
