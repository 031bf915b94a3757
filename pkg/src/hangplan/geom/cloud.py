"""Depth-camera partial point clouds: container, transforms, normal estimation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kdindex import KdIndex
from .pose import Pose

TAG_OBJECT = "object"
TAG_SUPPORT = "support"


@dataclass(frozen=True)
class PartialCloud:
    """Points visible from a single camera view, with outward unit normals.

    Normals are oriented toward the viewpoint: (viewpoint - point) . normal >= 0.
    """

    points: np.ndarray
    normals: np.ndarray
    tag: str = TAG_OBJECT
    viewpoint: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3).copy()
        nrm = np.asarray(self.normals, dtype=float).reshape(-1, 3).copy()
        vp = np.asarray(self.viewpoint, dtype=float).reshape(3).copy()
        if len(pts) != len(nrm):
            raise ValueError("points/normals length mismatch")
        if self.tag not in (TAG_OBJECT, TAG_SUPPORT):
            raise ValueError(f"unknown cloud tag {self.tag!r}")
        for a in (pts, nrm, vp):
            a.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "normals", nrm)
        object.__setattr__(self, "viewpoint", vp)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def index(self) -> KdIndex:
        if not hasattr(self, "_index"):
            object.__setattr__(self, "_index", KdIndex(self.points))
        return self._index

    def subsample(self, n: int, seed: int = 0) -> "PartialCloud":
        """Uniform subsample without replacement (all points if n >= len)."""
        if n >= len(self):
            return self
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(len(self), size=n, replace=False))
        return PartialCloud(self.points[keep], self.normals[keep],
                            self.tag, self.viewpoint)


def transform_cloud(p: Pose, c: PartialCloud) -> PartialCloud:
    """Rigidly transform points, normals and viewpoint; tag preserved."""
    if len(c) == 0:
        raise ValueError("cannot transform an empty cloud")
    return PartialCloud(p.apply(c.points), p.apply_vectors(c.normals),
                        c.tag, p.apply(c.viewpoint))


def estimate_normals(points: np.ndarray, viewpoint: np.ndarray, k: int = 16,
                     tag: str = TAG_OBJECT) -> PartialCloud:
    """Per-point normals from k-NN PCA, sign-flipped toward the viewpoint.

    The normal is the smallest-eigenvalue direction of the neighborhood
    covariance.  Neighborhoods of rank < 2 (collinear points) fall back to
    the normalized viewpoint direction.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    vp = np.asarray(viewpoint, dtype=float).reshape(3)
    if k < 3:
        raise ValueError("k must be at least 3")
    if len(pts) < k:
        raise ValueError(f"need at least k={k} points, got {len(pts)}")
    idx, _ = KdIndex(pts).knn(pts, k)
    hoods = pts[idx]                           # (N, k, 3)
    centered = hoods - hoods.mean(axis=1, keepdims=True)
    cov = np.einsum("nki,nkj->nij", centered, centered) / k
    eigvals, eigvecs = np.linalg.eigh(cov)     # ascending eigenvalues
    normals = eigvecs[:, :, 0]
    to_view = vp - pts
    flip = np.einsum("ni,ni->n", to_view, normals) < 0.0
    normals[flip] = -normals[flip]
    # Rank < 2: second eigenvalue vanishes relative to the largest.
    degenerate = eigvals[:, 1] <= np.maximum(eigvals[:, 2] * 1e-9, 1e-18)
    if degenerate.any():
        fb = to_view[degenerate]
        norm = np.linalg.norm(fb, axis=1, keepdims=True)
        norm[norm == 0.0] = 1.0
        normals[degenerate] = fb / norm
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return PartialCloud(pts, normals, tag, vp)
