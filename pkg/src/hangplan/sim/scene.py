"""Mesh + signed-distance bundles used by the physical oracles."""
from __future__ import annotations

import numpy as np

from ..geom.pose import Pose, inverse
from ..geom.sdf import SdfGrid, build_sdf
from ..geom.trimesh import TriMesh


class Body:
    """A rigid body: mesh, its SDF, cached surface samples and mass center."""

    def __init__(self, mesh: TriMesh, sdf: SdfGrid | None = None,
                 cell_size: float | None = None):
        self.mesh = mesh
        self.sdf = sdf if sdf is not None else build_sdf(mesh, cell_size)
        self.samples_dense = mesh.surface_samples(4096)
        self.samples_settle = self.samples_dense[::2]   # 2048, deterministic
        self.samples = self.samples_dense[::4]          # 1024, deterministic
        self.com = mesh.center_of_mass

    @property
    def cell(self) -> float:
        return self.sdf.cell_size


class HangScene:
    """An object body paired with a support body anchored at the origin."""

    def __init__(self, obj: Body, support: Body):
        self.obj = obj
        self.support = support

    @property
    def cell(self) -> float:
        return max(self.obj.cell, self.support.cell)

    def clearance(self, pose: Pose, level: str = "settle") -> float:
        """Two-sided signed gap: negative means the bodies interpenetrate.

        Minimum of the support SDF over object surface samples and of the
        object SDF over support samples, so partial overlaps from either
        side are caught.  `level` picks the sample density: "coarse" (1024),
        "settle" (2048) or "dense" (4096) points per body.
        """
        attr = {"coarse": "samples", "settle": "samples_settle",
                "dense": "samples_dense"}[level]
        o = getattr(self.obj, attr)
        s = getattr(self.support, attr)
        d1 = self.support.sdf.query(pose.apply(o)).min()
        d2 = self.obj.sdf.query(inverse(pose).apply(s)).min()
        return float(min(d1, d2))

    def support_gap(self, pose: Pose) -> float:
        """Nearest distance from the object surface to the support."""
        return float(self.support.sdf.query(pose.apply(self.obj.samples)).min())

    def com_world(self, pose: Pose) -> np.ndarray:
        return pose.apply(self.obj.com)
