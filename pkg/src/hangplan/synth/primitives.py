"""Watertight parametric solids used to assemble objects and supports.

Each primitive is a closed, outward-wound triangle mesh.  Compound shapes
are unions of overlapping closed components; containment everywhere follows
the single even-odd parity convention, so signed-distance and inside tests
stay consistent.
"""
from __future__ import annotations

import numpy as np

from ..geom.trimesh import TriMesh, merge_meshes


def box(size, center=(0.0, 0.0, 0.0), name: str = "box") -> TriMesh:
    sx, sy, sz = (np.asarray(size, dtype=float) / 2.0)
    cx, cy, cz = center
    v = np.array([
        [cx - sx, cy - sy, cz - sz], [cx + sx, cy - sy, cz - sz],
        [cx + sx, cy + sy, cz - sz], [cx - sx, cy + sy, cz - sz],
        [cx - sx, cy - sy, cz + sz], [cx + sx, cy - sy, cz + sz],
        [cx + sx, cy + sy, cz + sz], [cx - sx, cy + sy, cz + sz],
    ])
    f = np.array([
        [0, 2, 1], [0, 3, 2],          # bottom (-z)
        [4, 5, 6], [4, 6, 7],          # top (+z)
        [0, 1, 5], [0, 5, 4],          # -y
        [2, 3, 7], [2, 7, 6],          # +y
        [1, 2, 6], [1, 6, 5],          # +x
        [3, 0, 4], [3, 4, 7],          # -x
    ])
    return TriMesh(v, f, name)


def _axis_frame(axis: np.ndarray):
    axis = axis / np.linalg.norm(axis)
    helper = np.array([0.0, 0.0, 1.0])
    if abs(axis @ helper) > 0.99:
        helper = np.array([1.0, 0.0, 0.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    return u, v


def cylinder(p0, p1, radius: float, segments: int = 16,
             name: str = "cylinder") -> TriMesh:
    """Closed cylinder from p0 to p1."""
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    axis = p1 - p0
    u, v = _axis_frame(axis)
    ang = np.linspace(0.0, 2.0 * np.pi, segments, endpoint=False)
    ring = radius * (np.cos(ang)[:, None] * u + np.sin(ang)[:, None] * v)
    verts = np.concatenate([p0 + ring, p1 + ring, [p0], [p1]])
    c0, c1 = 2 * segments, 2 * segments + 1
    tris = []
    for i in range(segments):
        j = (i + 1) % segments
        a, b = i, j
        c, d = segments + i, segments + j
        tris += [[a, b, d], [a, d, c]]          # side, outward
        tris += [[c0, b, a]]                    # bottom cap faces -axis
        tris += [[c1, c, d]]                    # top cap faces +axis
    return TriMesh(verts, np.array(tris), name)


def uv_sphere(radius: float, center=(0.0, 0.0, 0.0), segments: int = 16,
              rings: int = 10, name: str = "sphere") -> TriMesh:
    center = np.asarray(center, dtype=float)
    verts = [center + [0.0, 0.0, radius]]
    for i in range(1, rings):
        theta = np.pi * i / rings
        for j in range(segments):
            phi = 2.0 * np.pi * j / segments
            verts.append(center + radius * np.array([
                np.sin(theta) * np.cos(phi),
                np.sin(theta) * np.sin(phi),
                np.cos(theta)]))
    verts.append(center + [0.0, 0.0, -radius])
    south = len(verts) - 1
    tris = []
    for j in range(segments):
        tris.append([0, 1 + j, 1 + (j + 1) % segments])
    for i in range(rings - 2):
        a0 = 1 + i * segments
        b0 = 1 + (i + 1) * segments
        for j in range(segments):
            j1 = (j + 1) % segments
            tris += [[a0 + j, b0 + j, b0 + j1], [a0 + j, b0 + j1, a0 + j1]]
    b0 = 1 + (rings - 2) * segments
    for j in range(segments):
        tris.append([south, b0 + (j + 1) % segments, b0 + j])
    return TriMesh(np.array(verts), np.array(tris), name)


def torus(major_radius: float, minor_radius: float, center=(0.0, 0.0, 0.0),
          segments: int = 24, tube_segments: int = 12,
          name: str = "torus") -> TriMesh:
    """Full torus around the +z axis through `center`."""
    center = np.asarray(center, dtype=float)
    us = 2.0 * np.pi * np.arange(segments) / segments
    vs = 2.0 * np.pi * np.arange(tube_segments) / tube_segments
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    ring = major_radius + minor_radius * np.cos(vv)
    verts = np.stack([ring * np.cos(uu), ring * np.sin(uu),
                      minor_radius * np.sin(vv)], axis=-1).reshape(-1, 3) + center
    tris = []
    for i in range(segments):
        i1 = (i + 1) % segments
        for j in range(tube_segments):
            j1 = (j + 1) % tube_segments
            a = i * tube_segments + j
            b = i1 * tube_segments + j
            c = i1 * tube_segments + j1
            d = i * tube_segments + j1
            tris += [[a, b, c], [a, c, d]]
    return TriMesh(verts, np.array(tris), name)


def torus_arc(major_radius: float, minor_radius: float, angle0: float,
              angle1: float, center=(0.0, 0.0, 0.0), segments: int = 16,
              tube_segments: int = 12, name: str = "torus_arc") -> TriMesh:
    """Partial torus (around +z) with flat disk caps at both ends."""
    center = np.asarray(center, dtype=float)
    us = np.linspace(angle0, angle1, segments + 1)
    vs = 2.0 * np.pi * np.arange(tube_segments) / tube_segments
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    ring = major_radius + minor_radius * np.cos(vv)
    verts = np.stack([ring * np.cos(uu), ring * np.sin(uu),
                      minor_radius * np.sin(vv)], axis=-1).reshape(-1, 3)
    cap0 = major_radius * np.array([np.cos(angle0), np.sin(angle0), 0.0])
    cap1 = major_radius * np.array([np.cos(angle1), np.sin(angle1), 0.0])
    verts = np.concatenate([verts, [cap0], [cap1]]) + center
    c0 = (segments + 1) * tube_segments
    c1 = c0 + 1
    tris = []
    for i in range(segments):
        for j in range(tube_segments):
            j1 = (j + 1) % tube_segments
            a = i * tube_segments + j
            b = (i + 1) * tube_segments + j
            c = (i + 1) * tube_segments + j1
            d = i * tube_segments + j1
            tris += [[a, b, c], [a, c, d]]
    last = segments * tube_segments
    for j in range(tube_segments):
        j1 = (j + 1) % tube_segments
        tris.append([c0, j, j1])                       # start cap (-tangent)
        tris.append([c1, last + j1, last + j])         # end cap (+tangent)
    return TriMesh(verts, np.array(tris), name)


def tube_polyline(points, radius: float, segments: int = 12,
                  name: str = "tube") -> TriMesh:
    """Capped tube along a polyline: cylinders plus sphere joints."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    parts = [uv_sphere(radius, pts[0], segments, max(6, segments // 2))]
    for a, b in zip(pts[:-1], pts[1:]):
        parts.append(cylinder(a, b, radius, segments))
        parts.append(uv_sphere(radius, b, segments, max(6, segments // 2)))
    return merge_meshes(parts, name)
