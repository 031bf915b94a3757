"""Single-view depth rendering of meshes into partial point clouds."""
from __future__ import annotations

import numpy as np

from .cloud import PartialCloud
from .pose import Pose, identity, inverse
from .trimesh import TriMesh

DEFAULT_RESOLUTION = (160, 120)


def _camera_rays(camera: np.ndarray, look_at: np.ndarray, half_angle: float,
                 resolution: tuple[int, int]) -> np.ndarray:
    w, h = resolution
    forward = look_at - camera
    forward = forward / np.linalg.norm(forward)
    up = np.array([0.0, 0.0, 1.0])
    if abs(forward @ up) > 0.999:
        up = np.array([0.0, 1.0, 0.0])
    right = np.cross(forward, up)
    right /= np.linalg.norm(right)
    down = np.cross(forward, right)
    tan = np.tan(half_angle)
    u = (np.arange(w) + 0.5) / w * 2.0 - 1.0
    v = (np.arange(h) + 0.5) / h * 2.0 - 1.0
    uu, vv = np.meshgrid(u * tan * (w / h), v * tan, indexing="ij")
    dirs = (forward[None, None]
            + uu[..., None] * right[None, None]
            + vv[..., None] * down[None, None]).reshape(-1, 3)
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def render_scene(meshes: list[tuple[TriMesh, Pose]], camera: np.ndarray,
                 resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                 look_at: np.ndarray | None = None):
    """Cast one ray per pixel; return per-mesh (points, normals) of first hits.

    Occlusion is resolved across all provided meshes: a pixel belongs to the
    mesh with the nearest intersection along its ray.
    """
    camera = np.asarray(camera, dtype=float).reshape(3)
    all_pts = np.concatenate([p.apply(m.vertices) for m, p in meshes])
    if look_at is None:
        look_at = 0.5 * (all_pts.min(axis=0) + all_pts.max(axis=0))
    radius = float(np.linalg.norm(all_pts - look_at, axis=1).max())
    dist = float(np.linalg.norm(camera - look_at))
    if dist <= radius:
        half_angle = 0.45 * np.pi
    else:
        half_angle = min(0.45 * np.pi, 1.15 * np.arcsin(radius / dist))
    dirs = _camera_rays(camera, look_at, half_angle, resolution)

    n_rays = len(dirs)
    best_t = np.full(n_rays, np.inf)
    best_mesh = np.full(n_rays, -1, dtype=np.int64)
    best_tri = np.full(n_rays, -1, dtype=np.int64)
    for mi, (mesh, pose) in enumerate(meshes):
        inv = inverse(pose)
        t, tri = mesh.first_hits(inv.apply(camera)[None].repeat(n_rays, 0),
                                 inv.apply_vectors(dirs))
        better = t < best_t
        best_t[better] = t[better]
        best_mesh[better] = mi
        best_tri[better] = tri[better]

    results = []
    for mi, (mesh, pose) in enumerate(meshes):
        sel = best_mesh == mi
        if not sel.any():
            results.append((np.zeros((0, 3)), np.zeros((0, 3))))
            continue
        pts = camera + best_t[sel, None] * dirs[sel]
        normals = pose.apply_vectors(mesh.face_normals[best_tri[sel]])
        toward = np.einsum("ij,ij->i", camera - pts, normals) < 0.0
        normals[toward] = -normals[toward]
        results.append((pts, normals))
    return results


def render_partial_cloud(mesh: TriMesh, pose: Pose, camera: np.ndarray,
                         resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                         occluders: list[tuple[TriMesh, Pose]] = (),
                         tag: str = "object") -> PartialCloud:
    """Partial cloud of one mesh from a pinhole view, with occluders honored.

    Pixels whose first hit belongs to an occluder contribute nothing; a mesh
    fully hidden (or behind the camera) yields an empty cloud.
    """
    scene = [(mesh, pose)] + [(m, p if p is not None else identity())
                              for m, p in occluders]
    hits = render_scene(scene, camera, resolution)
    pts, normals = hits[0]
    return PartialCloud(pts, normals, tag, np.asarray(camera, dtype=float))
