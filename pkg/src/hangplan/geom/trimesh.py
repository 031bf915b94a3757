"""Triangle meshes with a bounding-volume hierarchy and OBJ round-tripping."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .intersect import moller_trumbore, points_triangle_closest, ray_box

_AREA_EPS = 1e-16


class Bvh:
    """Axis-aligned box tree over triangles, median split on the longest axis."""

    __slots__ = ("node_min", "node_max", "left", "right", "start", "count", "order")

    def __init__(self, tri_verts: np.ndarray, leaf_size: int = 8):
        t = tri_verts.shape[0]
        tri_min = tri_verts.min(axis=1)
        tri_max = tri_verts.max(axis=1)
        centroids = tri_verts.mean(axis=1)
        order = np.arange(t)
        node_min, node_max, left, right, start, count = [], [], [], [], [], []

        def build(lo: int, hi: int) -> int:
            idx = len(node_min)
            sel = order[lo:hi]
            node_min.append(tri_min[sel].min(axis=0))
            node_max.append(tri_max[sel].max(axis=0))
            left.append(-1)
            right.append(-1)
            if hi - lo <= leaf_size:
                start.append(lo)
                count.append(hi - lo)
                return idx
            start.append(-1)
            count.append(0)
            cen = centroids[sel]
            axis = int(np.argmax(cen.max(axis=0) - cen.min(axis=0)))
            mid = (hi - lo) // 2
            part = np.argpartition(cen[:, axis], mid)
            order[lo:hi] = sel[part]
            left[idx] = build(lo, lo + mid)
            right[idx] = build(lo + mid, hi)
            return idx

        build(0, t)
        self.node_min = np.array(node_min)
        self.node_max = np.array(node_max)
        self.left = np.array(left)
        self.right = np.array(right)
        self.start = np.array(start)
        self.count = np.array(count)
        self.order = order

    def leaf_triangles(self, node: int) -> np.ndarray:
        return self.order[self.start[node]:self.start[node] + self.count[node]]


class TriMesh:
    """Immutable watertight-aspiring triangle mesh (meters).

    Construction drops degenerate (zero-area) triangles and validates index
    ranges; everything else (BVH, areas, moments) is computed lazily.
    """

    def __init__(self, vertices, triangles, name: str = "mesh"):
        v = np.asarray(vertices, dtype=float).reshape(-1, 3).copy()
        f = np.asarray(triangles, dtype=np.int64).reshape(-1, 3).copy()
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise ValueError("triangle index out of range")
        tv = v[f]
        areas = 0.5 * np.linalg.norm(
            np.cross(tv[:, 1] - tv[:, 0], tv[:, 2] - tv[:, 0]), axis=1)
        f = f[areas > _AREA_EPS]
        v.setflags(write=False)
        f.setflags(write=False)
        self.vertices = v
        self.triangles = f
        self.name = name
        self._cache: dict = {}

    # -- basic derived data -------------------------------------------------

    @property
    def tri_verts(self) -> np.ndarray:
        if "tv" not in self._cache:
            tv = self.vertices[self.triangles]
            tv.setflags(write=False)
            self._cache["tv"] = tv
        return self._cache["tv"]

    @property
    def areas(self) -> np.ndarray:
        if "areas" not in self._cache:
            tv = self.tri_verts
            self._cache["areas"] = 0.5 * np.linalg.norm(
                np.cross(tv[:, 1] - tv[:, 0], tv[:, 2] - tv[:, 0]), axis=1)
        return self._cache["areas"]

    @property
    def face_normals(self) -> np.ndarray:
        if "fn" not in self._cache:
            tv = self.tri_verts
            n = np.cross(tv[:, 1] - tv[:, 0], tv[:, 2] - tv[:, 0])
            self._cache["fn"] = n / np.linalg.norm(n, axis=1, keepdims=True)
        return self._cache["fn"]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    @property
    def bbox_diagonal(self) -> float:
        lo, hi = self.bounds()
        return float(np.linalg.norm(hi - lo))

    @property
    def bvh(self) -> Bvh:
        if "bvh" not in self._cache:
            self._cache["bvh"] = Bvh(self.tri_verts)
        return self._cache["bvh"]

    def open_edge_count(self) -> int:
        """Number of undirected edges not shared by exactly two triangles."""
        f = self.triangles
        edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        edges = np.sort(edges, axis=1)
        _, counts = np.unique(edges, axis=0, return_counts=True)
        return int(np.count_nonzero(counts != 2))

    def is_watertight(self) -> bool:
        return self.open_edge_count() == 0

    # -- moments ------------------------------------------------------------

    def volume_centroid(self) -> tuple[float, np.ndarray]:
        """Signed volume and volume centroid via the divergence theorem."""
        if "vc" not in self._cache:
            tv = self.tri_verts
            cross = np.cross(tv[:, 1], tv[:, 2])
            det = np.einsum("tj,tj->t", tv[:, 0], cross)
            vol = det.sum() / 6.0
            cen = ((tv.sum(axis=1) * det[:, None]).sum(axis=0) / 24.0)
            self._cache["vc"] = (float(vol), cen / vol if abs(vol) > 1e-18 else
                                 self.vertices.mean(axis=0))
        return self._cache["vc"]

    @property
    def center_of_mass(self) -> np.ndarray:
        return self.volume_centroid()[1]

    # -- sampling -----------------------------------------------------------

    def sample_surface(self, n: int, seed: int = 0) -> np.ndarray:
        """Area-weighted surface samples, deterministic per (n, seed)."""
        rng = np.random.default_rng(seed)
        probs = self.areas / self.areas.sum()
        tri_idx = rng.choice(len(self.triangles), size=n, p=probs)
        u = rng.random(n)
        v = rng.random(n)
        flip = u + v > 1.0
        u[flip] = 1.0 - u[flip]
        v[flip] = 1.0 - v[flip]
        tv = self.tri_verts[tri_idx]
        return (tv[:, 0] + u[:, None] * (tv[:, 1] - tv[:, 0])
                + v[:, None] * (tv[:, 2] - tv[:, 0]))

    def surface_samples(self, n: int = 4096) -> np.ndarray:
        key = ("samples", n)
        if key not in self._cache:
            s = self.sample_surface(n, seed=0)
            s.setflags(write=False)
            self._cache[key] = s
        return self._cache[key]

    # -- ray casting & containment -------------------------------------------

    def first_hits(self, origins: np.ndarray, dirs: np.ndarray,
                   chunk: int = 1024):
        """First hit along each ray: (t, triangle index), inf/-1 for misses."""
        origins = np.asarray(origins, dtype=float).reshape(-1, 3)
        dirs = np.asarray(dirs, dtype=float).reshape(-1, 3)
        r = len(origins)
        t_best = np.full(r, np.inf)
        tri_best = np.full(r, -1, dtype=np.int64)
        bmin, bmax = self.bounds()
        tri = self.tri_verts
        for lo in range(0, r, chunk):
            o = origins[lo:lo + chunk]
            d = dirs[lo:lo + chunk]
            with np.errstate(divide="ignore"):
                inv = 1.0 / d
            live, _ = ray_box(o, inv, bmin, bmax)
            if not live.any():
                continue
            t, _, _, valid = moller_trumbore(o[live], d[live], tri)
            t = np.where(valid, t, np.inf)
            idx = np.argmin(t, axis=1)
            tm = t[np.arange(len(idx)), idx]
            rows = lo + np.flatnonzero(live)
            t_best[rows] = tm
            tri_best[rows] = np.where(np.isfinite(tm), idx, -1)
        return t_best, tri_best

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Even-odd ray-parity inside test with grazing-hit retries."""
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        result = np.zeros(len(points), dtype=bool)
        pending = np.arange(len(points))
        tri = self.tri_verts
        directions = _parity_directions()
        for d in directions:
            if len(pending) == 0:
                break
            dirs = np.broadcast_to(d, (len(pending), 3))
            suspect = np.zeros(len(pending), dtype=bool)
            crossings = np.zeros(len(pending), dtype=np.int64)
            for lo in range(0, len(pending), 1024):
                sel = pending[lo:lo + 1024]
                t, u, v, valid = moller_trumbore(points[sel], dirs[lo:lo + 1024], tri)
                edge = valid & ((u < 1e-9) | (v < 1e-9) | (u + v > 1.0 - 1e-9))
                suspect[lo:lo + 1024] = edge.any(axis=1)
                crossings[lo:lo + 1024] = valid.sum(axis=1)
            good = ~suspect
            result[pending[good]] = (crossings[good] % 2) == 1
            pending = pending[~good]
        if len(pending):  # give up on retries; accept last parity
            dirs = np.broadcast_to(directions[-1], (len(pending), 3))
            t, u, v, valid = moller_trumbore(points[pending], dirs, tri)
            result[pending] = (valid.sum(axis=1) % 2) == 1
        return result

    def interior_seed(self) -> np.ndarray:
        """A point strictly inside the mesh, used for containment tests."""
        if "seed" not in self._cache:
            vol, com = self.volume_centroid()
            if self.contains(com[None])[0]:
                self._cache["seed"] = com
                return com
            # Step inward from triangle centroids along the inward normal.
            depth = 0.25 * np.cbrt(abs(vol)) if vol else 1e-3 * self.bbox_diagonal
            order = np.argsort(-self.areas)[:32]
            cand = (self.tri_verts[order].mean(axis=1)
                    - self.face_normals[order] * depth)
            inside = self.contains(cand)
            if not inside.any():
                for scale in (0.3, 0.1, 0.03, 0.01):
                    cand = (self.tri_verts[order].mean(axis=1)
                            - self.face_normals[order] * depth * scale)
                    inside = self.contains(cand)
                    if inside.any():
                        break
            if not inside.any():
                raise ValueError("could not locate an interior point")
            self._cache["seed"] = cand[np.argmax(inside)]
        return self._cache["seed"]

    def transformed(self, pose) -> "TriMesh":
        return TriMesh(pose.apply(self.vertices), self.triangles, self.name)


def _parity_directions() -> np.ndarray:
    # Fixed, irrational-leaning directions so axis-aligned geometry rarely
    # produces grazing hits on the first cast.
    dirs = np.array([
        [0.57735027, 0.70710678, 0.40824829],
        [-0.26726124, 0.53452248, 0.80178373],
        [0.83205029, -0.5547002, 0.0],
        [0.18257419, -0.36514837, 0.91287093],
        [-0.70710678, -0.57735027, 0.40824829],
        [0.9486833, 0.31622777, 0.0],
        [0.0, 0.4472136, -0.89442719],
        [-0.6, 0.64, 0.48],
    ])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def merge_meshes(meshes: list[TriMesh], name: str = "merged") -> TriMesh:
    verts = []
    tris = []
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        tris.append(m.triangles + offset)
        offset += len(m.vertices)
    return TriMesh(np.concatenate(verts), np.concatenate(tris), name)


def brute_force_distance(mesh: TriMesh, points: np.ndarray) -> np.ndarray:
    """Unsigned distance by scanning every triangle (slow; oracle use)."""
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    best = np.full(len(points), np.inf)
    for t in range(len(mesh.triangles)):
        d, _ = points_triangle_closest(points, mesh.tri_verts[t])
        np.minimum(best, d, out=best)
    return best


def closest_points(mesh: TriMesh, points: np.ndarray):
    """Exact nearest surface point per query: (distances, points on mesh).

    Triangles are pruned with an upper bound from cached surface samples,
    then checked exactly, so cost stays low for small query batches.
    """
    from scipy.spatial import cKDTree

    points = np.asarray(points, dtype=float).reshape(-1, 3)
    if "sample_tree" not in mesh._cache:
        mesh._cache["sample_tree"] = cKDTree(mesh.surface_samples(4096))
    ub = mesh._cache["sample_tree"].query(points)[0]
    tv = mesh.tri_verts
    tri_min = tv.min(axis=1)
    tri_max = tv.max(axis=1)
    best_d = np.full(len(points), np.inf)
    best_p = np.zeros_like(points)
    for qi in range(len(points)):
        q = points[qi]
        bound = ub[qi] * 1.0001 + 1e-12
        # Lower bound on distance from q to each triangle's AABB.
        lb = np.linalg.norm(np.maximum(tri_min - q, 0.0)
                            + np.maximum(q - tri_max, 0.0), axis=1)
        for t in np.flatnonzero(lb <= bound):
            d, cp = points_triangle_closest(q[None], tv[t])
            if d[0] < best_d[qi]:
                best_d[qi] = d[0]
                best_p[qi] = cp[0]
    return best_d, best_p


# -- OBJ I/O -----------------------------------------------------------------

def save_obj(path, mesh: TriMesh) -> None:
    lines = [f"o {mesh.name}"]
    for x, y, z in mesh.vertices:
        lines.append(f"v {x:.9g} {y:.9g} {z:.9g}")
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_obj(path) -> TriMesh:
    verts = []
    tris = []
    name = "mesh"
    for line in Path(path).read_text(encoding="ascii").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "o":
            name = parts[1]
        elif parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
            for k in range(1, len(idx) - 1):
                tris.append([idx[0], idx[k], idx[k + 1]])
    return TriMesh(np.array(verts), np.array(tris), name)
