"""Vectorized ray/triangle/segment intersection and distance primitives."""
from __future__ import annotations

import numpy as np

_EPS = 1e-12


def ray_box(origins: np.ndarray, inv_dirs: np.ndarray, bmin: np.ndarray, bmax: np.ndarray):
    """Slab test. origins/inv_dirs: (R, 3). Returns (hit mask, t_near)."""
    t0 = (bmin - origins) * inv_dirs
    t1 = (bmax - origins) * inv_dirs
    tmin = np.minimum(t0, t1).max(axis=-1)
    tmax = np.maximum(t0, t1).min(axis=-1)
    hit = (tmax >= np.maximum(tmin, 0.0)) & (tmax >= 0.0)
    return hit, tmin


def moller_trumbore(origins: np.ndarray, dirs: np.ndarray, tri: np.ndarray,
                    t_range: tuple[float, float] = (1e-9, np.inf)):
    """Ray-triangle intersections for (R, 3) rays against (T, 3, 3) triangles.

    Returns (t, u, v, valid) arrays of shape (R, T); t is the ray parameter.
    """
    v0 = tri[:, 0]
    e1 = tri[:, 1] - v0
    e2 = tri[:, 2] - v0
    # Broadcast rays against triangles: (R, 1, 3) x (1, T, 3)
    d = dirs[:, None, :]
    pvec = np.cross(d, e2[None, :, :])
    det = np.einsum("rtk,tk->rt", pvec, e1)
    near_parallel = np.abs(det) < _EPS
    inv_det = np.where(near_parallel, 0.0, 1.0 / np.where(near_parallel, 1.0, det))
    tvec = origins[:, None, :] - v0[None, :, :]
    u = np.einsum("rtk,rtk->rt", tvec, pvec) * inv_det
    qvec = np.cross(tvec, e1[None, :, :])
    v = np.einsum("rtk,rk->rt", qvec, dirs) * inv_det
    t = np.einsum("rtk,tk->rt", qvec, e2) * inv_det
    valid = (~near_parallel & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0)
             & (t >= t_range[0]) & (t <= t_range[1]))
    return t, u, v, valid


def segments_cross_triangles(p0: np.ndarray, p1: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Whether each segment (K, 3)-(K, 3) crosses its paired triangle (K, 3, 3)."""
    v0 = tri[:, 0]
    e1 = tri[:, 1] - v0
    e2 = tri[:, 2] - v0
    d = p1 - p0
    pvec = np.cross(d, e2)
    det = np.einsum("kj,kj->k", pvec, e1)
    ok = np.abs(det) > _EPS
    inv_det = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    tvec = p0 - v0
    u = np.einsum("kj,kj->k", tvec, pvec) * inv_det
    qvec = np.cross(tvec, e1)
    v = np.einsum("kj,kj->k", qvec, d) * inv_det
    t = np.einsum("kj,kj->k", qvec, e2) * inv_det
    return ok & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0) & (t >= 0.0) & (t <= 1.0)


def tri_pairs_intersect(tri_a: np.ndarray, tri_b: np.ndarray) -> np.ndarray:
    """Pairwise triangle-triangle intersection for (K, 3, 3) vs (K, 3, 3).

    Tests all six edges of each pair against the opposite triangle, which
    detects every transversal crossing; exactly coplanar overlaps are not
    reported (containment checks elsewhere cover those configurations).
    """
    k = tri_a.shape[0]
    hit = np.zeros(k, dtype=bool)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        hit |= segments_cross_triangles(tri_a[:, i], tri_a[:, j], tri_b)
        hit |= segments_cross_triangles(tri_b[:, i], tri_b[:, j], tri_a)
    return hit


def points_triangles_distance(points: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """All-pairs point-triangle distances: (P, 3) x (T, 3, 3) -> (P, T).

    Same region logic as points_triangle_closest, fully broadcast; used where
    many points meet many triangles at once.
    """
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    ab = b - a
    ac = c - a
    ap = points[:, None, :] - a[None]
    d1 = np.einsum("ptk,tk->pt", ap, ab)
    d2 = np.einsum("ptk,tk->pt", ap, ac)
    bp = ap - ab[None]
    d3 = np.einsum("ptk,tk->pt", bp, ab)
    d4 = np.einsum("ptk,tk->pt", bp, ac)
    cp = ap - ac[None]
    d5 = np.einsum("ptk,tk->pt", cp, ab)
    d6 = np.einsum("ptk,tk->pt", cp, ac)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    def safe_div(num, den):
        return num / np.where(np.abs(den) < 1e-300, 1.0, den)

    t_ab = np.clip(safe_div(d1, d1 - d3), 0.0, 1.0)
    t_ac = np.clip(safe_div(d2, d2 - d6), 0.0, 1.0)
    t_bc = np.clip(safe_div(d4 - d3, (d4 - d3) + (d5 - d6)), 0.0, 1.0)
    denom = va + vb + vc
    v_in = safe_div(vb, denom)
    w_in = safe_div(vc, denom)

    r1 = (d1 <= 0.0) & (d2 <= 0.0)
    r2 = (d3 >= 0.0) & (d4 <= d3)
    r3 = (d6 >= 0.0) & (d5 <= d6)
    r4 = (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0)
    r5 = (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0)
    r6 = (va <= 0.0) & (d4 - d3 >= 0.0) & (d5 - d6 >= 0.0)
    conds = [r1, r2, r3, r4 & ~(r1 | r2 | r3), r5 & ~(r1 | r2 | r3),
             r6 & ~(r1 | r2 | r3)]
    wb = np.select(conds, [0.0, 1.0, 0.0, t_ab, 0.0, 1.0 - t_bc], default=v_in)
    wc = np.select(conds, [0.0, 0.0, 1.0, 0.0, t_ac, t_bc], default=w_in)
    closest = (a[None] + wb[..., None] * ab[None] + wc[..., None] * ac[None])
    return np.linalg.norm(points[:, None, :] - closest, axis=2)


def points_triangle_closest(points: np.ndarray, tri: np.ndarray):
    """Closest points on one triangle (3, 3) for many query points (P, 3).

    Returns (distances, closest points).  Region-based projection onto the
    triangle's plane with barycentric clamping against each edge.
    """
    a, b, c = tri[0], tri[1], tri[2]
    ab = b - a
    ac = c - a
    ap = points - a
    d1 = ap @ ab
    d2 = ap @ ac
    bp = points - b
    d3 = bp @ ab
    d4 = bp @ ac
    cp = points - c
    d5 = cp @ ab
    d6 = cp @ ac

    closest = np.empty_like(points)
    done = np.zeros(len(points), dtype=bool)

    m = (d1 <= 0.0) & (d2 <= 0.0)                      # vertex a
    closest[m] = a
    done |= m

    m = ~done & (d3 >= 0.0) & (d4 <= d3)               # vertex b
    closest[m] = b
    done |= m

    m = ~done & (d6 >= 0.0) & (d5 <= d6)               # vertex c
    closest[m] = c
    done |= m

    vc = d1 * d4 - d3 * d2
    m = ~done & (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0)  # edge ab
    if m.any():
        t = d1[m] / (d1[m] - d3[m])
        closest[m] = a + t[:, None] * ab
    done |= m

    vb = d5 * d2 - d1 * d6
    m = ~done & (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0)  # edge ac
    if m.any():
        t = d2[m] / (d2[m] - d6[m])
        closest[m] = a + t[:, None] * ac
    done |= m

    va = d3 * d6 - d5 * d4
    m = ~done & (va <= 0.0) & (d4 - d3 >= 0.0) & (d5 - d6 >= 0.0)  # edge bc
    if m.any():
        t = (d4[m] - d3[m]) / ((d4[m] - d3[m]) + (d5[m] - d6[m]))
        closest[m] = b + t[:, None] * (c - b)
    done |= m

    m = ~done                                           # interior
    if m.any():
        denom = va[m] + vb[m] + vc[m]
        v = vb[m] / denom
        w = vc[m] / denom
        closest[m] = a + v[:, None] * ab + w[:, None] * ac

    dist = np.linalg.norm(points - closest, axis=1)
    return dist, closest
