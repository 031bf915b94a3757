"""Nearest-neighbor index over a fixed point list."""
from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


class KdIndex:
    """KD-tree nearest-neighbor queries with deterministic tie-breaking.

    Exact ties on distance are resolved to the lowest point index, so
    results match a linear scan for any query.
    """

    def __init__(self, points: np.ndarray, leaf_size: int = 16):
        self.points = np.asarray(points, dtype=float).reshape(-1, 3)
        if len(self.points) == 0:
            raise ValueError("cannot index an empty point list")
        self.leaf_size = leaf_size
        self._tree = cKDTree(self.points, leafsize=leaf_size)

    def __len__(self) -> int:
        return len(self.points)

    def nearest(self, query: np.ndarray) -> tuple[int, float]:
        """Index and distance of the nearest point; ties go to lowest index."""
        q = np.asarray(query, dtype=float).reshape(3)
        dist, idx = self._tree.query(q)
        # Gather every point at exactly the winning distance and take the
        # lowest index, so duplicated points resolve the same as a scan.
        candidates = self._tree.query_ball_point(q, dist * (1.0 + 1e-12) + 1e-300)
        if len(candidates) > 1:
            d2 = np.einsum("ij,ij->i", self.points[candidates] - q,
                           self.points[candidates] - q)
            best = d2.min()
            idx = min(c for c, d in zip(candidates, d2) if d == best)
            dist = np.sqrt(best)
        return int(idx), float(dist)

    def nearest_many(self, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized nearest query (no tie adjudication): (indices, distances)."""
        q = np.asarray(queries, dtype=float).reshape(-1, 3)
        dist, idx = self._tree.query(q)
        return idx.astype(np.int64), dist

    def knn(self, queries: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
        q = np.asarray(queries, dtype=float).reshape(-1, 3)
        dist, idx = self._tree.query(q, k=k)
        if k == 1:
            dist = dist[:, None]
            idx = idx[:, None]
        return idx.astype(np.int64), dist

    def within(self, query: np.ndarray, radius: float) -> list[int]:
        return sorted(self._tree.query_ball_point(np.asarray(query, dtype=float), radius))
