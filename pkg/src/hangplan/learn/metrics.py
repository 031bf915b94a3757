"""Evaluation metrics for estimated normals."""
from __future__ import annotations

import numpy as np


def normal_alignment_loss(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Negative sum of dot products between predicted and true unit normals.

    Perfect agreement on N normals gives -N; orthogonal normals give 0.
    """
    p = np.asarray(predicted, dtype=float).reshape(-1, 3)
    t = np.asarray(truth, dtype=float).reshape(-1, 3)
    if len(p) != len(t):
        raise ValueError("normal counts differ")
    for arr, name in ((p, "predicted"), (t, "truth")):
        norms = np.linalg.norm(arr, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-6):
            raise ValueError(f"{name} normals are not unit length")
    return float(-np.einsum("ij,ij->", p, t))
