"""Permutation-invariant point-set classifier with exact gradients.

Per-point encoder (4 -> 32 -> 64, tanh) followed by an elementwise max pool
over points and a small head (64 -> 32 -> 1, sigmoid).  Points carry
[x, y, z, tag] with tag 1 for object points and 0 for support points.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..geom.cloud import PartialCloud
from ..geom.pose import Pose
from .nn import ParamLayout, affine, affine_backward, sigmoid, softplus

ARCH = [("enc1", 4, 32), ("enc2", 32, 64), ("head1", 64, 32), ("head2", 32, 1)]


@dataclass
class LabeledPair:
    """A (object cloud, support cloud, pose) state with an oracle label."""

    object_points: np.ndarray
    support_points: np.ndarray
    pose: Pose
    label: float


class PointSetModel:
    def __init__(self, params: np.ndarray | None = None, seed: int = 0):
        self.layout = ParamLayout(ARCH)
        if params is None:
            params = self.layout.init(np.random.default_rng(seed))
        self.params = np.asarray(params, dtype=float)
        if self.params.size != self.layout.size:
            raise ValueError("parameter vector has the wrong size")

    # -- forward -------------------------------------------------------------

    def _stack_input(self, object_points, support_points, pose: Pose):
        if len(object_points) == 0 or len(support_points) == 0:
            raise ValueError("clouds must be nonempty")
        obj = pose.apply(object_points)
        x = np.concatenate([
            np.concatenate([obj, np.ones((len(obj), 1))], axis=1),
            np.concatenate([support_points, np.zeros((len(support_points), 1))],
                           axis=1),
        ])
        return x

    def _forward_cache(self, x: np.ndarray):
        h1 = np.tanh(affine(self.params, self.layout, "enc1", x))
        h2 = np.tanh(affine(self.params, self.layout, "enc2", h1))
        arg = np.argmax(h2, axis=0)
        pooled = h2[arg, np.arange(h2.shape[1])]
        h3 = np.tanh(affine(self.params, self.layout, "head1", pooled))
        logit = float(affine(self.params, self.layout, "head2", h3)[0])
        return logit, (x, h1, h2, arg, pooled, h3)

    def forward_logit(self, object_points, support_points, pose: Pose) -> float:
        x = self._stack_input(object_points, support_points, pose)
        return self._forward_cache(x)[0]

    def forward(self, object_points, support_points, pose: Pose) -> float:
        """Probability in (0, 1); exactly invariant to point permutations."""
        return float(sigmoid(self.forward_logit(object_points, support_points,
                                                pose)))

    # -- backward ------------------------------------------------------------

    def _backprop_logit(self, cache, d_logit: float, grad: np.ndarray) -> None:
        x, h1, h2, arg, pooled, h3 = cache
        d_h3 = affine_backward(self.params, self.layout, "head2", h3,
                               np.array([d_logit]), grad)
        d_pooled = affine_backward(self.params, self.layout, "head1", pooled,
                                   d_h3 * (1.0 - h3 * h3), grad)
        d_h2 = np.zeros_like(h2)
        d_h2[arg, np.arange(h2.shape[1])] = d_pooled
        d_h1 = affine_backward(self.params, self.layout, "enc2", h1,
                               d_h2 * (1.0 - h2 * h2), grad)
        affine_backward(self.params, self.layout, "enc1", x,
                        d_h1 * (1.0 - h1 * h1), grad)

    def backward(self, batch: list[LabeledPair], loss: str = "cross_entropy"):
        """Mean loss over the batch and its exact parameter gradient.

        "cross_entropy" for binary labels; "l2" puts squared error on the
        sigmoid output (reward regression).
        """
        if not batch:
            raise ValueError("batch must be nonempty")
        if loss not in ("cross_entropy", "l2"):
            raise ValueError(f"unknown loss {loss!r}")
        grad = np.zeros_like(self.params)
        total = 0.0
        for ex in batch:
            x = self._stack_input(ex.object_points, ex.support_points, ex.pose)
            logit, cache = self._forward_cache(x)
            p = float(sigmoid(logit))
            y = float(ex.label)
            if loss == "cross_entropy":
                total += float(softplus(logit) - y * logit)
                d_logit = p - y
            else:
                total += (p - y) ** 2
                d_logit = 2.0 * (p - y) * p * (1.0 - p)
            self._backprop_logit(cache, d_logit / len(batch), grad)
        return total / len(batch), grad

    # -- serialization ---------------------------------------------------------

    def to_json(self, provenance: dict | None = None) -> str:
        return json.dumps({
            "architecture": [[n, i, o] for n, i, o in ARCH],
            "params": [float(v) for v in self.params],
            "provenance": provenance or {},
        }, sort_keys=True, indent=2)

    def save(self, path, provenance: dict | None = None) -> None:
        Path(path).write_text(self.to_json(provenance), encoding="ascii")

    @classmethod
    def load(cls, path) -> "PointSetModel":
        d = json.loads(Path(path).read_text())
        if [tuple(a) for a in d["architecture"]] != [tuple(a) for a in ARCH]:
            raise ValueError("model file architecture mismatch")
        return cls(np.array(d["params"]))


def model_forward(m: PointSetModel, object_cloud: PartialCloud,
                  support_cloud: PartialCloud, pose: Pose) -> float:
    return m.forward(object_cloud.points, support_cloud.points, pose)
