"""Flat-parameter affine layers with hand-written gradients.

Shared by the point-set models and the pair scorer: parameters live in one
flat vector with named slices, so training, serialization and
finite-difference checks all see a single array.
"""
from __future__ import annotations

import numpy as np


class ParamLayout:
    """Named (in_dim, out_dim) affine blocks packed into one flat vector."""

    def __init__(self, blocks: list[tuple[str, int, int]]):
        self.blocks = list(blocks)
        self.slices: dict[str, tuple[slice, slice, int, int]] = {}
        offset = 0
        for name, n_in, n_out in blocks:
            w = slice(offset, offset + n_in * n_out)
            offset += n_in * n_out
            b = slice(offset, offset + n_out)
            offset += n_out
            self.slices[name] = (w, b, n_in, n_out)
        self.size = offset

    def init(self, rng: np.random.Generator) -> np.ndarray:
        params = np.empty(self.size)
        for name, n_in, n_out in self.blocks:
            w, b, _, _ = self.slices[name]
            params[w] = rng.normal(scale=1.0 / np.sqrt(n_in), size=n_in * n_out)
            params[b] = 0.0
        return params

    def weights(self, params: np.ndarray, name: str):
        w, b, n_in, n_out = self.slices[name]
        return params[w].reshape(n_in, n_out), params[b]

    def add_grad(self, grad: np.ndarray, name: str, d_w: np.ndarray,
                 d_b: np.ndarray) -> None:
        w, b, _, _ = self.slices[name]
        grad[w] += d_w.ravel()
        grad[b] += d_b


def affine(params, layout: ParamLayout, name: str, x: np.ndarray) -> np.ndarray:
    w, b = layout.weights(params, name)
    return x @ w + b


def affine_backward(params, layout: ParamLayout, name: str, x: np.ndarray,
                    d_out: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Accumulate parameter gradients; return gradient w.r.t. x."""
    w, _ = layout.weights(params, name)
    if x.ndim == 1:
        layout.add_grad(grad, name, np.outer(x, d_out), d_out)
    else:
        layout.add_grad(grad, name, x.T @ d_out, d_out.sum(axis=0))
    return d_out @ w.T


def sigmoid(x):
    return np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))),
                    np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))


def softplus(x):
    return np.logaddexp(0.0, x)


def clip_gradient(grad: np.ndarray, max_norm: float) -> np.ndarray:
    norm = float(np.linalg.norm(grad))
    if norm > max_norm:
        return grad * (max_norm / norm)
    return grad
