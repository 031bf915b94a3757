"""Deterministic gradient-descent training for point-set models."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn import clip_gradient
from .pointset import LabeledPair, PointSetModel


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    batch_size: int = 32
    epochs: int = 120
    seed: int = 0
    patience: int = 0          # 0 disables early stopping
    holdout_fraction: float = 0.15
    grad_clip: float = 10.0
    loss: str = "cross_entropy"

    def __post_init__(self):
        if min(self.learning_rate, self.batch_size, self.epochs) < 0:
            raise ValueError("training parameters must be nonnegative")
        if self.batch_size == 0 or self.epochs == 0:
            raise ValueError("batch_size and epochs must be positive")


def train(model: PointSetModel, dataset: list[LabeledPair],
          cfg: TrainConfig) -> tuple[PointSetModel, dict]:
    """Plain gradient descent with a fixed seed; returns (model, report).

    The report carries per-epoch training loss and held-out accuracy.
    Deterministic given (dataset order, seed).  Raises on single-class data.
    """
    labels = {float(ex.label > 0.5) for ex in dataset}
    if len(labels) < 2:
        raise ValueError("training data contains a single class")
    rng = np.random.default_rng(cfg.seed)
    n_hold = max(1, int(round(cfg.holdout_fraction * len(dataset))))
    order = rng.permutation(len(dataset))
    hold = [dataset[i] for i in order[:n_hold]]
    trainset = [dataset[i] for i in order[n_hold:]]

    best_hold = np.inf
    best_params = model.params.copy()
    stale = 0
    epochs = []
    for epoch in range(cfg.epochs):
        perm = rng.permutation(len(trainset))
        losses = []
        for lo in range(0, len(trainset), cfg.batch_size):
            batch = [trainset[i] for i in perm[lo:lo + cfg.batch_size]]
            loss, grad = model.backward(batch, cfg.loss)
            grad = clip_gradient(grad, cfg.grad_clip)
            model.params = model.params - cfg.learning_rate * grad
            losses.append(loss)
        hold_loss, hold_acc = evaluate(model, hold, cfg.loss)
        epochs.append({"epoch": epoch, "train_loss": float(np.mean(losses)),
                       "holdout_loss": hold_loss, "holdout_accuracy": hold_acc})
        if hold_loss < best_hold - 1e-9:
            best_hold = hold_loss
            best_params = model.params.copy()
            stale = 0
        else:
            stale += 1
            if cfg.patience and stale >= cfg.patience:
                break
    model.params = best_params
    report = {"epochs": epochs, "holdout_size": n_hold,
              "train_size": len(trainset)}
    return model, report


def evaluate(model: PointSetModel, data: list[LabeledPair],
             loss: str = "cross_entropy") -> tuple[float, float]:
    """(mean loss, accuracy at threshold 0.5) without touching parameters."""
    if not data:
        return 0.0, 0.0
    total = 0.0
    correct = 0
    for ex in data:
        p = model.forward(ex.object_points, ex.support_points, ex.pose)
        y = float(ex.label)
        if loss == "cross_entropy":
            p_c = min(max(p, 1e-12), 1.0 - 1e-12)
            total += -(y * np.log(p_c) + (1.0 - y) * np.log(1.0 - p_c))
        else:
            total += (p - y) ** 2
        correct += int((p > 0.5) == (y > 0.5))
    return float(total / len(data)), correct / len(data)
