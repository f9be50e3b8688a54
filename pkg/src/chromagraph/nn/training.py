"""Minibatch training: Adam on mean-absolute-error with early stopping.

The MAE subgradient at an exact hit (prediction == target) is taken as 0,
so perfect predictions never move the weights. Validation MAE is computed
after every epoch; training stops once it has failed to improve for
``patience`` consecutive epochs, and the best-validation weights are
restored before returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Model


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int, batch: int):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    beta_1: float = 0.9
    beta_2: float = 0.999
    epsilon: float = 1e-7
    batch_size: int = 128
    max_epochs: int = 100
    patience: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch_size and max_epochs must be >= 1")


@dataclass
class History:
    train_mae: list[float] = field(default_factory=list)
    valid_mae: list[float] = field(default_factory=list)
    best_epoch: int = 0  # 1-based
    epochs_run: int = 0


class Adam:
    """Bias-corrected first/second moment update, applied in place."""

    def __init__(self, params: list[np.ndarray], cfg: TrainConfig):
        self.params = params
        self.lr = cfg.learning_rate
        self.b1 = cfg.beta_1
        self.b2 = cfg.beta_2
        self.eps = cfg.epsilon
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        b1t = 1.0 - self.b1**self.t
        b2t = 1.0 - self.b2**self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.b1
            m += (1.0 - self.b1) * g
            v *= self.b2
            v += (1.0 - self.b2) * np.square(g)
            p -= self.lr * (m / b1t) / (np.sqrt(v / b2t) + self.eps)


def mae_and_grad(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Batch MAE and its subgradient w.r.t. the predictions."""
    resid = pred - target
    return float(np.mean(np.abs(resid))), np.sign(resid) / len(resid)


def evaluate_mae(model: Model, x: np.ndarray, y: np.ndarray, batch_size: int = 256) -> float:
    total = 0.0
    for i in range(0, len(x), batch_size):
        pred = model.forward_batch(x[i : i + batch_size])
        total += float(np.sum(np.abs(pred - y[i : i + batch_size])))
    return total / len(x)


def train(
    model: Model,
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_valid: np.ndarray,
    y_valid: np.ndarray,
    cfg: TrainConfig,
) -> History:
    """Fit the model in place; returns per-epoch history.

    The recorded train MAE is the running mean over the epoch's minibatches
    (pre-update predictions), the usual progress metric.
    """
    if len(x_train) == 0 or len(x_valid) == 0:
        raise ValueError("training and validation sets must be non-empty")
    if len(x_train) != len(y_train) or len(x_valid) != len(y_valid):
        raise ValueError("inputs and targets must have equal lengths")
    x_train = np.asarray(x_train, dtype=model.dtype)
    y_train = np.asarray(y_train, dtype=model.dtype)
    x_valid = np.asarray(x_valid, dtype=model.dtype)
    y_valid = np.asarray(y_valid, dtype=model.dtype)

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(cfg.seed, spawn_key=(0x7A41,))))
    optimizer = Adam(model.params, cfg)
    history = History()
    best_valid = np.inf
    best_params = [p.copy() for p in model.params]
    since_improved = 0

    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(x_train))
        abs_err_sum = 0.0
        for bi, start in enumerate(range(0, len(order), cfg.batch_size)):
            idx = order[start : start + cfg.batch_size]
            pred = model.forward_batch(x_train[idx])
            loss, dpred = mae_and_grad(pred, y_train[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, bi)
            abs_err_sum += loss * len(idx)
            grads = model.backward_batch(dpred)
            optimizer.step(grads)
        history.train_mae.append(abs_err_sum / len(order))
        valid_mae = evaluate_mae(model, x_valid, y_valid, batch_size=max(cfg.batch_size, 256))
        history.valid_mae.append(valid_mae)
        history.epochs_run = epoch
        if valid_mae < best_valid:
            best_valid = valid_mae
            history.best_epoch = epoch
            for stored, p in zip(best_params, model.params):
                stored[...] = p
            since_improved = 0
        else:
            since_improved += 1
            if since_improved >= cfg.patience:
                break
    model.set_params(best_params)
    return history
