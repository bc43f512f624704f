"""Desk-scale training objective for hyperparameter search.

Trains a one-hidden-layer binary classifier on a synthetic two-blob
dataset and reports the best validation loss seen. It is deliberately
small but keeps the mechanisms a real trainer exposes to a tuner: batch
size, hidden-layer dropout, hidden width, a step-decay learning rate, and
early stopping, so the fitness landscape reacts to every tuned parameter.

Everything is seeded: identical (params, config) pairs give bit-identical
losses, which the evaluation cache relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EvaluationError
from .objectives import Objective, relu, sigmoid, step_decay_lr
from .space import ParamVector


@dataclass(frozen=True)
class ToyTrainerConfig:
    dataset_seed: int = 0
    samples_per_class: int = 50
    epochs: int = 30
    patience: int = 7
    lr0: float = 0.3
    lr_drop: float = 0.5
    lr_period: int = 10
    validation_fraction: float = 0.25

    def __post_init__(self):
        if self.samples_per_class < 1:
            raise ConfigError("samples_per_class must be >= 1")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.patience < 1:
            raise ConfigError("patience must be >= 1")
        if not (self.lr0 > 0):
            raise ConfigError("lr0 must be positive")
        if not (0 < self.lr_drop < 1):
            raise ConfigError("lr_drop must be in (0, 1)")
        if self.lr_period < 1:
            raise ConfigError("lr_period must be >= 1")
        if not (0 < self.validation_fraction < 1):
            raise ConfigError("validation_fraction must be in (0, 1)")
        if int(self.samples_per_class * self.validation_fraction) < 1:
            raise ConfigError(
                "validation_fraction must split off at least one sample per class"
            )


def make_dataset(cfg: ToyTrainerConfig):
    """Two unit-covariance Gaussian blobs at (-1,-1) and (1,1), split
    per class into train/validation by the configured fraction."""
    rng = np.random.default_rng(cfg.dataset_seed)
    n = cfg.samples_per_class
    x_neg = rng.normal(loc=(-1.0, -1.0), scale=1.0, size=(n, 2))
    x_pos = rng.normal(loc=(1.0, 1.0), scale=1.0, size=(n, 2))
    n_val = int(n * cfg.validation_fraction)
    # last n_val draws of each class are held out
    x_train = np.vstack([x_neg[: n - n_val], x_pos[: n - n_val]])
    y_train = np.concatenate([np.zeros(n - n_val), np.ones(n - n_val)])
    x_val = np.vstack([x_neg[n - n_val:], x_pos[n - n_val:]])
    y_val = np.concatenate([np.zeros(n_val), np.ones(n_val)])
    return x_train, y_train, x_val, y_val


def bce_from_logits(z, y) -> float:
    """Mean binary cross-entropy computed from logits, overflow-safe.

    Non-finite logits yield a non-finite loss, which callers treat as a
    declared training failure.
    """
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        return float(np.mean(np.maximum(z, 0.0) - z * y + np.log1p(np.exp(-np.abs(z)))))


class TinyNet:
    """2 -> hidden(relu) -> 1(sigmoid) network with plain gradient descent."""

    def __init__(self, hidden: int, rng: np.random.Generator):
        self.w1 = rng.uniform(-0.5, 0.5, size=(2, hidden))
        self.b1 = rng.uniform(-0.5, 0.5, size=hidden)
        self.w2 = rng.uniform(-0.5, 0.5, size=(hidden, 1))
        self.b2 = rng.uniform(-0.5, 0.5, size=1)

    def logits(self, x, dropout_mask=None):
        h = relu(x @ self.w1 + self.b1)
        if dropout_mask is not None:
            h = h * dropout_mask
        return (h @ self.w2 + self.b2).ravel()

    def loss(self, x, y, dropout_mask=None) -> float:
        return bce_from_logits(self.logits(x, dropout_mask), y)

    def loss_and_grads(self, x, y, dropout_mask=None):
        """Mean BCE and its gradients w.r.t. all four weight blocks."""
        z1 = x @ self.w1 + self.b1
        h = relu(z1)
        if dropout_mask is not None:
            h = h * dropout_mask
        z2 = (h @ self.w2 + self.b2).ravel()
        loss = bce_from_logits(z2, y)

        dz2 = (sigmoid(z2) - y) / len(y)
        gw2 = h.T @ dz2[:, None]
        gb2 = np.array([np.sum(dz2)])
        dh = dz2[:, None] @ self.w2.T
        if dropout_mask is not None:
            dh = dh * dropout_mask
        dz1 = dh * (z1 > 0)
        gw1 = x.T @ dz1
        gb1 = dz1.sum(axis=0)
        return loss, (gw1, gb1, gw2, gb2)

    def step(self, grads, lr: float):
        gw1, gb1, gw2, gb2 = grads
        self.w1 -= lr * gw1
        self.b1 -= lr * gb1
        self.w2 -= lr * gw2
        self.b2 -= lr * gb2


@dataclass(frozen=True)
class TrainOutcome:
    best_val_loss: float
    best_epoch: int  # -1 means the untrained network was never improved on
    epochs_run: int
    initial_val_loss: float


def _derive_seed(cfg: ToyTrainerConfig, batch_size: int, dropout_rate: float,
                 neurons: int) -> np.random.SeedSequence:
    rate_bits = int(np.float64(dropout_rate).view(np.uint64))
    return np.random.SeedSequence([cfg.dataset_seed, batch_size, neurons, rate_bits])


def _require(params: ParamVector, name: str):
    try:
        return params[name]
    except KeyError:
        raise ConfigError(f"trainer objective needs a {name!r} parameter") from None


def train(params: ParamVector, cfg: ToyTrainerConfig) -> TrainOutcome:
    """Full training run for one hyperparameter assignment."""
    batch_size = int(_require(params, "batch_size"))
    dropout_rate = float(_require(params, "dropout_rate"))
    neurons = int(_require(params, "neurons"))
    if batch_size < 1:
        raise ConfigError(f"batch_size must be >= 1, got {batch_size}")
    if neurons < 1:
        raise ConfigError(f"neurons must be >= 1, got {neurons}")
    if not (0.0 <= dropout_rate < 1.0):
        raise ConfigError(f"dropout_rate must be in [0, 1), got {dropout_rate}")

    x_train, y_train, x_val, y_val = make_dataset(cfg)
    rng = np.random.default_rng(_derive_seed(cfg, batch_size, dropout_rate, neurons))
    net = TinyNet(neurons, rng)

    best = net.loss(x_val, y_val)
    if not np.isfinite(best):
        raise EvaluationError("initial validation loss is not finite")
    initial = best
    best_epoch = -1
    since_improve = 0
    epochs_run = 0

    keep = 1.0 - dropout_rate
    n_train = len(y_train)
    for epoch in range(cfg.epochs):
        lr = step_decay_lr(cfg.lr0, epoch, cfg.lr_drop, cfg.lr_period)
        order = rng.permutation(n_train)
        for start in range(0, n_train, batch_size):
            take = order[start:start + batch_size]
            xb, yb = x_train[take], y_train[take]
            mask = None
            if dropout_rate > 0.0:
                # inverted dropout: scale kept units so inference needs none
                mask = (rng.random((len(take), net.w1.shape[1])) >= dropout_rate) / keep
            loss, grads = net.loss_and_grads(xb, yb, mask)
            if not np.isfinite(loss):
                raise EvaluationError(f"training diverged at epoch {epoch}")
            net.step(grads, lr)
        epochs_run = epoch + 1
        val_loss = net.loss(x_val, y_val)
        if not np.isfinite(val_loss):
            raise EvaluationError(f"training diverged at epoch {epoch}")
        if val_loss < best:
            best = val_loss
            best_epoch = epoch
            since_improve = 0
        else:
            since_improve += 1
            if since_improve >= cfg.patience:
                break

    return TrainOutcome(best, best_epoch, epochs_run, initial)


def toy_trainer_evaluate(params: ParamVector, cfg: ToyTrainerConfig) -> float:
    """Best validation loss observed over the run (the untrained network's
    loss counts, so the result can never exceed it)."""
    return train(params, cfg).best_val_loss


def toy_trainer_objective(cfg: ToyTrainerConfig) -> Objective:
    return Objective(
        name="toy-trainer",
        sense="minimize",
        evaluate=lambda params: toy_trainer_evaluate(params, cfg),
    )
