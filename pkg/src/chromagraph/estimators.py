"""scikit-learn style estimators over the graph regressors.

Both estimators take X as a stack of adjacency matrices — an
(n_samples, order, order) array, a list of such matrices, or a list of
Graph objects — and integer-valued label vectors y. They compose with the
usual sklearn machinery (get_params / set_params / clone / pipelines).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .architectures import ARCHITECTURES, build_model_spec
from .graphs import Graph
from .nn.model import Model
from .nn.training import TrainConfig, train
from .regression import fit_edge_regression


def as_adjacency_batch(X, order: int | None = None) -> np.ndarray:
    """Validate and normalize X to an (n_samples, order, order) uint8 array.

    Every matrix must be square, symmetric, 0/1 valued with a zero diagonal,
    and all matrices must share one order (equal to ``order`` when given).
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        batch = X
    else:
        mats = [x.adj if isinstance(x, Graph) else np.asarray(x) for x in X]
        if not mats:
            raise ValueError("X must contain at least one graph")
        batch = np.stack(mats)
    if batch.ndim != 3 or batch.shape[1] != batch.shape[2]:
        raise ValueError(f"X must stack square matrices, got shape {batch.shape}")
    if order is not None and batch.shape[1] != order:
        raise ValueError(f"graphs have order {batch.shape[1]}, expected {order}")
    if not np.isin(batch, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    if np.any(batch[:, np.arange(batch.shape[1]), np.arange(batch.shape[1])] != 0):
        raise ValueError("adjacency diagonals must be zero")
    if not np.array_equal(batch, batch.transpose(0, 2, 1)):
        raise ValueError("adjacency matrices must be symmetric")
    return batch.astype(np.uint8)


def _check_y(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(y) != n:
        raise ValueError(f"X has {n} samples but y has {len(y)}")
    return y


class EdgeCountRegressor(RegressorMixin, BaseEstimator):
    """Linear regression of the label on the graph's edge count."""

    def fit(self, X, y):
        batch = as_adjacency_batch(X)
        y = _check_y(y, len(batch))
        edges = batch.sum(axis=(1, 2)) // 2
        model = fit_edge_regression(edges, y)
        self.slope_ = model.slope
        self.intercept_ = model.intercept
        self.n_features_in_ = batch.shape[1] * batch.shape[2]
        return self

    def predict(self, X):
        check_is_fitted(self, "slope_")
        batch = as_adjacency_batch(X)
        edges = batch.sum(axis=(1, 2)) // 2
        return self.slope_ * edges.astype(np.float64) + self.intercept_


class NeuralGraphRegressor(RegressorMixin, BaseEstimator):
    """Neural regressor on raw adjacency matrices.

    Parameters mirror the training configuration; ``architecture`` is one of
    'dense', 'seq_cnn' or 'wide_cnn' and ``scale`` shrinks layer widths for
    desk-scale runs. When no validation set is passed to fit, a fraction of
    the training data is split off for early stopping.
    """

    def __init__(
        self,
        architecture: str = "dense",
        scale: float = 1.0,
        learning_rate: float = 1e-3,
        beta_1: float = 0.9,
        beta_2: float = 0.999,
        epsilon: float = 1e-7,
        batch_size: int = 128,
        max_epochs: int = 50,
        patience: int = 5,
        validation_fraction: float = 0.1,
        seed: int = 0,
    ):
        self.architecture = architecture
        self.scale = scale
        self.learning_rate = learning_rate
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.epsilon = epsilon
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.patience = patience
        self.validation_fraction = validation_fraction
        self.seed = seed

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            beta_1=self.beta_1,
            beta_2=self.beta_2,
            epsilon=self.epsilon,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=self.seed,
        )

    def fit(self, X, y, X_valid=None, y_valid=None):
        if self.architecture not in ARCHITECTURES or self.architecture == "regression":
            raise ValueError(
                f"architecture must be one of {[a for a in ARCHITECTURES if a != 'regression']}, "
                f"got {self.architecture!r}"
            )
        batch = as_adjacency_batch(X)
        y = _check_y(y, len(batch))
        order = batch.shape[1]
        x_all = batch.astype(np.float32)[:, :, :, None]
        if X_valid is not None:
            xv = as_adjacency_batch(X_valid, order=order).astype(np.float32)[:, :, :, None]
            yv = _check_y(y_valid, len(xv))
            xt, yt = x_all, y
        else:
            n_valid = max(1, int(round(self.validation_fraction * len(x_all))))
            if n_valid >= len(x_all):
                raise ValueError("not enough samples to split off a validation set")
            rng = np.random.Generator(
                np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=(0xE57,)))
            )
            perm = rng.permutation(len(x_all))
            xv, yv = x_all[perm[:n_valid]], y[perm[:n_valid]]
            xt, yt = x_all[perm[n_valid:]], y[perm[n_valid:]]

        self.spec_ = build_model_spec(self.architecture, self.scale, order)
        self.model_ = Model(self.spec_, seed=self.seed)
        self.history_ = train(self.model_, xt, yt, xv, yv, self._train_config())
        self.n_features_in_ = order * order
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        batch = as_adjacency_batch(X, order=self.model_.spec.input_shape[0])
        x = batch.astype(np.float32)[:, :, :, None]
        out = np.empty(len(x), dtype=np.float64)
        for i in range(len(x)):  # sample-at-a-time: identical to single forward
            out[i] = self.model_.forward_batch(x[i : i + 1])[0]
        return out
