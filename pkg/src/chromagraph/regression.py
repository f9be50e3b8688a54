"""Edge-count linear regression baseline: y_hat = slope * |E| + intercept."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset


class DegenerateDesignError(ValueError):
    """All edge counts are equal; the slope is unidentifiable."""


@dataclass(frozen=True)
class RegressionModel:
    slope: float
    intercept: float

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError("regression coefficients must be finite")

    def predict(self, edge_counts) -> np.ndarray:
        return self.slope * np.asarray(edge_counts, dtype=np.float64) + self.intercept


def fit_edge_regression(edge_counts, targets) -> RegressionModel:
    """Ordinary least squares of target on edge count (closed form)."""
    x = np.asarray(edge_counts, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("need two equal-length 1-d arrays with at least 2 points")
    x_mean = x.mean()
    y_mean = y.mean()
    var = np.sum((x - x_mean) ** 2)
    if var == 0:
        raise DegenerateDesignError("all edge counts are equal")
    slope = float(np.sum((x - x_mean) * (y - y_mean)) / var)
    return RegressionModel(slope=slope, intercept=float(y_mean - slope * x_mean))


def fit_regression(ds: Dataset, target: str) -> RegressionModel:
    """Fit the baseline on a dataset's edge counts for 'chromatic' or 'clique'."""
    return fit_edge_regression(ds.edge_counts(), ds.labels(target))


def save_regression(model: RegressionModel, path, target: str | None = None) -> None:
    payload = {"kind": "edge-regression", "slope": model.slope, "intercept": model.intercept}
    if target is not None:
        payload["target"] = target
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_regression(path) -> RegressionModel:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("kind") != "edge-regression":
        raise ValueError(f"{path} is not an edge-regression coefficients file")
    return RegressionModel(slope=payload["slope"], intercept=payload["intercept"])
