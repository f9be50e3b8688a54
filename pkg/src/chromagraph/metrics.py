"""Evaluation metrics: MAE, within-threshold fractions, percentage errors,
and grouped error-distribution statistics for boxplots.

P_l is the fraction of records whose absolute error is <= l (inclusive).
APE(i) = 100 * |y_i - yhat_i| / y_i, defined only for positive actuals
(labels here are always >= 1). Quartiles use linear interpolation between
order statistics; whiskers extend to the last datum within 1.5 IQR of the
nearer quartile.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


def _check_pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=np.float64).ravel()
    p = np.asarray(predicted, dtype=np.float64).ravel()
    if len(a) != len(p):
        raise ValueError(f"length mismatch: {len(a)} actuals vs {len(p)} predictions")
    if len(a) == 0:
        raise ValueError("need at least one record")
    return a, p


def mae(actual, predicted) -> float:
    """Mean absolute error."""
    a, p = _check_pair(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def p_l(actual, predicted, l: float) -> float:
    """Fraction of records with absolute error <= l."""
    if l < 0:
        raise ValueError(f"threshold must be >= 0, got {l}")
    a, p = _check_pair(actual, predicted)
    return float(np.mean(np.abs(a - p) <= l))


def ape(actual: float, predicted: float) -> float:
    """Absolute percentage error of one record."""
    if actual <= 0:
        raise ValueError(f"APE needs a positive actual value, got {actual}")
    return 100.0 * abs(actual - predicted) / actual


def ape_vector(actual, predicted) -> np.ndarray:
    a, p = _check_pair(actual, predicted)
    if np.any(a <= 0):
        raise ValueError("APE needs positive actual values")
    return 100.0 * np.abs(a - p) / a


def mape(actual, predicted) -> float:
    """Mean absolute percentage error."""
    return float(np.mean(ape_vector(actual, predicted)))


@dataclass(frozen=True)
class GroupStats:
    """Error distribution of the records whose actual label lies in (lo, hi]."""

    lo: int
    hi: int
    n: int
    q1: float | None = None
    median: float | None = None
    q3: float | None = None
    whisker_lo: float | None = None
    whisker_hi: float | None = None


def grouped_boxplot_stats(actual, predicted, mode: str = "ae", bin_width: int = 2) -> list[GroupStats]:
    """Boxplot statistics of the error, grouped by the actual label value.

    Groups are half-open bins (0, w], (w, 2w], ... covering max(actual);
    ``mode`` selects absolute error or absolute percentage error. Empty bins
    are emitted with n=0 and no quartiles.
    """
    if mode not in ("ae", "ape"):
        raise ValueError(f"mode must be 'ae' or 'ape', got {mode!r}")
    if bin_width < 1:
        raise ValueError(f"bin_width must be >= 1, got {bin_width}")
    a, p = _check_pair(actual, predicted)
    errors = np.abs(a - p) if mode == "ae" else ape_vector(a, p)
    n_bins = int(np.ceil(a.max() / bin_width))
    out = []
    for b in range(n_bins):
        lo, hi = b * bin_width, (b + 1) * bin_width
        group = errors[(a > lo) & (a <= hi)]
        if len(group) == 0:
            out.append(GroupStats(lo=lo, hi=hi, n=0))
            continue
        q1, med, q3 = np.percentile(group, [25, 50, 75])
        iqr = q3 - q1
        in_lo = group[group >= q1 - 1.5 * iqr]
        in_hi = group[group <= q3 + 1.5 * iqr]
        out.append(
            GroupStats(
                lo=lo,
                hi=hi,
                n=len(group),
                q1=float(q1),
                median=float(med),
                q3=float(q3),
                whisker_lo=float(in_lo.min()),
                whisker_hi=float(in_hi.max()),
            )
        )
    return out


@dataclass(frozen=True)
class EvalReport:
    """Headline metrics of one model on one dataset."""

    mae: float
    p_half: float
    p_one: float
    mape: float
    n: int
    per_group: list[GroupStats] = field(default_factory=list)

    def rows(self, target: str, model: str) -> list[tuple[str, str, str, float]]:
        return [
            ("mae", target, model, self.mae),
            ("p_0.5", target, model, self.p_half),
            ("p_1", target, model, self.p_one),
            ("mape", target, model, self.mape),
            ("n", target, model, float(self.n)),
        ]


def evaluate(actual, predicted, bin_width: int = 2) -> EvalReport:
    """All headline metrics plus grouped absolute-error statistics."""
    a, p = _check_pair(actual, predicted)
    return EvalReport(
        mae=mae(a, p),
        p_half=p_l(a, p, 0.5),
        p_one=p_l(a, p, 1.0),
        mape=mape(a, p),
        n=len(a),
        per_group=grouped_boxplot_stats(a, p, mode="ae", bin_width=bin_width),
    )


def write_report_csv(report: EvalReport, path, target: str, model: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "target", "model", "value"])
        for row in report.rows(target, model):
            writer.writerow(row)


def read_report_csv(path) -> dict[str, float]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return {row["metric"]: float(row["value"]) for row in reader}


def write_grouped_csv(groups: list[GroupStats], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_lo", "bin_hi", "n", "q1", "median", "q3", "whisker_lo", "whisker_hi"])
        for g in groups:
            writer.writerow(
                [g.lo, g.hi, g.n]
                + ["" if v is None else v for v in (g.q1, g.median, g.q3, g.whisker_lo, g.whisker_hi)]
            )
