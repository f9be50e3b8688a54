"""Static SVG figures: label histograms and grouped error boxplots."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .data import DistributionStats
from .metrics import GroupStats

_TARGET_LABEL = {"chromatic": "chromatic number", "clique": "maximum clique size"}


def save_histogram_svg(stats: DistributionStats, path) -> None:
    """Bar chart of a label's distribution across a dataset."""
    fig, ax = plt.subplots(figsize=(6, 4))
    values = list(stats.histogram.keys())
    counts = list(stats.histogram.values())
    ax.bar(values, counts, width=0.9, color="#4878cf", edgecolor="none")
    ax.set_xlabel(_TARGET_LABEL.get(stats.target, stats.target))
    ax.set_ylabel("count")
    ax.set_title(f"Distribution of {_TARGET_LABEL.get(stats.target, stats.target)}")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def save_boxplot_svg(groups: list[GroupStats], path, mode: str = "ae", target: str = "chromatic") -> None:
    """Boxplot of error distributions per label group (precomputed stats)."""
    boxes = []
    for g in groups:
        if g.n == 0:
            continue
        boxes.append(
            {
                "label": f"({g.lo}, {g.hi}]",
                "whislo": g.whisker_lo,
                "q1": g.q1,
                "med": g.median,
                "q3": g.q3,
                "whishi": g.whisker_hi,
                "fliers": [],
            }
        )
    fig, ax = plt.subplots(figsize=(7, 4))
    if boxes:
        ax.bxp(boxes, showfliers=False)
    ax.set_xlabel(f"{_TARGET_LABEL.get(target, target)} group")
    ax.set_ylabel("absolute error" if mode == "ae" else "absolute percentage error (%)")
    title_kind = "Absolute Error" if mode == "ae" else "Percent Error"
    ax.set_title(f"{title_kind} Distribution by {_TARGET_LABEL.get(target, target).title()}")
    ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
