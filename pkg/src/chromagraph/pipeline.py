"""End-to-end dataset production: generate graphs, label them exactly.

A labeling slot is (order, repetition). If the coloring search blows its
node budget on a slot, that graph is discarded and the slot is retried with
a fresh random substream (attempt index bumped); after ``max_attempts``
failures the whole run aborts. Output is a pure function of the config, no
matter how many worker processes are used.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .data import Dataset, LabeledGraph, _pack_graph, _unpack_graph
from .exact import DEFAULT_NODE_BUDGET, SolverBudgetError, label_graph
from .generate import GenConfig, generate_embedded, stream_for
from .graphs import edge_count

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 5


class LabelingAbortedError(RuntimeError):
    """A slot kept exhausting the solver budget after every retry."""


@dataclass
class GenReport:
    """Bookkeeping from one dataset build."""

    total: int = 0
    regenerated_slots: list[tuple[int, int]] = field(default_factory=list)

    @property
    def regenerated(self) -> int:
        return len(self.regenerated_slots)


def _label_slot(args) -> tuple[int, int, int, int, int, int, bytes]:
    """Worker: build and label the graph for one slot, retrying on budget blowups."""
    seed, n, rep, max_order, node_budget = args
    for attempt in range(MAX_ATTEMPTS):
        g = generate_embedded(n, max_order, stream_for(seed, n, rep, attempt))
        try:
            chromatic, clique = label_graph(g, node_budget=node_budget)
        except SolverBudgetError:
            continue
        return n, rep, attempt, chromatic, clique, edge_count(g), _pack_graph(g)
    raise LabelingAbortedError(
        f"slot (order={n}, rep={rep}) exceeded the solver budget {MAX_ATTEMPTS} times"
    )


def build_labeled_dataset(
    cfg: GenConfig,
    split: str,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int | None = None,
    report: GenReport | None = None,
) -> Dataset:
    """Generate and exactly label cfg.total graphs, in slot order."""
    threads = threads if threads is not None else (os.cpu_count() or 1)
    slots = [
        (cfg.seed, n, rep, cfg.max_order, node_budget)
        for n in range(2, cfg.max_order + 1)
        for rep in range(cfg.per_order_count)
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_label_slot, slots, chunksize=64))
    else:
        results = [_label_slot(s) for s in slots]

    records = []
    for n, rep, attempt, chromatic, clique, edges, packed in results:
        if attempt > 0:
            log.warning("slot (order=%d, rep=%d) regenerated %d time(s)", n, rep, attempt)
            if report is not None:
                report.regenerated_slots.append((n, rep))
        records.append(
            LabeledGraph(
                graph=_unpack_graph(cfg.max_order, packed),
                chromatic=chromatic,
                clique=clique,
                source_order=n,
                edges=edges,
            )
        )
    if report is not None:
        report.total = len(records)
    return Dataset(records=records, split=split, gen_seed=cfg.seed, order=cfg.max_order)


def relabel_dataset(
    ds: Dataset,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int | None = None,
) -> tuple[Dataset, int]:
    """Recompute every label from scratch; returns (dataset, mismatch count).

    Acts as an integrity check: a nonzero mismatch count means the stored
    labels disagree with a fresh exact solve.
    """
    threads = threads if threads is not None else (os.cpu_count() or 1)
    args = [(ds.order, _pack_graph(r.graph), node_budget) for r in ds.records]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            labels = list(pool.map(_relabel_one, args, chunksize=64))
    else:
        labels = [_relabel_one(a) for a in args]
    mismatches = 0
    records = []
    for rec, (chromatic, clique) in zip(ds.records, labels):
        if (chromatic, clique) != (rec.chromatic, rec.clique):
            mismatches += 1
        records.append(
            LabeledGraph(
                graph=rec.graph,
                chromatic=chromatic,
                clique=clique,
                source_order=rec.source_order,
                edges=rec.edges,
            )
        )
    out = Dataset(records=records, split=ds.split, gen_seed=ds.gen_seed, order=ds.order)
    return out, mismatches


def _relabel_one(args) -> tuple[int, int]:
    order, packed, node_budget = args
    return label_graph(_unpack_graph(order, packed), node_budget=node_budget)
