"""Command-line pipeline: generate -> label -> stats -> train -> eval.

Every command writes a ``<output>.manifest.json`` beside its primary output
recording the full flag set, input/output file hashes, and timing, so any
artifact can be regenerated exactly. All randomness flows from explicit
``--seed`` flags; nothing is ever seeded from the clock.

Exit codes: 0 success, 2 usage, 3 data/file errors, 4 solver budget
exhaustion, 5 model/numeric errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .architectures import ARCHITECTURES, build_model_spec
from .data import (
    Dataset,
    DatasetIOError,
    compute_stats,
    read_dataset,
    write_dataset,
    write_stats_csv,
)
from .exact import DEFAULT_NODE_BUDGET
from .figures import save_boxplot_svg, save_histogram_svg
from .generate import GenConfig
from .metrics import evaluate, grouped_boxplot_stats, write_grouped_csv, write_report_csv
from .nn.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .nn.model import Model
from .nn.spec import ShapeError, from_text
from .nn.training import TrainConfig, TrainingDivergedError, train
from .pipeline import GenReport, LabelingAbortedError, build_labeled_dataset, relabel_dataset
from .regression import fit_regression, load_regression, save_regression

EXIT_DATA = 3
EXIT_BUDGET = 4
EXIT_NUMERIC = 5

TARGETS = {"chi": "chromatic", "omega": "clique"}


def _default_threads() -> int:
    return int(os.environ.get("CHROMAGRAPH_THREADS", "1"))


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(primary_out: Path, command: str, args: argparse.Namespace,
                    inputs: list[Path], outputs: list[Path], started: float,
                    extra: dict | None = None) -> None:
    manifest = {
        "tool": "chromagraph",
        "version": __version__,
        "command": command,
        "flags": {k: v for k, v in vars(args).items() if k != "func"},
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": {str(p): _sha256(p) for p in outputs},
        "duration_s": round(time.time() - started, 3),
    }
    if extra:
        manifest.update(extra)
    with open(str(primary_out) + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_generate(args: argparse.Namespace) -> int:
    started = time.time()
    cfg = GenConfig(max_order=args.max_order, per_order_count=args.per_order, seed=args.seed)
    report = GenReport()
    ds = build_labeled_dataset(
        cfg, split=args.split, node_budget=args.node_budget, threads=args.threads, report=report
    )
    out = Path(args.out)
    write_dataset(ds, out)
    _write_manifest(out, "generate", args, [], [out], started,
                    extra={"records": report.total, "regenerated": report.regenerated})
    print(f"wrote {len(ds)} records to {out} ({report.regenerated} slot(s) regenerated)")
    return 0


def cmd_label(args: argparse.Namespace) -> int:
    started = time.time()
    src = Path(args.infile)
    ds = read_dataset(src)
    relabeled, mismatches = relabel_dataset(ds, node_budget=args.node_budget, threads=args.threads)
    out = Path(args.out)
    write_dataset(relabeled, out)
    _write_manifest(out, "label", args, [src], [out], started, extra={"mismatches": mismatches})
    print(f"relabeled {len(relabeled)} records -> {out}; {mismatches} stored label(s) disagreed")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    started = time.time()
    src = Path(args.infile)
    ds = read_dataset(src)
    stats = compute_stats(ds, TARGETS[args.target])
    out = Path(args.out)
    write_stats_csv(stats, out)
    outputs = [out]
    if args.svg:
        save_histogram_svg(stats, args.svg)
        outputs.append(Path(args.svg))
    _write_manifest(out, "stats", args, [src], outputs, started,
                    extra={"min": stats.minimum, "median": stats.median, "max": stats.maximum})
    print(f"{len(ds)} records; {args.target} min/median/max = "
          f"{stats.minimum}/{stats.median}/{stats.maximum}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    started = time.time()
    target = TARGETS[args.target]
    train_path = Path(args.train)
    train_ds = read_dataset(train_path)
    out = Path(args.out)
    inputs = [train_path]

    if args.arch == "regression":
        model = fit_regression(train_ds, target)
        save_regression(model, out, target=target)
        _write_manifest(out, "train", args, inputs, [out], started,
                        extra={"slope": model.slope, "intercept": model.intercept})
        print(f"regression fit: slope={model.slope:.6f} intercept={model.intercept:.4f} -> {out}")
        return 0

    if not args.valid:
        raise SystemExit("--valid is required for neural architectures")
    valid_path = Path(args.valid)
    valid_ds = read_dataset(valid_path)
    inputs.append(valid_path)

    spec = build_model_spec(args.arch, args.scale, train_ds.order)
    model = Model(spec, seed=args.seed)
    cfg = TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
        patience=args.patience,
        seed=args.seed,
    )
    history = train(
        model,
        train_ds.adjacency_stack()[:, :, :, None],
        train_ds.labels(target).astype(np.float64),
        valid_ds.adjacency_stack()[:, :, :, None],
        valid_ds.labels(target).astype(np.float64),
        cfg,
    )
    save_checkpoint(out, model)
    arch_path = Path(str(out) + ".arch.txt")
    arch_path.write_text(spec.to_text())
    hist_path = Path(str(out) + ".history.csv")
    with open(hist_path, "w") as fh:
        fh.write("epoch,train_mae,valid_mae\n")
        for i, (tm, vm) in enumerate(zip(history.train_mae, history.valid_mae), start=1):
            fh.write(f"{i},{tm!r},{vm!r}\n")
    _write_manifest(out, "train", args, inputs, [out, arch_path, hist_path], started,
                    extra={"best_epoch": history.best_epoch, "epochs_run": history.epochs_run,
                           "best_valid_mae": min(history.valid_mae)})
    print(f"trained {args.arch} (scale {args.scale}) for {history.epochs_run} epoch(s); "
          f"best valid MAE {min(history.valid_mae):.4f} at epoch {history.best_epoch} -> {out}")
    return 0


def _load_model_predictions(args, test_ds: Dataset, target: str) -> tuple[np.ndarray, str, list[Path]]:
    model_path = Path(args.model)
    with open(model_path, "rb") as fh:
        head = fh.read(4)
    if head == b"CHKW":
        arch_path = Path(args.arch_file) if args.arch_file else Path(str(model_path) + ".arch.txt")
        spec = from_text(arch_path.read_text())
        model = load_checkpoint(model_path, spec)
        x = test_ds.adjacency_stack(dtype=model.dtype)[:, :, :, None]
        preds = np.empty(len(x))
        for i in range(len(x)):
            preds[i] = model.forward_batch(x[i : i + 1])[0]
        return preds, f"nn:{arch_path.name}", [model_path, arch_path]
    model = load_regression(model_path)
    return model.predict(test_ds.edge_counts()), "regression", [model_path]


def cmd_eval(args: argparse.Namespace) -> int:
    started = time.time()
    target = TARGETS[args.target]
    test_path = Path(args.test)
    test_ds = read_dataset(test_path)
    actual = test_ds.labels(target).astype(np.float64)
    preds, model_name, model_inputs = _load_model_predictions(args, test_ds, target)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = evaluate(actual, preds, bin_width=args.bin_width)
    report_path = out_dir / "report.csv"
    write_report_csv(report, report_path, target=args.target, model=model_name)
    ae_csv = out_dir / "grouped_ae.csv"
    write_grouped_csv(report.per_group, ae_csv)
    ape_groups = grouped_boxplot_stats(actual, preds, mode="ape", bin_width=args.bin_width)
    ape_csv = out_dir / "grouped_ape.csv"
    write_grouped_csv(ape_groups, ape_csv)
    ae_svg = out_dir / "boxplot_ae.svg"
    save_boxplot_svg(report.per_group, ae_svg, mode="ae", target=target)
    ape_svg = out_dir / "boxplot_ape.svg"
    save_boxplot_svg(ape_groups, ape_svg, mode="ape", target=target)
    _write_manifest(report_path, "eval", args, [test_path] + model_inputs,
                    [report_path, ae_csv, ape_csv, ae_svg, ape_svg], started,
                    extra={"mae": report.mae, "p_0.5": report.p_half,
                           "p_1": report.p_one, "mape": report.mape})
    print(f"{model_name} on {len(test_ds)} records: MAE {report.mae:.4f}  "
          f"P_0.5 {report.p_half:.3f}  P_1 {report.p_one:.3f}  MAPE {report.mape:.2f}%")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromagraph",
        description="Generate exactly-labeled random graphs and train/evaluate "
        "models that predict chromatic number and clique size.",
    )
    parser.add_argument("--version", action="version", version=f"chromagraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate and exactly label a dataset")
    p.add_argument("--max-order", type=int, required=True, help="vertex budget N (>= 2)")
    p.add_argument("--per-order", type=int, required=True, help="graphs per order n in 2..N")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", choices=("train", "valid", "test"), default="train")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker processes (env CHROMAGRAPH_THREADS overrides the default)")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("label", help="recompute exact labels for a dataset file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker processes (env CHROMAGRAPH_THREADS overrides the default)")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("stats", help="label distribution of a dataset")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target", choices=tuple(TARGETS), required=True)
    p.add_argument("--out", required=True, help="histogram CSV path")
    p.add_argument("--svg", help="optional histogram SVG path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="fit a model on a training dataset")
    p.add_argument("--train", required=True)
    p.add_argument("--valid", help="validation dataset (required for neural architectures)")
    p.add_argument("--arch", choices=ARCHITECTURES, required=True)
    p.add_argument("--target", choices=tuple(TARGETS), required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=128)
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=10)
    p.add_argument("--out", required=True, help="checkpoint (or coefficients) path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on a test dataset")
    p.add_argument("--model", required=True, help="checkpoint or regression coefficients file")
    p.add_argument("--arch-file", help="architecture file (default: <model>.arch.txt)")
    p.add_argument("--test", required=True)
    p.add_argument("--target", choices=tuple(TARGETS), required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--bin-width", type=int, default=2)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LabelingAbortedError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (DatasetIOError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ShapeError, TrainingDivergedError, CheckpointError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
