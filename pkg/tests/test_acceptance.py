"""Acceptance suite: one test per release criterion, one PASS line each.

The large datasets are regenerated deterministically on first use and cached
under .acceptance-cache/ at the repo root (override with CHROMAGRAPH_CACHE).
A cold run rebuilds everything in a few minutes; warm runs reuse the cache.
"""

import itertools
import os
import time
from pathlib import Path

import numpy as np
import pytest

from chromagraph import (
    Dataset,
    GenConfig,
    Graph,
    LabeledGraph,
    apply_permutation,
    brute_force_chromatic,
    brute_force_clique,
    build_dense,
    build_labeled_dataset,
    build_seq_cnn,
    build_wide_cnn,
    chromatic_number,
    fit_regression,
    label_graph,
    max_clique,
    read_dataset,
    write_dataset,
)
from chromagraph.architectures import build_model_spec
from chromagraph.metrics import mae, p_l
from chromagraph.nn import (
    Activation,
    Conv2D,
    Dense,
    Flatten,
    MaxPool2D,
    Model,
    ModelSpec,
    TrainConfig,
    save_checkpoint,
    load_checkpoint,
    train,
)

from conftest import random_graph
from gradcheck import fd_check

CACHE_DIR = Path(os.environ.get("CHROMAGRAPH_CACHE", Path(__file__).parent.parent / ".acceptance-cache"))

TRAIN50 = ("n50_train_k2100_s114740.chrg", GenConfig(max_order=50, per_order_count=2100, seed=114740), "train")
TEST50 = ("n50_test_k205_s561123.chrg", GenConfig(max_order=50, per_order_count=205, seed=561123), "test")
TRAIN20 = ("n20_train_k264_s330311.chrg", GenConfig(max_order=20, per_order_count=264, seed=330311), "train")
VALID20 = ("n20_valid_k27_s330322.chrg", GenConfig(max_order=20, per_order_count=27, seed=330322), "valid")
TEST20 = ("n20_test_k53_s330333.chrg", GenConfig(max_order=20, per_order_count=53, seed=330333), "test")


def _load_or_build(entry) -> Dataset:
    name, cfg, split = entry
    path = CACHE_DIR / name
    if path.exists():
        return read_dataset(path)
    CACHE_DIR.mkdir(parents=True, exist_ok=True)
    ds = build_labeled_dataset(cfg, split=split, threads=1)
    write_dataset(ds, path)
    return ds


@pytest.fixture(scope="session")
def train50():
    return _load_or_build(TRAIN50)


@pytest.fixture(scope="session")
def test50():
    return _load_or_build(TEST50)


def _report(criterion: str, detail: str):
    print(f"\nACCEPTANCE {criterion}: PASS ({detail})")


# --------------------------------------------------------------------------
# 1. Oracle exactness: exhaustive 6-vertex sweep against brute force
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_1_oracle_exactness_exhaustive():
    started = time.monotonic()
    pairs = list(itertools.combinations(range(6), 2))
    mismatches = 0
    for mask in range(1 << 15):
        adj = np.zeros((6, 6), dtype=np.uint8)
        for b, (i, j) in enumerate(pairs):
            if (mask >> b) & 1:
                adj[i, j] = adj[j, i] = 1
        g = Graph(adj)
        if max_clique(g).size != brute_force_clique(g):
            mismatches += 1
        if chromatic_number(g).chromatic != brute_force_chromatic(g):
            mismatches += 1
    elapsed = time.monotonic() - started
    assert mismatches == 0
    assert elapsed < 300, f"exhaustive sweep took {elapsed:.0f}s (budget 300s)"
    _report("1 oracle exactness", f"32768 graphs, 0 mismatches, {elapsed:.0f}s")


# --------------------------------------------------------------------------
# 2. Oracle invariants at scale: sandwich bound and permutation invariance
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_2_oracle_invariants_at_scale(test50):
    records = test50.records
    assert len(records) >= 10_000
    sandwich_violations = 0
    for rec in records:
        max_deg = int(rec.graph.degrees().max())
        if not rec.clique <= rec.chromatic <= max_deg + 1:
            sandwich_violations += 1
    assert sandwich_violations == 0

    rng = np.random.default_rng(987654)
    permutation_violations = 0
    for rec in records:
        perm = rng.permutation(50)
        relabeled = apply_permutation(rec.graph, perm)
        if label_graph(relabeled) != (rec.chromatic, rec.clique):
            permutation_violations += 1
    assert permutation_violations == 0
    _report("2 oracle invariants", f"{len(records)} graphs, 0 violations")


# --------------------------------------------------------------------------
# 3. Distribution sanity: most labels are below 10 at order 50
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_3_distribution_sanity(train50):
    assert len(train50) >= 50_000
    chromatic = train50.labels("chromatic")
    clique = train50.labels("clique")
    frac_chi = float(np.mean(chromatic < 10))
    frac_omega = float(np.mean(clique < 10))
    assert frac_chi > 0.5
    assert frac_omega > 0.5
    _report("3 distribution sanity",
            f"{len(train50)} records, chi<10: {frac_chi:.1%}, omega<10: {frac_omega:.1%}")


# --------------------------------------------------------------------------
# 4. Regression baseline: test MAE inside the reproduction windows
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_4_regression_baseline(train50, test50):
    assert len(train50) >= 100_000 and len(test50) >= 10_000
    windows = {"chromatic": (1.9, 2.7), "clique": (2.2, 3.1)}
    results = {}
    for target, (lo, hi) in windows.items():
        model = fit_regression(train50, target)
        assert model.slope > 0
        test_mae = mae(test50.labels(target), model.predict(test50.edge_counts()))
        assert lo <= test_mae <= hi, f"{target} MAE {test_mae:.3f} outside [{lo}, {hi}]"
        results[target] = test_mae
    _report("4 regression baseline",
            f"MAE chi {results['chromatic']:.3f} in [1.9, 2.7], "
            f"omega {results['clique']:.3f} in [2.2, 3.1]")


# --------------------------------------------------------------------------
# 5a. Gradient checks: every layer kind and all three architectures
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_5a_gradient_checks():
    started = time.monotonic()
    rng = np.random.default_rng(1001)
    checked = 0

    def check(spec, seed, batch=2, max_coords=4):
        nonlocal checked
        model = Model(spec, seed=seed, dtype=np.float64)
        h, w, c = spec.input_shape
        x = rng.standard_normal((batch, h, w, c))
        y = rng.standard_normal(batch) * 2
        checked += fd_check(model, x, y, rng, max_coords=max_coords)

    # every layer kind, 20 random configurations each
    for i in range(20):
        size = int(rng.integers(3, 8))
        check(ModelSpec((1, size, 1), ((Flatten(),),),
                        (Dense(int(rng.integers(2, 6))), Activation("relu"),
                         Dense(1), Activation("linear"))), seed=i)          # dense + relu + flatten
        k = int(rng.integers(1, 4))
        s = int(rng.integers(1, 4))
        n = int(k + s * rng.integers(1, 3))
        check(ModelSpec((n, n, 1),
                        ((Conv2D(int(rng.integers(1, 4)), (k, k), strides=(s, s)),
                          Activation("leaky_relu", 0.3), Flatten()),),
                        (Dense(1), Activation("linear"))), seed=100 + i)    # conv2d + leaky_relu
        p = int(rng.integers(1, 4))
        m = int(p * rng.integers(1, 3) + rng.integers(0, 2) + 2)
        check(ModelSpec((m, m, 1),
                        ((Conv2D(2, (2, 2)), Activation("leaky_relu", 0.3),
                          MaxPool2D(p), Flatten()),),
                        (Dense(1), Activation("linear"))), seed=200 + i)    # maxpool2d
        check(ModelSpec((4, 4, 1),
                        ((Conv2D(2, (2, 2)), Activation("leaky_relu", 0.3), Flatten()),
                         (Flatten(),)),
                        (Dense(3), Activation("relu"),
                         Dense(1), Activation("linear"))), seed=300 + i)    # concat of branches

    # the three architectures at reduced width, 20 weight draws each
    for arch, order in (("dense", 50), ("seq_cnn", 50), ("wide_cnn", 50)):
        spec = build_model_spec(arch, 0.05, order)
        for seed in range(20):
            model = Model(spec, seed=seed, dtype=np.float64)
            x = rng.standard_normal((1, order, order, 1))
            y = rng.standard_normal(1) * 3
            checked += fd_check(model, x, y, rng, max_coords=2)

    elapsed = time.monotonic() - started
    assert elapsed < 600, f"gradient checks took {elapsed:.0f}s (budget 600s)"
    _report("5a gradient checks", f"{checked} coordinates verified, {elapsed:.0f}s")


# --------------------------------------------------------------------------
# 5b. Overfit check: reduced wide CNN memorizes a 200-record subset
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_5b_overfit_wide_cnn(train50):
    started = time.monotonic()
    subset = train50.records[:200]
    x = np.stack([r.graph.adj for r in subset]).astype(np.float32)[:, :, :, None]
    y = np.array([r.chromatic for r in subset], dtype=np.float64)
    model = Model(build_wide_cnn(0.125), seed=3)
    cfg = TrainConfig(batch_size=32, max_epochs=40, patience=40, seed=3)
    history = train(model, x, y, x, y, cfg)
    best = min(history.train_mae)
    elapsed = time.monotonic() - started
    assert best < 0.25, f"train MAE only reached {best:.3f}"
    assert history.epochs_run <= 200
    assert elapsed < 1800, f"overfit run took {elapsed:.0f}s (budget 1800s)"
    _report("5b overfit check",
            f"train MAE {best:.3f} after {history.epochs_run} epochs, {elapsed:.0f}s")


# --------------------------------------------------------------------------
# 5c. Golden architecture dump at scale 1
# --------------------------------------------------------------------------
def test_criterion_5c_golden_architecture_dump():
    golden_dir = Path(__file__).parent / "golden"
    for name, spec in [
        ("dense_scale1.arch.txt", build_dense(1.0)),
        ("seq_cnn_scale1.arch.txt", build_seq_cnn(1.0)),
        ("wide_cnn_scale1.arch.txt", build_wide_cnn(1.0)),
    ]:
        assert spec.to_text() == (golden_dir / name).read_text(), f"{name} drifted"

    dense = build_dense(1.0)
    assert [l.units for l in dense.head if isinstance(l, Dense)] == [1000] * 13 + [1]

    seq = build_seq_cnn(1.0)
    seq_convs = [l for l in seq.branches[0] if isinstance(l, Conv2D)]
    assert [c.filters for c in seq_convs] == [512, 64]
    assert all(c.kernel == (3, 3) for c in seq_convs)
    assert [l.units for l in seq.head if isinstance(l, Dense)] == [300] * 7 + [1]

    wide = build_wide_cnn(1.0)
    assert len(wide.branches) == 5
    for branch in wide.branches:
        convs = [l for l in branch if isinstance(l, Conv2D)]
        assert convs[0].filters == 512
        if len(convs) > 1:
            assert convs[1].filters == 64
    assert [l.units for l in wide.head if isinstance(l, Dense)] == [200] * 7 + [1]
    assert wide.concat_width == 10432
    _report("5c golden architectures", "dense 13x1000, seq 512/64+7x300, wide 5x(512/64)+7x200, concat 10432")


# --------------------------------------------------------------------------
# 5d. Ordering sanity on the shared small benchmark
# --------------------------------------------------------------------------
@pytest.mark.slow
def test_criterion_5d_ordering_sanity():
    train_ds = _load_or_build(TRAIN20)
    valid_ds = _load_or_build(VALID20)
    test_ds = _load_or_build(TEST20)
    assert len(train_ds) >= 5000 and len(test_ds) >= 1000
    target = "chromatic"
    y_test = test_ds.labels(target).astype(np.float64)

    reg = fit_regression(train_ds, target)
    reg_mae = mae(y_test, reg.predict(test_ds.edge_counts()))

    xt = train_ds.adjacency_stack()[:, :, :, None]
    yt = train_ds.labels(target).astype(np.float64)
    xv = valid_ds.adjacency_stack()[:, :, :, None]
    yv = valid_ds.labels(target).astype(np.float64)
    xe = test_ds.adjacency_stack()[:, :, :, None]

    results = {"regression": reg_mae}
    for arch in ("dense", "seq_cnn"):
        model = Model(build_model_spec(arch, 0.125, 20), seed=7)
        cfg = TrainConfig(batch_size=128, max_epochs=40, patience=8, seed=7)
        train(model, xt, yt, xv, yv, cfg)
        preds = np.empty(len(xe))
        for i in range(len(xe)):
            preds[i] = model.forward_batch(xe[i : i + 1])[0]
        results[arch] = mae(y_test, preds)

    assert results["seq_cnn"] < results["dense"] < results["regression"], results
    _report("5d ordering sanity",
            f"seq_cnn {results['seq_cnn']:.3f} < dense {results['dense']:.3f} "
            f"< regression {results['regression']:.3f}")


# --------------------------------------------------------------------------
# 6. Metrics unit suite: worked percentage-error examples and invariants
# --------------------------------------------------------------------------
def test_criterion_6_metrics_unit_suite():
    from chromagraph import ape

    assert round(ape(30, 32), 1) == 6.7
    assert ape(2, 4) == 100.0

    rng = np.random.default_rng(777)
    for _ in range(1000):
        n = int(rng.integers(1, 30))
        actual = rng.integers(1, 20, size=n).astype(float)
        pred = actual + rng.normal(0, rng.random() * 3, size=n)
        thresholds = np.sort(rng.random(4) * 5)
        values = [p_l(actual, pred, l) for l in thresholds]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert (mae(actual, pred) == 0) == (p_l(actual, pred, 0) == 1.0)
    _report("6 metrics unit suite", "APE examples exact, 1000 random vectors consistent")


# --------------------------------------------------------------------------
# 7. Format round-trips: byte-identical datasets and checkpoints
# --------------------------------------------------------------------------
def test_criterion_7_format_round_trips(tmp_path):
    rng = np.random.default_rng(4242)

    for i in range(100):
        order = int(rng.integers(2, 16))
        records = []
        for _ in range(int(rng.integers(0, 6))):
            g = random_graph(order, rng.random(), rng)
            chromatic, clique = label_graph(g)
            records.append(LabeledGraph(graph=g, chromatic=chromatic, clique=clique,
                                        source_order=int(rng.integers(2, order + 1)),
                                        edges=int(g.adj.sum()) // 2))
        ds = Dataset(records=records, split=("train", "valid", "test")[i % 3],
                     gen_seed=int(rng.integers(2**63)), order=order)
        p1, p2 = tmp_path / f"d{i}a.chrg", tmp_path / f"d{i}b.chrg"
        write_dataset(ds, p1)
        write_dataset(read_dataset(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    for i in range(100):
        width = int(rng.integers(1, 5))
        size = int(rng.integers(2, 6))
        spec = ModelSpec((size, size, 1),
                         ((Conv2D(width, (2, 2)), Activation("leaky_relu", 0.3), Flatten()),),
                         (Dense(int(rng.integers(1, 5))), Activation("relu"),
                          Dense(1), Activation("linear")))
        model = Model(spec, seed=i, dtype=np.float64 if i % 4 == 0 else np.float32)
        p1, p2 = tmp_path / f"m{i}a.chkw", tmp_path / f"m{i}b.chkw"
        save_checkpoint(p1, model)
        save_checkpoint(p2, load_checkpoint(p1, spec))
        assert p1.read_bytes() == p2.read_bytes()
    _report("7 format round-trips", "100 datasets + 100 checkpoints byte-identical")
