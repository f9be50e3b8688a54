"""Labeled-graph datasets: binary persistence, CSV export, splits, stats.

File format (little-endian, version 1):

    header   magic b"CHRG" | version u16 | split u8 | order u8
             | record count u64 | generator seed u64
    records  per record: source_order u8 | chromatic u8 | clique u8
             | edges u16 | upper triangle of the adjacency matrix, row-major
             (pairs (0,1),(0,2),...,(1,2),...), bit-packed LSB-first into
             ceil(order*(order-1)/2 / 8) bytes
    trailer  CRC-32 of the records region, u32

Bit-packing keeps a quarter-million order-50 graphs around 40 MB, and the
checksum turns silent corruption into a hard error. The CSV export exists
for interoperability only; the binary file is authoritative.
"""

from __future__ import annotations

import csv
import struct
import zlib
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, edge_count

MAGIC = b"CHRG"
FORMAT_VERSION = 1
SPLITS = ("train", "valid", "test")

_HEADER = struct.Struct("<4sHBBQQ")
_REC_FIXED = struct.Struct("<BBBH")


class DatasetIOError(Exception):
    """Base class for dataset persistence failures."""


class CorruptHeaderError(DatasetIOError):
    pass


class VersionMismatchError(DatasetIOError):
    pass


class TruncatedRecordsError(DatasetIOError):
    pass


class ChecksumMismatchError(DatasetIOError):
    pass


class InvalidRecordError(DatasetIOError):
    pass


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """A graph together with its exact chromatic and clique numbers."""

    graph: Graph
    chromatic: int
    clique: int
    source_order: int  # order of the un-embedded graph this was generated from
    edges: int

    def __post_init__(self):
        n = self.graph.order
        if not 1 <= self.clique <= self.chromatic <= n:
            raise InvalidRecordError(
                f"labels must satisfy 1 <= clique <= chromatic <= order, "
                f"got clique={self.clique} chromatic={self.chromatic} order={n}"
            )
        if not 1 <= self.source_order <= n:
            raise InvalidRecordError(f"source_order {self.source_order} out of range for order {n}")
        actual = edge_count(self.graph)
        if self.edges != actual:
            raise InvalidRecordError(f"edge count field {self.edges} != actual {actual}")

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.chromatic == other.chromatic
            and self.clique == other.clique
            and self.source_order == other.source_order
            and self.edges == other.edges
        )


@dataclass(eq=False)
class Dataset:
    """An ordered collection of LabeledGraphs, all of the same order."""

    records: list[LabeledGraph]
    split: str
    gen_seed: int = 0
    format_version: int = FORMAT_VERSION
    order: int | None = None  # required when records is empty

    def __post_init__(self):
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")
        if self.records:
            orders = {r.graph.order for r in self.records}
            if len(orders) != 1:
                raise ValueError(f"all records must share one graph order, got {sorted(orders)}")
            inferred = orders.pop()
            if self.order is not None and self.order != inferred:
                raise ValueError(f"declared order {self.order} != record order {inferred}")
            self.order = inferred
        elif self.order is None:
            raise ValueError("empty dataset needs an explicit order")

    def __len__(self):
        return len(self.records)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.split == other.split
            and self.gen_seed == other.gen_seed
            and self.format_version == other.format_version
            and self.order == other.order
            and self.records == other.records
        )

    def labels(self, target: str) -> np.ndarray:
        """Label vector for target 'chromatic' or 'clique'."""
        if target not in ("chromatic", "clique"):
            raise ValueError(f"target must be 'chromatic' or 'clique', got {target!r}")
        return np.array([getattr(r, target) for r in self.records], dtype=np.int64)

    def edge_counts(self) -> np.ndarray:
        return np.array([r.edges for r in self.records], dtype=np.int64)

    def adjacency_stack(self, dtype=np.float32) -> np.ndarray:
        """All adjacency matrices as one (n_records, order, order) array."""
        return np.stack([r.graph.adj for r in self.records]).astype(dtype)


@dataclass(frozen=True)
class DistributionStats:
    """Histogram and coarse quantiles of one label across a dataset."""

    target: str
    histogram: dict[int, int] = field(default_factory=dict)
    minimum: int = 0
    median: float = 0.0
    maximum: int = 0

    @property
    def total(self) -> int:
        return sum(self.histogram.values())


def _tri_bytes(order: int) -> int:
    return (order * (order - 1) // 2 + 7) // 8


def _pack_graph(g: Graph) -> bytes:
    rows, cols = np.triu_indices(g.order, k=1)
    bits = g.adj[rows, cols]
    return np.packbits(bits, bitorder="little").tobytes()


def _unpack_graph(order: int, blob: bytes) -> Graph:
    m = order * (order - 1) // 2
    bits = np.unpackbits(np.frombuffer(blob, dtype=np.uint8), count=m, bitorder="little")
    adj = np.zeros((order, order), dtype=np.uint8)
    rows, cols = np.triu_indices(order, k=1)
    adj[rows, cols] = bits
    adj |= adj.T
    return Graph(adj)


def write_dataset(ds: Dataset, path) -> None:
    """Serialize to the binary format; write-then-read round-trips exactly."""
    if ds.order > 255:
        raise DatasetIOError(f"format stores order as u8; order {ds.order} unsupported")
    body = bytearray()
    for rec in ds.records:
        body += _REC_FIXED.pack(rec.source_order, rec.chromatic, rec.clique, rec.edges)
        body += _pack_graph(rec.graph)
    header = _HEADER.pack(
        MAGIC, ds.format_version, SPLITS.index(ds.split), ds.order, len(ds.records), ds.gen_seed
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)
        fh.write(struct.pack("<I", zlib.crc32(bytes(body))))


def read_dataset(path) -> Dataset:
    """Inverse of write_dataset. Raises a distinct error per failure mode."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CorruptHeaderError(f"file shorter than header ({len(raw)} bytes)")
    magic, version, split_tag, order, count, gen_seed = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CorruptHeaderError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"format version {version}, expected {FORMAT_VERSION}")
    if split_tag >= len(SPLITS):
        raise CorruptHeaderError(f"unknown split tag {split_tag}")
    if order < 1:
        raise CorruptHeaderError("order must be >= 1")
    rec_size = _REC_FIXED.size + _tri_bytes(order)
    expected = _HEADER.size + count * rec_size + 4
    if len(raw) != expected:
        raise TruncatedRecordsError(f"expected {expected} bytes for {count} records, file has {len(raw)}")
    body = raw[_HEADER.size : -4]
    (crc,) = struct.unpack("<I", raw[-4:])
    if zlib.crc32(body) != crc:
        raise ChecksumMismatchError("record region CRC-32 mismatch")
    records = []
    off = 0
    for _ in range(count):
        source_order, chromatic, clique, edges = _REC_FIXED.unpack_from(body, off)
        off += _REC_FIXED.size
        graph = _unpack_graph(order, body[off : off + _tri_bytes(order)])
        off += _tri_bytes(order)
        records.append(
            LabeledGraph(
                graph=graph, chromatic=chromatic, clique=clique, source_order=source_order, edges=edges
            )
        )
    return Dataset(
        records=records,
        split=SPLITS[split_tag],
        gen_seed=gen_seed,
        format_version=version,
        order=order,
    )


def write_csv(ds: Dataset, path) -> None:
    """Interop export: order,chromatic,clique,edges,adj_hex (binary stays authoritative)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", "chromatic", "clique", "edges", "adj_hex"])
        for rec in ds.records:
            writer.writerow(
                [ds.order, rec.chromatic, rec.clique, rec.edges, _pack_graph(rec.graph).hex()]
            )


def compute_stats(ds: Dataset, target: str) -> DistributionStats:
    """Exact histogram plus min/median/max of the chosen label."""
    if not ds.records:
        raise ValueError("cannot compute stats of an empty dataset")
    values = ds.labels(target)
    hist = Counter(int(v) for v in values)
    return DistributionStats(
        target=target,
        histogram=dict(sorted(hist.items())),
        minimum=int(values.min()),
        median=float(np.median(values)),
        maximum=int(values.max()),
    )


def write_stats_csv(stats: DistributionStats, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "count"])
        for value, count in stats.histogram.items():
            writer.writerow([value, count])


def split_dataset(
    records: list[LabeledGraph],
    fractions: tuple[float, float, float],
    seed: int,
    gen_seed: int = 0,
) -> tuple[Dataset, Dataset, Dataset]:
    """Randomly partition records into train/valid/test datasets.

    All three fractions must be positive and sum to 1; sizes match the
    fractions up to rounding, and the assignment is a pure function of seed.
    """
    f_train, f_valid, f_test = fractions
    if min(fractions) <= 0:
        raise ValueError(f"all split fractions must be positive, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"split fractions must sum to 1, got {sum(fractions)}")
    n = len(records)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(0x5B11,))))
    perm = rng.permutation(n)
    n_train = round(f_train * n)
    n_valid = min(round(f_valid * n), n - n_train)
    order = records[0].graph.order if records else 1
    buckets = (
        [records[i] for i in perm[:n_train]],
        [records[i] for i in perm[n_train : n_train + n_valid]],
        [records[i] for i in perm[n_train + n_valid :]],
    )
    return tuple(
        Dataset(records=bucket, split=split, gen_seed=gen_seed, order=order)
        for bucket, split in zip(buckets, SPLITS)
    )
