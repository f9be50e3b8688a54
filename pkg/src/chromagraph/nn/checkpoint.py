"""Weight checkpoints.

Layout (little-endian):

    magic b"CHKW" | version u16 | dtype code u8 (4 = float32, 8 = float64)
    | architecture SHA-256 (32 bytes) | parameter count u32
    | per parameter: element count u64, then raw little-endian floats

Parameters appear in model declaration order and are stored flat; shapes
come from the architecture, whose hash binds checkpoint to spec.
"""

from __future__ import annotations

import struct

import numpy as np

from .model import Model
from .spec import ModelSpec

MAGIC = b"CHKW"
VERSION = 1

_HEADER = struct.Struct("<4sHB32sI")


class CheckpointError(Exception):
    pass


class CheckpointMismatchError(CheckpointError):
    """Checkpoint was written for a different architecture."""


def save_checkpoint(path, model: Model) -> None:
    params = model.params
    with open(path, "wb") as fh:
        fh.write(
            _HEADER.pack(MAGIC, VERSION, model.dtype.itemsize, model.spec.sha256(), len(params))
        )
        for p in params:
            fh.write(struct.pack("<Q", p.size))
            fh.write(np.ascontiguousarray(p, dtype=f"<f{model.dtype.itemsize}").tobytes())


def read_checkpoint(path) -> tuple[bytes, np.dtype, list[np.ndarray]]:
    """Raw contents: (architecture hash, dtype, flat parameter arrays)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CheckpointError("file shorter than checkpoint header")
    magic, version, itemsize, spec_hash, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"checkpoint version {version}, expected {VERSION}")
    if itemsize not in (4, 8):
        raise CheckpointError(f"unknown dtype code {itemsize}")
    dtype = np.dtype(f"<f{itemsize}")
    arrays = []
    off = _HEADER.size
    for _ in range(count):
        if off + 8 > len(raw):
            raise CheckpointError("truncated checkpoint")
        (size,) = struct.unpack_from("<Q", raw, off)
        off += 8
        end = off + size * itemsize
        if end > len(raw):
            raise CheckpointError("truncated checkpoint")
        arrays.append(np.frombuffer(raw[off:end], dtype=dtype).copy())
        off = end
    if off != len(raw):
        raise CheckpointError("trailing bytes after last parameter")
    return spec_hash, dtype, arrays


def load_checkpoint(path, spec: ModelSpec) -> Model:
    """Rebuild a model from spec + stored weights; hashes must match."""
    spec_hash, dtype, arrays = read_checkpoint(path)
    if spec_hash != spec.sha256():
        raise CheckpointMismatchError(
            "checkpoint architecture hash does not match the given spec"
        )
    model = Model(spec, seed=0, dtype=dtype)
    params = model.params
    if len(arrays) != len(params):
        raise CheckpointError(f"checkpoint has {len(arrays)} parameters, model needs {len(params)}")
    shaped = []
    for flat, p in zip(arrays, params):
        if flat.size != p.size:
            raise CheckpointError(f"parameter size mismatch: {flat.size} vs {p.size}")
        shaped.append(flat.reshape(p.shape))
    model.set_params(shaped)
    return model
