"""Declarative layer/model descriptions with static shape checking.

A ModelSpec is one input feeding one or more branch pipelines whose
flattened outputs are concatenated and run through a head that ends in a
single linear unit. Shape arithmetic uses valid (unpadded) convolutions:
out = floor((in - kernel) / stride) + 1.

Specs serialize to a plain-text format (see ``to_text``) whose SHA-256 is
the identity checked by weight checkpoints.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union


class ShapeError(ValueError):
    """A layer cannot accept its input shape; message names the layer."""


@dataclass(frozen=True)
class Dense:
    units: int

    def __post_init__(self):
        if self.units < 1:
            raise ValueError(f"dense units must be >= 1, got {self.units}")

    def out_shape(self, shape):
        if len(shape) != 1:
            raise ShapeError(f"dense expects a flat input, got {shape}")
        return (self.units,)

    def to_text(self):
        return f"dense units={self.units}"


@dataclass(frozen=True)
class Conv2D:
    filters: int
    kernel: tuple[int, int]
    strides: tuple[int, int] = (1, 1)

    def __post_init__(self):
        if self.filters < 1:
            raise ValueError(f"conv filters must be >= 1, got {self.filters}")
        if min(self.kernel) < 1 or min(self.strides) < 1:
            raise ValueError(f"kernel {self.kernel} and strides {self.strides} must be >= 1")

    def out_shape(self, shape):
        if len(shape) != 3:
            raise ShapeError(f"conv2d expects (height, width, channels), got {shape}")
        h, w, _ = shape
        kh, kw = self.kernel
        sh, sw = self.strides
        if h < kh or w < kw:
            raise ShapeError(f"conv2d kernel {self.kernel} does not fit input {shape}")
        return ((h - kh) // sh + 1, (w - kw) // sw + 1, self.filters)

    def to_text(self):
        return (
            f"conv2d filters={self.filters} kernel={self.kernel[0]}x{self.kernel[1]} "
            f"strides={self.strides[0]}x{self.strides[1]}"
        )


@dataclass(frozen=True)
class MaxPool2D:
    pool: int

    def __post_init__(self):
        if self.pool < 1:
            raise ValueError(f"pool size must be >= 1, got {self.pool}")

    def out_shape(self, shape):
        if len(shape) != 3:
            raise ShapeError(f"maxpool2d expects (height, width, channels), got {shape}")
        h, w, c = shape
        if h < self.pool or w < self.pool:
            raise ShapeError(f"maxpool2d pool={self.pool} does not fit input {shape}")
        return (h // self.pool, w // self.pool, c)

    def to_text(self):
        return f"maxpool2d pool={self.pool}"


@dataclass(frozen=True)
class Flatten:
    def out_shape(self, shape):
        size = 1
        for d in shape:
            size *= d
        return (size,)

    def to_text(self):
        return "flatten"


@dataclass(frozen=True)
class Activation:
    kind: str  # 'relu' | 'leaky_relu' | 'linear'
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("relu", "leaky_relu", "linear"):
            raise ValueError(f"unknown activation {self.kind!r}")

    def out_shape(self, shape):
        return shape

    def to_text(self):
        if self.kind == "leaky_relu":
            return f"leaky_relu alpha={self.alpha!r}"
        return self.kind


LayerSpec = Union[Dense, Conv2D, MaxPool2D, Flatten, Activation]


@dataclass(frozen=True)
class ModelSpec:
    """One input, parallel branch pipelines, concat, scalar-output head."""

    input_shape: tuple[int, int, int]
    branches: tuple[tuple[LayerSpec, ...], ...]
    head: tuple[LayerSpec, ...]

    def shape_plan(self) -> tuple[list[list[tuple]], list[tuple]]:
        """Per-layer output shapes for every branch and the head.

        Raises ShapeError (naming the offending layer) if any layer cannot
        accept its input, if a branch output is not flat, or if the model
        does not end in a single linear unit.
        """
        if not self.branches:
            raise ShapeError("model needs at least one branch")
        branch_shapes = []
        concat_width = 0
        for bi, branch in enumerate(self.branches):
            shape = self.input_shape
            shapes = []
            for li, layer in enumerate(branch):
                try:
                    shape = layer.out_shape(shape)
                except ShapeError as e:
                    raise ShapeError(f"branch {bi} layer {li} ({layer.to_text()}): {e}") from None
                shapes.append(shape)
            if len(shape) != 1:
                raise ShapeError(f"branch {bi} must end flat for concat, got {shape}")
            concat_width += shape[0]
            branch_shapes.append(shapes)
        shape = (concat_width,)
        head_shapes = []
        for li, layer in enumerate(self.head):
            try:
                shape = layer.out_shape(shape)
            except ShapeError as e:
                raise ShapeError(f"head layer {li} ({layer.to_text()}): {e}") from None
            head_shapes.append(shape)
        if shape != (1,):
            raise ShapeError(f"model output must be a single unit, got {shape}")
        last_act = next(
            (l for l in reversed(self.head) if isinstance(l, Activation)), Activation("linear")
        )
        if last_act.kind != "linear":
            raise ShapeError("output activation must be linear")
        return branch_shapes, head_shapes

    @property
    def concat_width(self) -> int:
        branch_shapes, _ = self.shape_plan()
        return sum(s[-1][0] for s in branch_shapes)

    def to_text(self) -> str:
        """Canonical plain-text form; also the identity hashed by checkpoints."""
        lines = ["chromagraph-architecture v1"]
        lines.append("input " + "x".join(str(d) for d in self.input_shape))
        for branch in self.branches:
            lines.append("branch")
            lines.extend("  " + layer.to_text() for layer in branch)
        lines.append("concat")
        lines.extend("  " + layer.to_text() for layer in self.head)
        return "\n".join(lines) + "\n"

    def sha256(self) -> bytes:
        return hashlib.sha256(self.to_text().encode()).digest()


def _parse_layer(line: str) -> LayerSpec:
    parts = line.split()
    kind, kv = parts[0], dict(p.split("=", 1) for p in parts[1:])
    if kind == "dense":
        return Dense(units=int(kv["units"]))
    if kind == "conv2d":
        kh, kw = (int(x) for x in kv["kernel"].split("x"))
        sh, sw = (int(x) for x in kv.get("strides", "1x1").split("x"))
        return Conv2D(filters=int(kv["filters"]), kernel=(kh, kw), strides=(sh, sw))
    if kind == "maxpool2d":
        return MaxPool2D(pool=int(kv["pool"]))
    if kind == "flatten":
        return Flatten()
    if kind == "leaky_relu":
        return Activation("leaky_relu", alpha=float(kv["alpha"]))
    if kind in ("relu", "linear"):
        return Activation(kind)
    raise ValueError(f"unknown layer line {line!r}")


def from_text(text: str) -> ModelSpec:
    """Parse the plain-text form produced by ModelSpec.to_text."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "chromagraph-architecture v1":
        raise ValueError("not a chromagraph architecture file")
    if not lines[1].startswith("input "):
        raise ValueError("missing input line")
    input_shape = tuple(int(d) for d in lines[1].split()[1].split("x"))
    if len(input_shape) != 3:
        raise ValueError(f"input shape must have 3 dims, got {input_shape}")
    branches: list[tuple[LayerSpec, ...]] = []
    head: list[LayerSpec] = []
    current: list[LayerSpec] | None = None
    in_head = False
    for ln in lines[2:]:
        stripped = ln.strip()
        if stripped == "branch":
            if current is not None:
                branches.append(tuple(current))
            current = []
            continue
        if stripped == "concat":
            if current is not None:
                branches.append(tuple(current))
            current = head
            in_head = True
            continue
        if current is None:
            raise ValueError(f"layer line before any 'branch': {stripped!r}")
        current.append(_parse_layer(stripped))
    if not in_head:
        raise ValueError("missing 'concat' section")
    return ModelSpec(input_shape=input_shape, branches=tuple(branches), head=tuple(head))
