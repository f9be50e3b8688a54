"""The concrete model families, as ModelSpec builders.

Three neural architectures predict a graph label from the raw adjacency
matrix (plus an edge-count linear regression baseline living in
``regression``):

* dense: flatten, then 13 hidden layers of 1000 ReLU units;
* seq_cnn: conv 3x3/512 -> pool 2 -> conv 3x3/64 -> pool 2 -> flatten,
  then 7 hidden layers of 300 units, LeakyReLU throughout;
* wide_cnn: five parallel convolution pipelines with kernel sizes 3, 5,
  10, 25 and 50 (first conv 512 filters, second conv 64 where present),
  concatenated, then 7 hidden layers of 200 units, LeakyReLU throughout.

Every model ends in a single linear unit. A ``scale`` factor in (0, 1]
multiplies all filter/unit counts (rounded half-up, floored at 1) so the
same topologies run at desk scale; scale=1 is the full-size geometry.
"""

from __future__ import annotations

import math

from .nn.spec import Activation, Conv2D, Dense, Flatten, LayerSpec, MaxPool2D, ModelSpec

ARCHITECTURES = ("regression", "dense", "seq_cnn", "wide_cnn")

LEAKY_ALPHA = 0.3


def scaled(count: int, scale: float) -> int:
    """count * scale, rounded half-up, never below 1."""
    if not 0 < scale <= 1:
        raise ValueError(f"scale must be in (0, 1], got {scale}")
    return max(1, math.floor(count * scale + 0.5))


def _relu() -> Activation:
    return Activation("relu")


def _leaky() -> Activation:
    return Activation("leaky_relu", alpha=LEAKY_ALPHA)


def _pool(size: int = 2) -> MaxPool2D:
    return MaxPool2D(pool=size)


def build_dense(scale: float = 1.0, order: int = 50) -> ModelSpec:
    """Flattened adjacency into 13 hidden dense layers of 1000 ReLU units."""
    width = scaled(1000, scale)
    head: list[LayerSpec] = []
    for _ in range(13):
        head += [Dense(width), _relu()]
    head += [Dense(1), Activation("linear")]
    return ModelSpec(
        input_shape=(order, order, 1),
        branches=((Flatten(),),),
        head=tuple(head),
    )


def build_seq_cnn(scale: float = 1.0, order: int = 50) -> ModelSpec:
    """Two conv/pool stages into a 7-layer dense stack of 300 units."""
    branch: tuple[LayerSpec, ...] = (
        Conv2D(scaled(512, scale), kernel=(3, 3)),
        _leaky(),
        _pool(2),
        Conv2D(scaled(64, scale), kernel=(3, 3)),
        _leaky(),
        _pool(2),
        Flatten(),
    )
    head: list[LayerSpec] = []
    for _ in range(7):
        head += [Dense(scaled(300, scale)), _leaky()]
    head += [Dense(1), Activation("linear")]
    spec = ModelSpec(input_shape=(order, order, 1), branches=(branch,), head=tuple(head))
    spec.shape_plan()  # orders below 8 cannot survive the second pool
    return spec


def build_wide_cnn(scale: float = 1.0, order: int = 50) -> ModelSpec:
    """Five parallel convolution pipelines, concatenated into a dense head.

    Kernel geometry is fixed for order-50 inputs: the large-kernel branches
    tile the 50x50 matrix exactly (5x5 stride 5, 10x10 stride 10, 25x25
    stride 25, 50x50). Other orders are rejected by the shape check.
    """
    first = scaled(512, scale)
    second = scaled(64, scale)
    branches: tuple[tuple[LayerSpec, ...], ...] = (
        (
            Conv2D(first, kernel=(3, 3)),
            _leaky(),
            _pool(2),
            Conv2D(second, kernel=(3, 3)),
            _leaky(),
            _pool(2),
            Flatten(),
        ),
        (
            Conv2D(first, kernel=(5, 5), strides=(5, 5)),
            _leaky(),
            _pool(2),
            Conv2D(second, kernel=(5, 5)),
            _leaky(),
            Flatten(),
        ),
        (
            Conv2D(first, kernel=(10, 10), strides=(10, 10)),
            _leaky(),
            _pool(2),
            Conv2D(second, kernel=(2, 2)),
            _leaky(),
            Flatten(),
        ),
        (
            Conv2D(first, kernel=(25, 25), strides=(25, 25)),
            _leaky(),
            Flatten(),
        ),
        (
            Conv2D(first, kernel=(50, 50)),
            _leaky(),
            Flatten(),
        ),
    )
    head: list[LayerSpec] = []
    for _ in range(7):
        head += [Dense(scaled(200, scale)), _leaky()]
    head += [Dense(1), Activation("linear")]
    spec = ModelSpec(input_shape=(order, order, 1), branches=branches, head=tuple(head))
    spec.shape_plan()
    return spec


def build_model_spec(architecture: str, scale: float = 1.0, order: int = 50) -> ModelSpec:
    """Dispatch by architecture name ('regression' has no ModelSpec)."""
    if architecture == "dense":
        return build_dense(scale, order)
    if architecture == "seq_cnn":
        return build_seq_cnn(scale, order)
    if architecture == "wide_cnn":
        return build_wide_cnn(scale, order)
    raise ValueError(f"no neural architecture named {architecture!r}")
