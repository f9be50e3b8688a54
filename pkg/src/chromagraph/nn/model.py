"""A ModelSpec instantiated with weights: forward, backward, prediction.

Weights are initialized Glorot-uniform (biases zero) from a Philox stream,
drawn in declaration order: branch by branch, then the head. That order is
also the checkpoint layout.
"""

from __future__ import annotations

import numpy as np

from ..graphs import Graph
from .layers import build_layer
from .spec import ModelSpec


class Model:
    def __init__(self, spec: ModelSpec, seed: int = 0, dtype=np.float32):
        spec.shape_plan()  # reject bad geometry before allocating anything
        self.spec = spec
        self.dtype = np.dtype(dtype)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(0x11AB,))))
        self.branch_layers = []
        for branch in spec.branches:
            layers = []
            shape = spec.input_shape
            for layer_spec in branch:
                layers.append(build_layer(layer_spec, shape, rng, self.dtype))
                shape = layer_spec.out_shape(shape)
            self.branch_layers.append(layers)
        self._branch_widths = [
            _final_width(spec.input_shape, branch) for branch in spec.branches
        ]
        self.head_layers = []
        shape = (sum(self._branch_widths),)
        for layer_spec in spec.head:
            self.head_layers.append(build_layer(layer_spec, shape, rng, self.dtype))
            shape = layer_spec.out_shape(shape)

    @property
    def params(self) -> list[np.ndarray]:
        """All weight arrays in declaration order (shared references)."""
        out = []
        for layers in self.branch_layers:
            for layer in layers:
                out.extend(layer.params)
        for layer in self.head_layers:
            out.extend(layer.params)
        return out

    def set_params(self, values: list[np.ndarray]) -> None:
        params = self.params
        if len(values) != len(params):
            raise ValueError(f"expected {len(params)} parameter arrays, got {len(values)}")
        for p, v in zip(params, values):
            if p.shape != v.shape:
                raise ValueError(f"parameter shape mismatch: {p.shape} vs {v.shape}")
            p[...] = v

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=self.dtype)
        if x.ndim == 3:
            x = x[None]
        if x.shape[1:] != self.spec.input_shape:
            raise ValueError(f"input shape {x.shape[1:]} != model input {self.spec.input_shape}")
        return x

    def forward_batch(self, x: np.ndarray) -> np.ndarray:
        """Predictions for a (batch, *input_shape) array; caches for backward."""
        x = self._check_input(x)
        outs = []
        for layers in self.branch_layers:
            h = x
            for layer in layers:
                h = layer.forward(h)
            outs.append(h)
        h = outs[0] if len(outs) == 1 else np.concatenate(outs, axis=1)
        for layer in self.head_layers:
            h = layer.forward(h)
        return h[:, 0]

    def backward_batch(self, dpred: np.ndarray) -> list[np.ndarray]:
        """Gradients for every param, aligned with self.params.

        ``dpred`` is dLoss/dprediction for the batch passed to the most
        recent forward_batch call.
        """
        d = np.asarray(dpred, dtype=self.dtype)[:, None]
        head_grads = []
        for layer in reversed(self.head_layers):
            d, grads = layer.backward(d)
            head_grads = grads + head_grads
        all_grads = []
        offset = 0
        for layers, width in zip(self.branch_layers, self._branch_widths):
            db = d[:, offset : offset + width]
            offset += width
            branch_grads = []
            for layer in reversed(layers):
                db, grads = layer.backward(db)
                branch_grads = grads + branch_grads
            all_grads.extend(branch_grads)
        all_grads.extend(head_grads)
        return all_grads

    def forward(self, x_single: np.ndarray) -> float:
        """Scalar prediction for one (height, width, channels) input."""
        x = np.asarray(x_single)
        if x.ndim != 3:
            raise ValueError(f"forward takes one sample of shape {self.spec.input_shape}, got {x.shape}")
        return float(self.forward_batch(x)[0])


def _final_width(input_shape, branch) -> int:
    shape = input_shape
    for layer in branch:
        shape = layer.out_shape(shape)
    return shape[0]


def graph_to_input(g: Graph, dtype=np.float32) -> np.ndarray:
    """Adjacency matrix as a (order, order, 1) channels-last tensor."""
    return g.adj.astype(dtype)[:, :, None]


def predict_batch(model: Model, graphs) -> np.ndarray:
    """Per-graph predictions, one forward pass at a time (order preserved).

    Evaluating singly keeps the result bit-identical to ``model.forward`` on
    each graph, independent of how callers batch their data.
    """
    out = np.empty(len(graphs), dtype=np.float64)
    for i, g in enumerate(graphs):
        out[i] = model.forward_batch(graph_to_input(g, dtype=model.dtype)[None])[0]
    return out
