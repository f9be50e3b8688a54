"""Runtime layers: forward passes that cache what backward needs.

Activations are channels-last, (batch, height, width, channels) for the
convolutional stack and (batch, features) once flat. Convolution is im2col
plus one matmul; the column buffer is kept for the weight gradient. Each
layer instance belongs to exactly one model and is not reentrant.
"""

from __future__ import annotations

import numpy as np

from .spec import Activation, Conv2D, Dense, Flatten, MaxPool2D


class DenseLayer:
    def __init__(self, spec: Dense, in_features: int, rng: np.random.Generator, dtype):
        limit = np.sqrt(6.0 / (in_features + spec.units))
        self.weight = rng.uniform(-limit, limit, size=(in_features, spec.units)).astype(dtype)
        self.bias = np.zeros(spec.units, dtype=dtype)
        self._x = None

    @property
    def params(self):
        return [self.weight, self.bias]

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        return x @ self.weight + self.bias

    def backward(self, dout: np.ndarray):
        dw = self._x.T @ dout
        db = dout.sum(axis=0)
        dx = dout @ self.weight.T
        return dx, [dw, db]


class Conv2DLayer:
    def __init__(self, spec: Conv2D, in_channels: int, rng: np.random.Generator, dtype):
        kh, kw = spec.kernel
        fan_in = kh * kw * in_channels
        fan_out = kh * kw * spec.filters
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        self.weight = rng.uniform(-limit, limit, size=(kh, kw, in_channels, spec.filters)).astype(dtype)
        self.bias = np.zeros(spec.filters, dtype=dtype)
        self.strides = spec.strides
        self._col = None
        self._x_shape = None
        self._out_hw = None

    @property
    def params(self):
        return [self.weight, self.bias]

    def _tiles_exactly(self, h, w):
        kh, kw, _, _ = self.weight.shape
        sh, sw = self.strides
        return kh == sh and kw == sw and h % kh == 0 and w % kw == 0

    def forward(self, x: np.ndarray) -> np.ndarray:
        bs, h, w, c = x.shape
        kh, kw, _, f = self.weight.shape
        sh, sw = self.strides
        oh = (h - kh) // sh + 1
        ow = (w - kw) // sw + 1
        if self._tiles_exactly(h, w):
            # non-overlapping tiling: the column matrix is a pure reshuffle
            col = np.ascontiguousarray(
                x.reshape(bs, oh, kh, ow, kw, c).transpose(0, 1, 3, 2, 4, 5)
            )
        else:
            col = np.empty((bs, oh, ow, kh, kw, c), dtype=x.dtype)
            for u in range(kh):
                for v in range(kw):
                    col[:, :, :, u, v, :] = x[:, u : u + oh * sh : sh, v : v + ow * sw : sw, :]
        self._col = col
        self._x_shape = x.shape
        self._out_hw = (oh, ow)
        out = col.reshape(bs * oh * ow, kh * kw * c) @ self.weight.reshape(kh * kw * c, f)
        return out.reshape(bs, oh, ow, f) + self.bias

    def backward(self, dout: np.ndarray):
        bs, h, w, c = self._x_shape
        kh, kw, _, f = self.weight.shape
        sh, sw = self.strides
        oh, ow = self._out_hw
        dmat = dout.reshape(bs * oh * ow, f)
        dw = (self._col.reshape(bs * oh * ow, kh * kw * c).T @ dmat).reshape(self.weight.shape)
        db = dmat.sum(axis=0)
        if self._tiles_exactly(h, w):
            dcol = (dmat @ self.weight.reshape(kh * kw * c, f).T).reshape(bs, oh, ow, kh, kw, c)
            dx = np.ascontiguousarray(dcol.transpose(0, 1, 3, 2, 4, 5)).reshape(bs, h, w, c)
        elif oh == 1 and ow == 1:
            dx = np.zeros(self._x_shape, dtype=dout.dtype)
            dx[:, :kh, :kw, :] = np.tensordot(dout[:, 0, 0, :], self.weight, axes=([1], [3]))
        else:
            dx = np.zeros(self._x_shape, dtype=dout.dtype)
            for u in range(kh):
                for v in range(kw):
                    dx[:, u : u + oh * sh : sh, v : v + ow * sw : sw, :] += dout @ self.weight[u, v].T
        return dx, [dw, db]


class MaxPool2DLayer:
    def __init__(self, spec: MaxPool2D):
        self.pool = spec.pool
        self._idx = None
        self._x_shape = None

    @property
    def params(self):
        return []

    def forward(self, x: np.ndarray) -> np.ndarray:
        p = self.pool
        bs, h, w, c = x.shape
        oh, ow = h // p, w // p
        win = (
            x[:, : oh * p, : ow * p, :]
            .reshape(bs, oh, p, ow, p, c)
            .transpose(0, 1, 3, 2, 4, 5)
            .reshape(bs, oh, ow, p * p, c)
        )
        self._idx = win.argmax(axis=3)
        self._x_shape = x.shape
        return np.take_along_axis(win, self._idx[:, :, :, None, :], axis=3)[:, :, :, 0, :]

    def backward(self, dout: np.ndarray):
        p = self.pool
        bs, h, w, c = self._x_shape
        oh, ow = h // p, w // p
        dwin = np.zeros((bs, oh, ow, p * p, c), dtype=dout.dtype)
        np.put_along_axis(dwin, self._idx[:, :, :, None, :], dout[:, :, :, None, :], axis=3)
        dx = np.zeros(self._x_shape, dtype=dout.dtype)
        dx[:, : oh * p, : ow * p, :] = (
            dwin.reshape(bs, oh, ow, p, p, c).transpose(0, 1, 3, 2, 4, 5).reshape(bs, oh * p, ow * p, c)
        )
        return dx, []


class FlattenLayer:
    def __init__(self, spec: Flatten):
        self._x_shape = None

    @property
    def params(self):
        return []

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout: np.ndarray):
        return dout.reshape(self._x_shape), []


class ActivationLayer:
    def __init__(self, spec: Activation):
        self.kind = spec.kind
        self.alpha = spec.alpha
        self._x = None

    @property
    def params(self):
        return []

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        if self.kind == "relu":
            return np.maximum(x, 0)
        if self.kind == "leaky_relu":
            return np.where(x > 0, x, x * np.asarray(self.alpha, dtype=x.dtype))
        return x

    def backward(self, dout: np.ndarray):
        if self.kind == "relu":
            return np.where(self._x > 0, dout, 0), []
        if self.kind == "leaky_relu":
            return np.where(self._x > 0, dout, dout * np.asarray(self.alpha, dtype=dout.dtype)), []
        return dout, []


def build_layer(spec, in_shape, rng, dtype):
    if isinstance(spec, Dense):
        return DenseLayer(spec, in_shape[0], rng, dtype)
    if isinstance(spec, Conv2D):
        return Conv2DLayer(spec, in_shape[2], rng, dtype)
    if isinstance(spec, MaxPool2D):
        return MaxPool2DLayer(spec)
    if isinstance(spec, Flatten):
        return FlattenLayer(spec)
    if isinstance(spec, Activation):
        return ActivationLayer(spec)
    raise TypeError(f"unknown layer spec {spec!r}")
