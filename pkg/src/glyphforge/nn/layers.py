"""Layer zoo with exact reverse-mode gradients.

Tensors are plain numpy float64 arrays, activations in NCHW layout.
Each layer owns its parameters in a name-prefixed dict; forward returns
(output, cache) and backward consumes that cache plus the upstream
gradient, returning (input gradient, parameter gradients). Caches are
only materialized when forward runs in training mode.
"""

import numpy as np

from .. import _kernels
from ..errors import ShapeMismatch


def kaiming_uniform(shape, fan_in: int, rng: np.random.Generator) -> np.ndarray:
    bound = np.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Layer:
    kind = "layer"

    def __init__(self, name: str):
        self.name = name
        self.params = {}

    def init_params(self, rng: np.random.Generator) -> None:
        pass

    def out_shape(self, in_shape: tuple) -> tuple:
        return in_shape

    def forward(self, x, training: bool, rng: np.random.Generator):
        raise NotImplementedError

    def backward(self, cache, dy):
        raise NotImplementedError


class Conv2d(Layer):
    kind = "conv2d"

    def __init__(self, name, in_ch, out_ch, kernel, stride=1, pad=0):
        super().__init__(name)
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.in_ch, self.out_ch, self.kernel, self.stride, self.pad = in_ch, out_ch, kernel, stride, pad

    def init_params(self, rng):
        fan_in = self.in_ch * self.kernel * self.kernel
        self.params = {
            f"{self.name}.w": kaiming_uniform(
                (self.out_ch, self.in_ch, self.kernel, self.kernel), fan_in, rng
            ),
            f"{self.name}.b": np.zeros(self.out_ch),
        }

    def out_shape(self, in_shape):
        c, h, w = in_shape
        if c != self.in_ch:
            raise ShapeMismatch(f"{self.name}: expected {self.in_ch} channels, got {c}")
        oh = (h + 2 * self.pad - self.kernel) // self.stride + 1
        ow = (w + 2 * self.pad - self.kernel) // self.stride + 1
        return (self.out_ch, oh, ow)

    def forward(self, x, training, rng):
        w = self.params[f"{self.name}.w"]
        b = self.params[f"{self.name}.b"]
        out, cols = _kernels.conv2d_forward(x, w, b, self.stride, self.pad)
        return out, ((x.shape, cols) if training else None)

    def backward(self, cache, dy):
        x_shape, cols = cache
        w = self.params[f"{self.name}.w"]
        dx, dw, db = _kernels.conv2d_backward(dy, x_shape, w, cols, self.stride, self.pad)
        return dx, {f"{self.name}.w": dw, f"{self.name}.b": db}


class MaxPool2d(Layer):
    kind = "maxpool2d"

    def __init__(self, name, size, stride=None, pad=0):
        super().__init__(name)
        self.size = size
        self.stride = size if stride is None else stride
        self.pad = pad

    def out_shape(self, in_shape):
        c, h, w = in_shape
        oh = (h + 2 * self.pad - self.size) // self.stride + 1
        ow = (w + 2 * self.pad - self.size) // self.stride + 1
        return (c, oh, ow)

    def forward(self, x, training, rng):
        out, arg = _kernels.maxpool_forward(x, self.size, self.stride, self.pad)
        return out, ((x.shape, arg) if training else None)

    def backward(self, cache, dy):
        x_shape, arg = cache
        dx = _kernels.maxpool_backward(dy, arg, x_shape, self.size, self.stride, self.pad)
        return dx, {}


class MeanPool2d(Layer):
    kind = "meanpool2d"

    def __init__(self, name, size, stride=None):
        super().__init__(name)
        self.size = size
        self.stride = size if stride is None else stride

    def out_shape(self, in_shape):
        c, h, w = in_shape
        oh = (h - self.size) // self.stride + 1
        ow = (w - self.size) // self.stride + 1
        return (c, oh, ow)

    def forward(self, x, training, rng):
        out = _kernels.meanpool_forward(x, self.size, self.stride)
        return out, x.shape if training else None

    def backward(self, cache, dy):
        return _kernels.meanpool_backward(dy, cache, self.size, self.stride), {}


class ReLU(Layer):
    kind = "relu"

    def forward(self, x, training, rng):
        out = np.maximum(x, 0.0)
        return out, (x > 0.0) if training else None

    def backward(self, cache, dy):
        return dy * cache, {}


class Dropout(Layer):
    kind = "dropout"

    def __init__(self, name, rate):
        super().__init__(name)
        if not 0.0 <= rate < 1.0:
            raise ValueError("drop rate must be in [0, 1)")
        self.rate = rate

    def forward(self, x, training, rng):
        if not training or self.rate == 0.0:
            # inverted dropout: inference is the identity
            return x, None
        mask = rng.random(x.shape) >= self.rate
        scale = 1.0 / (1.0 - self.rate)
        return x * mask * scale, mask

    def backward(self, cache, dy):
        if cache is None:
            return dy, {}
        return dy * cache * (1.0 / (1.0 - self.rate)), {}


class Flatten(Layer):
    kind = "flatten"

    def out_shape(self, in_shape):
        return (int(np.prod(in_shape)),)

    def forward(self, x, training, rng):
        return x.reshape(x.shape[0], -1), x.shape if training else None

    def backward(self, cache, dy):
        return dy.reshape(cache), {}


class Dense(Layer):
    kind = "dense"

    def __init__(self, name, in_dim, out_dim):
        super().__init__(name)
        self.in_dim, self.out_dim = in_dim, out_dim

    def init_params(self, rng):
        self.params = {
            f"{self.name}.w": kaiming_uniform((self.in_dim, self.out_dim), self.in_dim, rng),
            f"{self.name}.b": np.zeros(self.out_dim),
        }

    def out_shape(self, in_shape):
        if in_shape != (self.in_dim,):
            raise ShapeMismatch(f"{self.name}: expected ({self.in_dim},), got {in_shape}")
        return (self.out_dim,)

    def forward(self, x, training, rng):
        w = self.params[f"{self.name}.w"]
        b = self.params[f"{self.name}.b"]
        return x @ w + b, x if training else None

    def backward(self, cache, dy):
        w = self.params[f"{self.name}.w"]
        dw = cache.T @ dy
        db = dy.sum(axis=0)
        dx = dy @ w.T
        return dx, {f"{self.name}.w": dw, f"{self.name}.b": db}


class ResidualBlock(Layer):
    """Basic two-conv residual unit; a strided or channel-changing block
    carries a 1x1 convolution on the shortcut."""

    kind = "residual_block"

    def __init__(self, name, in_ch, out_ch, stride=1):
        super().__init__(name)
        self.in_ch, self.out_ch, self.stride = in_ch, out_ch, stride
        self.conv1 = Conv2d(f"{name}.conv1", in_ch, out_ch, 3, stride=stride, pad=1)
        self.relu1 = ReLU(f"{name}.relu1")
        self.conv2 = Conv2d(f"{name}.conv2", out_ch, out_ch, 3, stride=1, pad=1)
        self.downsample = stride != 1 or in_ch != out_ch
        self.shortcut = (
            Conv2d(f"{name}.shortcut", in_ch, out_ch, 1, stride=stride, pad=0)
            if self.downsample
            else None
        )
        self.relu_out = ReLU(f"{name}.relu_out")

    def _children(self):
        kids = [self.conv1, self.conv2]
        if self.shortcut is not None:
            kids.append(self.shortcut)
        return kids

    def init_params(self, rng):
        self.params = {}
        for child in self._children():
            child.init_params(rng)
            self.params.update(child.params)

    def out_shape(self, in_shape):
        return self.conv1.out_shape(in_shape)

    def forward(self, x, training, rng):
        h1, c1 = self.conv1.forward(x, training, rng)
        a1, cr1 = self.relu1.forward(h1, training, rng)
        h2, c2 = self.conv2.forward(a1, training, rng)
        if self.shortcut is not None:
            s, cs = self.shortcut.forward(x, training, rng)
        else:
            s, cs = x, None
        y, cro = self.relu_out.forward(h2 + s, training, rng)
        cache = (c1, cr1, c2, cs, cro) if training else None
        return y, cache

    def backward(self, cache, dy):
        c1, cr1, c2, cs, cro = cache
        dsum, _ = self.relu_out.backward(cro, dy)
        da1, g2 = self.conv2.backward(c2, dsum)
        dh1, _ = self.relu1.backward(cr1, da1)
        dx, g1 = self.conv1.backward(c1, dh1)
        grads = {**g1, **g2}
        if self.shortcut is not None:
            ds, gs = self.shortcut.backward(cs, dsum)
            grads.update(gs)
            dx = dx + ds
        else:
            dx = dx + dsum
        return dx, grads
