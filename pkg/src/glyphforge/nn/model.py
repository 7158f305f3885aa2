"""Architecture catalog and the layer-graph container.

Six builders at configurable width: three plain conv stacks (cnn7,
cnn9, cnn11: N counts input, output, conv, pool and dense stages), a
LeNet variant (5x5 convs, mean pooling, dropout 0.2 before the output
layer, 112x112 input), an AlexNet variant (six convs in three pooled
stages, three dense layers with dropout on the first two), and a
34-layer residual net (16 basic blocks in 3-4-6-3 stages, 1x1-conv
shortcuts on the downsampling blocks). `width_scale` multiplies every
channel/unit count, with a floor of one, so desk-scale runs stay cheap.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConfig, ShapeMismatch, StaleCache
from .layers import (
    Conv2d,
    Dense,
    Dropout,
    Flatten,
    MaxPool2d,
    MeanPool2d,
    ReLU,
    ResidualBlock,
)

ARCH_IDS = ("cnn7", "cnn9", "cnn11", "lenet", "alexnet", "resnet34")

DEFAULT_INPUT_SIZE = {
    "cnn7": 64,
    "cnn9": 64,
    "cnn11": 64,
    "lenet": 112,
    "alexnet": 64,
    "resnet34": 64,
}


@dataclass(frozen=True)
class ModelConfig:
    arch_id: str
    num_classes: int
    input_size: int | None = None
    width_scale: float = 1.0

    def __post_init__(self):
        if self.arch_id not in ARCH_IDS:
            raise InvalidConfig(f"unknown arch {self.arch_id!r}; choose from {ARCH_IDS}")
        if self.num_classes < 2:
            raise InvalidConfig("num_classes must be >= 2")
        if self.width_scale <= 0:
            raise InvalidConfig("width_scale must be positive")

    @property
    def resolved_input_size(self) -> int:
        return DEFAULT_INPUT_SIZE[self.arch_id] if self.input_size is None else self.input_size

    def as_dict(self) -> dict:
        return {
            "arch_id": self.arch_id,
            "num_classes": self.num_classes,
            "input_size": self.resolved_input_size,
            "width_scale": self.width_scale,
        }


class Model:
    """An ordered layer graph plus its parameter store."""

    def __init__(self, config: ModelConfig, layers: list):
        self.config = config
        self.layers = layers
        self.params = {}
        for layer in layers:
            self.params.update(layer.params)

    def init_params(self, seed: int) -> None:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
        self.params = {}
        for layer in self.layers:
            layer.init_params(rng)
            self.params.update(layer.params)

    def set_params(self, values: dict) -> None:
        """Copy values into the existing parameter arrays (in place, so
        layer-held references stay coherent)."""
        missing = set(self.params) ^ set(values)
        if missing:
            raise ShapeMismatch(f"parameter names do not match: {sorted(missing)}")
        for name, arr in values.items():
            if self.params[name].shape != arr.shape:
                raise ShapeMismatch(f"{name}: {self.params[name].shape} vs {arr.shape}")
            self.params[name][...] = arr

    def forward(self, batch: np.ndarray, training: bool = False, rng=None):
        """Run the stack; returns (logits, cache for backward)."""
        size = self.config.resolved_input_size
        if batch.ndim != 4 or batch.shape[1] != 1 or batch.shape[2:] != (size, size):
            raise ShapeMismatch(f"expected (N, 1, {size}, {size}), got {batch.shape}")
        if rng is None:
            rng = np.random.default_rng(0)
        x = batch
        caches = []
        for layer in self.layers:
            x, cache = layer.forward(x, training, rng)
            caches.append(cache)
        return x, (id(self), batch.shape, caches) if training else None

    def backward(self, cache, dlogits: np.ndarray) -> dict:
        """Gradients for every trainable parameter, keyed like params."""
        if cache is None:
            raise StaleCache("backward needs a cache from a training-mode forward")
        owner, batch_shape, caches = cache
        if owner != id(self) or len(caches) != len(self.layers):
            raise StaleCache("cache does not belong to this model")
        grads = {}
        dy = dlogits
        for layer, layer_cache in zip(reversed(self.layers), reversed(caches)):
            dy, layer_grads = layer.backward(layer_cache, dy)
            grads.update(layer_grads)
        return grads

    def layer_census(self) -> dict:
        counts = {}
        for layer in self.layers:
            counts[layer.kind] = counts.get(layer.kind, 0) + 1
        return counts


def _scaled(base: int, width_scale: float) -> int:
    return max(1, int(math.floor(base * width_scale + 0.5)))


def build_model(cfg: ModelConfig, seed: int = 0) -> Model:
    """Instantiate an architecture from the catalog with fresh parameters."""
    size = cfg.resolved_input_size
    ws = cfg.width_scale
    c = lambda base: _scaled(base, ws)
    layers = []

    if cfg.arch_id in ("cnn7", "cnn9", "cnn11"):
        stages = {"cnn7": 2, "cnn9": 3, "cnn11": 4}[cfg.arch_id]
        channels = [16, 32, 64, 128][:stages]
        in_ch = 1
        for i, base in enumerate(channels):
            out_ch = c(base)
            layers += [
                Conv2d(f"conv{i + 1}", in_ch, out_ch, 3, stride=1, pad=1),
                ReLU(f"relu{i + 1}"),
                MaxPool2d(f"pool{i + 1}", 2),
            ]
            in_ch = out_ch
        layers += [Flatten("flatten")]

    elif cfg.arch_id == "lenet":
        ch1, ch2, ch3, units = c(12), c(24), c(48), c(96)
        layers = [
            Conv2d("conv1", 1, ch1, 5),
            ReLU("relu1"),
            MeanPool2d("pool1", 2),
            Conv2d("conv2", ch1, ch2, 5),
            ReLU("relu2"),
            MeanPool2d("pool2", 2),
            Conv2d("conv3", ch2, ch3, 5),
            ReLU("relu3"),
            Flatten("flatten"),
        ]
        dense_in = _flat_dim(layers, size)
        layers += [
            Dense("fc1", dense_in, units),
            ReLU("relu4"),
            Dropout("drop1", 0.2),
        ]
        layers += [Dense("fc2", units, cfg.num_classes)]
        return _finish(cfg, layers, size, seed)

    elif cfg.arch_id == "alexnet":
        in_ch = 1
        for i, base in enumerate([64, 128, 256]):
            out_ch = c(base)
            layers += [
                Conv2d(f"conv{2 * i + 1}", in_ch, out_ch, 3, stride=1, pad=1),
                ReLU(f"relu{2 * i + 1}"),
                Conv2d(f"conv{2 * i + 2}", out_ch, out_ch, 3, stride=1, pad=1),
                ReLU(f"relu{2 * i + 2}"),
                MaxPool2d(f"pool{i + 1}", 2),
            ]
            in_ch = out_ch
        layers += [Flatten("flatten")]
        flat = _flat_dim(layers, size)
        h1, h2 = c(512), c(256)
        layers += [
            Dense("fc1", flat, h1),
            ReLU("relu_fc1"),
            Dropout("drop1", 0.2),
            Dense("fc2", h1, h2),
            ReLU("relu_fc2"),
            Dropout("drop2", 0.2),
            Dense("fc3", h2, cfg.num_classes),
        ]
        return _finish(cfg, layers, size, seed)

    elif cfg.arch_id == "resnet34":
        stem = c(64)
        layers = [
            Conv2d("stem", 1, stem, 7, stride=2, pad=3),
            ReLU("stem_relu"),
            MaxPool2d("stem_pool", 3, stride=2, pad=1),
        ]
        in_ch = stem
        plan = [(64, 3, 1), (128, 4, 2), (256, 6, 2), (512, 3, 2)]
        for stage, (base, blocks, first_stride) in enumerate(plan, start=1):
            out_ch = c(base)
            for block in range(blocks):
                stride = first_stride if block == 0 else 1
                layers.append(ResidualBlock(f"s{stage}b{block + 1}", in_ch, out_ch, stride))
                in_ch = out_ch
        spatial = _spatial_dims(layers, size)
        layers += [
            MeanPool2d("global_pool", spatial[1]),
            Flatten("flatten"),
            Dense("fc", in_ch, cfg.num_classes),
        ]
        return _finish(cfg, layers, size, seed)

    # plain conv stacks fall through here to attach the classifier head
    flat = _flat_dim(layers, size)
    layers += [Dense("fc", flat, cfg.num_classes)]
    return _finish(cfg, layers, size, seed)


def _spatial_dims(layers, size: int) -> tuple:
    shape = (1, size, size)
    for layer in layers:
        shape = layer.out_shape(shape)
        if len(shape) == 3 and (shape[1] < 1 or shape[2] < 1):
            raise InvalidConfig(
                f"input {size}x{size} too small: {layer.name} would emit {shape}"
            )
    return shape


def _flat_dim(layers, size: int) -> int:
    shape = _spatial_dims(layers, size)
    if len(shape) != 1:
        raise InvalidConfig("expected a flattened shape")
    return shape[0]


def _finish(cfg: ModelConfig, layers, size: int, seed: int) -> Model:
    shape = (1, size, size)
    for layer in layers:
        shape = layer.out_shape(shape)
        if any(dim < 1 for dim in shape):
            raise InvalidConfig(f"{layer.name} emits empty shape {shape} at input {size}")
    if shape != (cfg.num_classes,):
        raise InvalidConfig(f"head emits {shape}, expected ({cfg.num_classes},)")
    model = Model(cfg, layers)
    model.init_params(seed)
    return model
