"""Central finite-difference checks for every layer kind.

Each scalar loss is a fixed random projection of the layer output;
analytic gradients from backward() must match the numeric ones to a
relative error below 1e-4 at eps=1e-3 (double precision). Inputs for
kinked or tie-breaking layers are arranged so no perturbation crosses
a non-smooth point.
"""

import numpy as np
import pytest

from glyphforge.nn import cross_entropy
from glyphforge.nn.layers import (
    Conv2d,
    Dense,
    Dropout,
    Flatten,
    MaxPool2d,
    MeanPool2d,
    ReLU,
    ResidualBlock,
)

EPS = 1e-3
TOL = 1e-4


def rel_err(a, n):
    denom = np.maximum(np.abs(a) + np.abs(n), 1e-6)
    return float((np.abs(a - n) / denom).max())


def numeric_grad(f, x, eps=EPS):
    g = np.zeros_like(x)
    flat = x.reshape(-1)
    gflat = g.reshape(-1)
    for i in range(flat.size):
        old = flat[i]
        flat[i] = old + eps
        fp = f()
        flat[i] = old - eps
        fm = f()
        flat[i] = old
        gflat[i] = (fp - fm) / (2.0 * eps)
    return g


def check_layer(layer, x, rng, forward_rng_factory=None):
    """FD-check input grads and every parameter grad of one layer."""

    def run():
        frng = forward_rng_factory() if forward_rng_factory else np.random.default_rng(0)
        y, cache = layer.forward(x, True, frng)
        return y, cache

    y0, _ = run()
    proj = rng.standard_normal(y0.shape)

    def loss():
        y, _ = run()
        return float((y * proj).sum())

    y, cache = run()
    dx, grads = layer.backward(cache, proj.copy())

    num_dx = numeric_grad(loss, x)
    assert rel_err(dx, num_dx) < TOL, f"{layer.kind}: input grad mismatch {rel_err(dx, num_dx)}"

    for name, param in layer.params.items():
        num_dp = numeric_grad(loss, param)
        assert rel_err(grads[name], num_dp) < TOL, f"{name}: param grad {rel_err(grads[name], num_dp)}"


def distinct_values(rng, shape, gap=0.05):
    n = int(np.prod(shape))
    vals = (np.arange(n) - n / 2.0) * gap
    return rng.permutation(vals).reshape(shape)


@pytest.mark.parametrize("trial", range(10))
def test_conv2d(trial):
    rng = np.random.default_rng(100 + trial)
    n, c, f = rng.integers(1, 3), rng.integers(1, 4), rng.integers(1, 4)
    k = int(rng.choice([1, 2, 3]))
    stride = int(rng.choice([1, 2]))
    pad = int(rng.integers(0, 2))
    size = int(rng.integers(k + stride, 8))
    layer = Conv2d("c", int(c), int(f), k, stride=stride, pad=pad)
    layer.init_params(rng)
    x = rng.standard_normal((int(n), int(c), size, size))
    check_layer(layer, x, rng)


@pytest.mark.parametrize("trial", range(10))
def test_maxpool(trial):
    rng = np.random.default_rng(200 + trial)
    k = int(rng.choice([2, 3]))
    stride = int(rng.choice([1, 2]))
    pad = int(rng.integers(0, min(2, k)))
    size = int(rng.integers(k + 1, 8))
    layer = MaxPool2d("p", k, stride=stride, pad=pad)
    # distinct entries with gaps far above 2*eps: no argmax flips under FD
    x = distinct_values(rng, (2, 2, size, size))
    check_layer(layer, x, rng)


@pytest.mark.parametrize("trial", range(10))
def test_meanpool(trial):
    rng = np.random.default_rng(300 + trial)
    k = int(rng.choice([2, 3]))
    stride = int(rng.choice([1, 2]))
    size = int(rng.integers(k + 1, 9))
    layer = MeanPool2d("p", k, stride=stride)
    x = rng.standard_normal((2, 3, size, size))
    check_layer(layer, x, rng)


@pytest.mark.parametrize("trial", range(10))
def test_relu_off_kink(trial):
    rng = np.random.default_rng(400 + trial)
    shape = (2, int(rng.integers(2, 6)), int(rng.integers(2, 6)))
    signs = rng.choice([-1.0, 1.0], size=shape)
    x = signs * rng.uniform(0.2, 1.5, size=shape)  # nudged off zero
    check_layer(ReLU("r"), x, rng)


@pytest.mark.parametrize("trial", range(10))
def test_dropout_fixed_mask(trial):
    rng = np.random.default_rng(500 + trial)
    layer = Dropout("d", rate=float(rng.uniform(0.1, 0.6)))
    x = rng.standard_normal((3, int(rng.integers(2, 8))))
    # freeze the mask by replaying the same generator on every evaluation
    check_layer(layer, x, rng, forward_rng_factory=lambda: np.random.default_rng(9000 + trial))


@pytest.mark.parametrize("trial", range(10))
def test_dense(trial):
    rng = np.random.default_rng(600 + trial)
    din, dout = int(rng.integers(1, 10)), int(rng.integers(1, 8))
    layer = Dense("fc", din, dout)
    layer.init_params(rng)
    x = rng.standard_normal((3, din))
    check_layer(layer, x, rng)


def _residual_preacts(block, x):
    h1, _ = block.conv1.forward(x, False, None)
    a1, _ = block.relu1.forward(h1, False, None)
    h2, _ = block.conv2.forward(a1, False, None)
    s = x if block.shortcut is None else block.shortcut.forward(x, False, None)[0]
    return np.concatenate([h1.ravel(), (h2 + s).ravel()])


@pytest.mark.parametrize("trial", range(10))
def test_residual_block(trial):
    rng = np.random.default_rng(700 + trial)
    in_ch = int(rng.integers(1, 4))
    out_ch = int(rng.integers(1, 4))
    stride = int(rng.choice([1, 2])) if trial % 2 else 1
    size = int(rng.integers(4, 7))
    block = ResidualBlock("rb", in_ch, out_ch, stride=stride)
    # resample until every internal relu input clears the kink by > 2*eps
    for attempt in range(500):
        block.init_params(rng)
        x = rng.standard_normal((2, in_ch, size, size))
        if np.abs(_residual_preacts(block, x)).min() > 2.5e-3:
            break
    else:
        pytest.fail("could not find a kink-free configuration")
    check_layer(block, x, rng)


@pytest.mark.parametrize("trial", range(10))
def test_softmax_cross_entropy(trial):
    rng = np.random.default_rng(800 + trial)
    n, c = int(rng.integers(2, 5)), int(rng.integers(2, 6))
    logits = rng.standard_normal((n, c)) * 2.0
    labels = rng.integers(0, c, size=n)

    _, dlogits, _ = cross_entropy(logits, labels)

    def loss():
        value, _, _ = cross_entropy(logits, labels)
        return value

    num = numeric_grad(loss, logits)
    assert rel_err(dlogits, num) < TOL


def test_zero_upstream_gives_zero_param_grads():
    rng = np.random.default_rng(1)
    layer = Conv2d("c", 2, 3, 3, stride=1, pad=1)
    layer.init_params(rng)
    x = rng.standard_normal((2, 2, 5, 5))
    y, cache = layer.forward(x, True, rng)
    dx, grads = layer.backward(cache, np.zeros_like(y))
    assert not dx.any()
    assert all(not g.any() for g in grads.values())


def test_dense_bias_grad_is_upstream_sum():
    rng = np.random.default_rng(2)
    layer = Dense("fc", 4, 3)
    layer.init_params(rng)
    x = rng.standard_normal((5, 4))
    y, cache = layer.forward(x, True, rng)
    dy = rng.standard_normal(y.shape)
    _, grads = layer.backward(cache, dy)
    assert np.allclose(grads["fc.b"], dy.sum(axis=0))
