"""Pure-numpy kernel backend.

Mirrors the compiled backend in `_core_cy.pyx`. Accumulation order is
pinned to kernel-offset-major everywhere so these primitives produce
bit-identical results to the compiled ones; the cross-backend parity
tests rely on that. This backend deliberately has no direct-convolution
entry points: with numpy, im2col + BLAS is the fastest correct
strategy, so the dispatcher keeps using it here.
"""

import numpy as np

NAME = "numpy"


def _out_dim(size: int, k: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - k) // stride + 1


def im2col(x: np.ndarray, kh: int, kw: int, stride: int, pad: int) -> np.ndarray:
    """Unfold (N,C,H,W) into patch rows of shape (N*OH*OW, C*kh*kw)."""
    n, c, h, w = x.shape
    oh = _out_dim(h, kh, stride, pad)
    ow = _out_dim(w, kw, stride, pad)
    if pad > 0:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    cols = np.empty((n, c, kh, kw, oh, ow), dtype=x.dtype)
    for i in range(kh):
        for j in range(kw):
            cols[:, :, i, j] = x[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
    return np.ascontiguousarray(cols.transpose(0, 4, 5, 1, 2, 3)).reshape(n * oh * ow, c * kh * kw)


def col2im(
    dcols: np.ndarray, x_shape: tuple, kh: int, kw: int, stride: int, pad: int
) -> np.ndarray:
    """Fold patch-row gradients back onto the (N,C,H,W) input; adjoint of im2col."""
    n, c, h, w = x_shape
    oh = _out_dim(h, kh, stride, pad)
    ow = _out_dim(w, kw, stride, pad)
    dxp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=dcols.dtype)
    d6 = dcols.reshape(n, oh, ow, c, kh, kw).transpose(0, 3, 4, 5, 1, 2)
    for i in range(kh):
        for j in range(kw):
            dxp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride] += d6[:, :, i, j]
    if pad > 0:
        return dxp[:, :, pad:-pad, pad:-pad].copy()
    return dxp


def maxpool_forward(x: np.ndarray, k: int, stride: int, pad: int):
    """Max over k*k windows. Returns (out, argmax) where argmax holds the
    flat window offset (i*k+j) of the first maximum in row-major scan order."""
    n, c, h, w = x.shape
    oh = _out_dim(h, k, stride, pad)
    ow = _out_dim(w, k, stride, pad)
    if pad > 0:
        x = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)), constant_values=-np.inf)
    out = np.full((n, c, oh, ow), -np.inf, dtype=x.dtype)
    arg = np.zeros((n, c, oh, ow), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            window = x[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
            better = window > out
            out[better] = window[better]
            arg[better] = i * k + j
    return out, arg


def maxpool_backward(
    dout: np.ndarray, arg: np.ndarray, x_shape: tuple, k: int, stride: int, pad: int
) -> np.ndarray:
    n, c, h, w = x_shape
    oh = _out_dim(h, k, stride, pad)
    ow = _out_dim(w, k, stride, pad)
    dxp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=dout.dtype)
    for i in range(k):
        for j in range(k):
            contrib = np.where(arg == i * k + j, dout, 0.0)
            dxp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride] += contrib
    if pad > 0:
        return dxp[:, :, pad:-pad, pad:-pad].copy()
    return dxp


def meanpool_forward(x: np.ndarray, k: int, stride: int) -> np.ndarray:
    n, c, h, w = x.shape
    oh = _out_dim(h, k, stride, 0)
    ow = _out_dim(w, k, stride, 0)
    acc = np.zeros((n, c, oh, ow), dtype=x.dtype)
    for i in range(k):
        for j in range(k):
            acc += x[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
    return acc * (1.0 / (k * k))

def meanpool_backward(dout: np.ndarray, x_shape: tuple, k: int, stride: int) -> np.ndarray:
    n, c, h, w = x_shape
    oh = _out_dim(h, k, stride, 0)
    ow = _out_dim(w, k, stride, 0)
    dx = np.zeros((n, c, h, w), dtype=dout.dtype)
    scaled = dout * (1.0 / (k * k))
    for i in range(k):
        for j in range(k):
            dx[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride] += scaled
    return dx


def lbp_code_map(img: np.ndarray, dys: np.ndarray, dxs: np.ndarray, margin: int) -> np.ndarray:
    """Binary-pattern codes for every interior pixel (>= margin from each
    border); exterior entries are -1. Neighbor offsets are integer grid
    steps; bit p is set when the neighbor value >= the center value."""
    h, w = img.shape
    codes = np.full((h, w), -1, dtype=np.int64)
    if h <= 2 * margin or w <= 2 * margin:
        return codes
    center = img[margin : h - margin, margin : w - margin]
    acc = np.zeros(center.shape, dtype=np.int64)
    for p in range(len(dys)):
        dy = int(dys[p])
        dx = int(dxs[p])
        neighbor = img[margin + dy : h - margin + dy, margin + dx : w - margin + dx]
        acc |= (neighbor >= center).astype(np.int64) << p
    codes[margin : h - margin, margin : w - margin] = acc
    return codes
