"""Hot-loop kernel core with backend selection.

The packing, pooling and binary-pattern inner loops live either in the
compiled Cython extension (`_core_cy`) or in the numpy fallback
(`_core_np`). The compiled backend is preferred when importable; set
GLYPHFORGE_KERNELS=np or =cy to force one. Matrix products always go
through numpy's BLAS.

The shared primitives (im2col, col2im, pooling, code maps) are
bit-identical across backends. The compiled backend additionally offers
direct-convolution loops for small patch widths, where the numpy route
keeps using im2col+GEMM; those paths agree to float rounding
(~1e-13 relative), not bit for bit.
"""

import os

import numpy as np

from . import _core_np

_requested = os.environ.get("GLYPHFORGE_KERNELS", "auto").lower()

backend = None
if _requested in ("auto", "cy", "cython"):
    try:
        from . import _core_cy as backend
    except ImportError:
        if _requested != "auto":
            raise
if backend is None:
    backend = _core_np


def backend_name() -> str:
    return backend.NAME


def available_backends() -> list:
    names = [_core_np]
    try:
        from . import _core_cy

        names.append(_core_cy)
    except ImportError:
        pass
    return names


im2col = backend.im2col
col2im = backend.col2im
maxpool_forward = backend.maxpool_forward
maxpool_backward = backend.maxpool_backward
meanpool_forward = backend.meanpool_forward
meanpool_backward = backend.meanpool_backward
lbp_code_map = backend.lbp_code_map


# patch width (C*KH*KW) at or below which the compiled direct-conv loops
# beat im2col+GEMM: the cols matrix would cost far more traffic than math
DIRECT_CONV_MAX_WIDTH = 160


def _use_direct(c: int, kh: int, kw: int) -> bool:
    return hasattr(backend, "conv_direct_forward") and c * kh * kw <= DIRECT_CONV_MAX_WIDTH


def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int, pad: int):
    """Cross-correlate (N,C,H,W) with (F,C,KH,KW) filters.

    Returns (out, cache); the cache feeds conv2d_backward and holds
    either the padded input (direct route) or the unfolded patch matrix
    (GEMM route).
    """
    n, c, h, wd = x.shape
    f, _, kh, kw = w.shape
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (wd + 2 * pad - kw) // stride + 1
    bias = np.zeros(f) if b is None else b

    if _use_direct(c, kh, kw):
        xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad > 0 else x
        out = backend.conv_direct_forward(xp, w, bias, stride)
        return out, ("direct", xp)

    cols = backend.im2col(x, kh, kw, stride, pad)
    out2 = cols @ w.reshape(f, -1).T
    out2 += bias
    out = out2.reshape(n, oh, ow, f).transpose(0, 3, 1, 2)
    return np.ascontiguousarray(out), ("gemm", cols)


def conv2d_backward(
    dout: np.ndarray, x_shape: tuple, w: np.ndarray, cache, stride: int, pad: int
):
    """Gradients of conv2d_forward w.r.t. input, filters, and bias."""
    f, _, kh, kw = w.shape
    route, payload = cache

    if route == "direct":
        xp = payload
        dout = np.ascontiguousarray(dout)
        dw = backend.conv_direct_weight_grad(xp, dout, kh, kw, stride)
        db = dout.sum(axis=(0, 2, 3))
        dxp = backend.conv_direct_input_grad(dout, w, xp.shape, stride)
        dx = dxp[:, :, pad:-pad, pad:-pad].copy() if pad > 0 else dxp
        return dx, dw, db

    cols = payload
    dout2 = np.ascontiguousarray(dout.transpose(0, 2, 3, 1)).reshape(-1, f)
    dw = (dout2.T @ cols).reshape(w.shape)
    db = dout2.sum(axis=0)
    dcols = dout2 @ w.reshape(f, -1)
    dx = backend.col2im(dcols, x_shape, kh, kw, stride, pad)
    return dx, dw, db
