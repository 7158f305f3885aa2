"""Micro-benchmark of the kernel backends.

Times the hot primitives (convolution forward/backward, max pooling,
binary-pattern code maps) on training-shaped inputs for every available
backend. GEMM goes through BLAS in both cases, so the numbers isolate
the packing/pooling loops the backends actually differ on.
"""

import time

import numpy as np

from . import _kernels
from ._kernels import _core_np


def _available():
    backends = {"numpy": _core_np}
    try:
        from ._kernels import _core_cy

        backends["cython"] = _core_cy
    except ImportError:
        pass
    return backends


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _conv_case(backend, x, w, stride, pad):
    f = w.shape[0]
    kh = w.shape[2]

    def forward():
        cols = backend.im2col(x, kh, kh, stride, pad)
        out2 = cols @ w.reshape(f, -1).T
        return cols, out2

    cols, out2 = forward()

    def backward():
        dcols = out2 @ w.reshape(f, -1)
        backend.col2im(dcols, x.shape, kh, kh, stride, pad)

    return forward, backward


def run_benchmark(repeats: int = 3):
    """Yields human-readable comparison lines."""
    rng = np.random.default_rng(0)
    backends = _available()
    yield f"backends: {', '.join(backends)} (selected: {_kernels.backend_name()})"

    x_conv = rng.random((64, 8, 32, 32))
    w_conv = rng.random((16, 8, 3, 3))
    x_pool = rng.random((64, 16, 32, 32))
    img = rng.random((64, 64))
    dys, dxs = np.array([0, 1, 1, 1, 0, -1, -1, -1]), np.array([1, 1, 0, -1, -1, -1, 0, 1])

    cases = {}
    for name, backend in backends.items():
        fwd, bwd = _conv_case(backend, x_conv, w_conv, 1, 1)
        pooled = backend.maxpool_forward(x_pool, 2, 2, 0)
        cases[name] = {
            "conv fwd (64x8x32x32, 16f 3x3)": fwd,
            "conv bwd": bwd,
            "maxpool fwd (64x16x32x32, 2x2)": lambda b=backend: b.maxpool_forward(x_pool, 2, 2, 0),
            "maxpool bwd": lambda b=backend, p=pooled: b.maxpool_backward(
                p[0], p[1], x_pool.shape, 2, 2, 0
            ),
            "lbp codes (64x64, P=8)": lambda b=backend: b.lbp_code_map(img, dys, dxs, 1),
        }

    ops = list(next(iter(cases.values())))
    width = max(len(op) for op in ops)
    header = f"{'op':<{width}}" + "".join(f"  {name:>12}" for name in backends)
    yield header
    yield "-" * len(header)
    for op in ops:
        times = {name: _time(cases[name][op], repeats) for name in backends}
        row = f"{op:<{width}}"
        for name in backends:
            row += f"  {times[name] * 1e3:>10.2f}ms"
        yield row
    if len(backends) == 2:
        yield ""
        yield "ratio >1 means the cython backend is faster:"
        for op in ops:
            t_np = _time(cases["numpy"][op], repeats)
            t_cy = _time(cases["cython"][op], repeats)
            yield f"  {op:<{width}}  {t_np / t_cy:.2f}x"

        # the route that dominates training: direct loops vs im2col+GEMM
        # on a wide single-channel map (small patch width)
        from ._kernels import _core_cy

        xd = rng.random((64, 1, 112, 112))
        wd = rng.random((3, 1, 5, 5))
        bd = np.zeros(3)

        def gemm_route():
            cols = _core_np.im2col(xd, 5, 5, 1, 0)
            cols @ wd.reshape(3, -1).T

        def direct_route():
            _core_cy.conv_direct_forward(xd, wd, bd, 1)

        t_gemm = _time(gemm_route, repeats)
        t_direct = _time(direct_route, repeats)
        yield ""
        yield (
            f"direct-conv route (64x1x112x112, 3f 5x5): compiled {t_direct * 1e3:.1f}ms "
            f"vs im2col+GEMM {t_gemm * 1e3:.1f}ms ({t_gemm / t_direct:.1f}x)"
        )
