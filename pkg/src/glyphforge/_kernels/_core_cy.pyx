# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Same contracts as `_core_np`; loop nests accumulate in kernel-offset-major
order so results are bit-identical to the numpy backend.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()

NAME = "cython"


cdef inline Py_ssize_t _out_dim(Py_ssize_t size, Py_ssize_t k, Py_ssize_t stride, Py_ssize_t pad):
    return (size + 2 * pad - k) // stride + 1


def im2col(cnp.ndarray x, int kh, int kw, int stride, int pad):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef Py_ssize_t oh = _out_dim(h, kh, stride, pad)
    cdef Py_ssize_t ow = _out_dim(w, kw, stride, pad)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] xv = np.ascontiguousarray(x, dtype=np.float64)
    out = np.zeros((n * oh * ow, c * kh * kw), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ov = out
    cdef Py_ssize_t b, ci, i, j, oy, ox, iy, ix, row, col
    for b in range(n):
        for oy in range(oh):
            for ox in range(ow):
                row = (b * oh + oy) * ow + ox
                for ci in range(c):
                    for i in range(kh):
                        iy = oy * stride + i - pad
                        if iy < 0 or iy >= h:
                            continue
                        for j in range(kw):
                            ix = ox * stride + j - pad
                            if ix < 0 or ix >= w:
                                continue
                            col = (ci * kh + i) * kw + j
                            ov[row, col] = xv[b, ci, iy, ix]
    return out


def col2im(cnp.ndarray dcols, x_shape, int kh, int kw, int stride, int pad):
    cdef Py_ssize_t n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef Py_ssize_t oh = _out_dim(h, kh, stride, pad)
    cdef Py_ssize_t ow = _out_dim(w, kw, stride, pad)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dv = np.ascontiguousarray(dcols, dtype=np.float64)
    dx = np.zeros((n, c, h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] dxv = dx
    cdef Py_ssize_t b, ci, i, j, oy, ox, iy, ix, row, col
    # offset-major accumulation: matches the numpy backend bit for bit
    for i in range(kh):
        for j in range(kw):
            for b in range(n):
                for ci in range(c):
                    col = (ci * kh + i) * kw + j
                    for oy in range(oh):
                        iy = oy * stride + i - pad
                        if iy < 0 or iy >= h:
                            continue
                        for ox in range(ow):
                            ix = ox * stride + j - pad
                            if ix < 0 or ix >= w:
                                continue
                            row = (b * oh + oy) * ow + ox
                            dxv[b, ci, iy, ix] += dv[row, col]
    return dx


def maxpool_forward(cnp.ndarray x, int k, int stride, int pad):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef Py_ssize_t oh = _out_dim(h, k, stride, pad)
    cdef Py_ssize_t ow = _out_dim(w, k, stride, pad)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] xv = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty((n, c, oh, ow), dtype=np.float64)
    arg = np.zeros((n, c, oh, ow), dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] ov = out
    cdef cnp.ndarray[cnp.int64_t, ndim=4] av = arg
    cdef Py_ssize_t b, ci, oy, ox, i, j, iy, ix
    cdef double best, v
    cdef double neg_inf = -np.inf
    cdef Py_ssize_t besta
    for b in range(n):
        for ci in range(c):
            for oy in range(oh):
                for ox in range(ow):
                    best = neg_inf
                    besta = 0
                    for i in range(k):
                        iy = oy * stride + i - pad
                        if iy < 0 or iy >= h:
                            continue
                        for j in range(k):
                            ix = ox * stride + j - pad
                            if ix < 0 or ix >= w:
                                continue
                            v = xv[b, ci, iy, ix]
                            if v > best:
                                best = v
                                besta = i * k + j
                    ov[b, ci, oy, ox] = best
                    av[b, ci, oy, ox] = besta
    return out, arg


def maxpool_backward(cnp.ndarray dout, cnp.ndarray arg, x_shape, int k, int stride, int pad):
    cdef Py_ssize_t n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef Py_ssize_t oh = _out_dim(h, k, stride, pad)
    cdef Py_ssize_t ow = _out_dim(w, k, stride, pad)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] dov = np.ascontiguousarray(dout, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=4] av = np.ascontiguousarray(arg)
    dx = np.zeros((n, c, h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] dxv = dx
    cdef Py_ssize_t b, ci, oy, ox, i, j, iy, ix, off
    for i in range(k):
        for j in range(k):
            off = i * k + j
            for b in range(n):
                for ci in range(c):
                    for oy in range(oh):
                        iy = oy * stride + i - pad
                        if iy < 0 or iy >= h:
                            continue
                        for ox in range(ow):
                            if av[b, ci, oy, ox] != off:
                                continue
                            ix = ox * stride + j - pad
                            if ix < 0 or ix >= w:
                                continue
                            dxv[b, ci, iy, ix] += dov[b, ci, oy, ox]
    return dx


def meanpool_forward(cnp.ndarray x, int k, int stride):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef Py_ssize_t oh = _out_dim(h, k, stride, 0)
    cdef Py_ssize_t ow = _out_dim(w, k, stride, 0)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] xv = np.ascontiguousarray(x, dtype=np.float64)
    out = np.zeros((n, c, oh, ow), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] ov = out
    cdef double inv = 1.0 / (k * k)
    cdef Py_ssize_t b, ci, oy, ox, i, j
    cdef double acc
    for b in range(n):
        for ci in range(c):
            for oy in range(oh):
                for ox in range(ow):
                    acc = 0.0
                    for i in range(k):
                        for j in range(k):
                            acc += xv[b, ci, oy * stride + i, ox * stride + j]
                    ov[b, ci, oy, ox] = acc * inv
    return out


def meanpool_backward(cnp.ndarray dout, x_shape, int k, int stride):
    cdef Py_ssize_t n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef Py_ssize_t oh = _out_dim(h, k, stride, 0)
    cdef Py_ssize_t ow = _out_dim(w, k, stride, 0)
    # prescale with a numpy multiply so the accumulation below is adds only;
    # a fused multiply-add here would round differently from the numpy backend
    cdef cnp.ndarray[cnp.float64_t, ndim=4] dov = np.ascontiguousarray(dout, dtype=np.float64) * (
        1.0 / (k * k)
    )
    dx = np.zeros((n, c, h, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=4] dxv = dx
    cdef Py_ssize_t b, ci, oy, ox, i, j
    for i in range(k):
        for j in range(k):
            for b in range(n):
                for ci in range(c):
                    for oy in range(oh):
                        for ox in range(ow):
                            dxv[b, ci, oy * stride + i, ox * stride + j] += dov[b, ci, oy, ox]
    return dx


def lbp_code_map(cnp.ndarray img, cnp.ndarray dys, cnp.ndarray dxs, int margin):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] iv = np.ascontiguousarray(img, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dyv = np.ascontiguousarray(dys, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dxv = np.ascontiguousarray(dxs, dtype=np.int64)
    codes = np.full((h, w), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] cv = codes
    cdef Py_ssize_t np_ = dyv.shape[0]
    cdef Py_ssize_t y, x, p
    cdef cnp.int64_t acc
    cdef double center
    if h <= 2 * margin or w <= 2 * margin:
        return codes
    for y in range(margin, h - margin):
        for x in range(margin, w - margin):
            center = iv[y, x]
            acc = 0
            for p in range(np_):
                if iv[y + dyv[p], x + dxv[p]] >= center:
                    acc |= (<cnp.int64_t>1) << p
            cv[y, x] = acc
    return codes


def conv_direct_forward(cnp.ndarray xp, cnp.ndarray w, cnp.ndarray bias, int stride):
    """Direct cross-correlation over a pre-padded input; beats the im2col
    route when C*KH*KW is small (packing traffic would dwarf the math).
    Parallel over the batch: each thread owns whole output images, so the
    accumulation order per element never changes."""
    cdef double[:, :, :, ::1] xv = np.ascontiguousarray(xp, dtype=np.float64)
    cdef double[:, :, :, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(bias, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], c = xv.shape[1], hp = xv.shape[2], wp = xv.shape[3]
    cdef Py_ssize_t f = wv.shape[0], kh = wv.shape[2], kw = wv.shape[3]
    cdef Py_ssize_t oh = (hp - kh) // stride + 1
    cdef Py_ssize_t ow = (wp - kw) // stride + 1
    out = np.empty((n, f, oh, ow), dtype=np.float64)
    cdef double[:, :, :, ::1] ov = out
    cdef Py_ssize_t b, fi, oy, ox, ci, i, j
    cdef double wval, bval
    cdef double *orow
    cdef double *xrow
    with nogil:
        for b in prange(n, schedule="static"):
            for fi in range(f):
                bval = bv[fi]
                for oy in range(oh):
                    orow = &ov[b, fi, oy, 0]
                    for ox in range(ow):
                        orow[ox] = bval
                    for ci in range(c):
                        for i in range(kh):
                            xrow = &xv[b, ci, oy * stride + i, 0]
                            for j in range(kw):
                                wval = wv[fi, ci, i, j]
                                if stride == 1:
                                    for ox in range(ow):
                                        orow[ox] = orow[ox] + wval * xrow[ox + j]
                                else:
                                    for ox in range(ow):
                                        orow[ox] = orow[ox] + wval * xrow[ox * stride + j]
    return out


def conv_direct_input_grad(cnp.ndarray dout, cnp.ndarray w, xp_shape, int stride):
    """Gradient w.r.t. the padded input; parallel over the batch (each
    thread owns whole gradient images)."""
    cdef double[:, :, :, ::1] dov = np.ascontiguousarray(dout, dtype=np.float64)
    cdef double[:, :, :, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = xp_shape[0], c = xp_shape[1], hp = xp_shape[2], wp = xp_shape[3]
    cdef Py_ssize_t f = wv.shape[0], kh = wv.shape[2], kw = wv.shape[3]
    cdef Py_ssize_t oh = (hp - kh) // stride + 1
    cdef Py_ssize_t ow = (wp - kw) // stride + 1
    dxp = np.zeros((n, c, hp, wp), dtype=np.float64)
    cdef double[:, :, :, ::1] dxv = dxp
    cdef Py_ssize_t b, fi, oy, ox, ci, i, j
    cdef double wval
    cdef double *drow
    cdef double *dxrow
    with nogil:
        for b in prange(n, schedule="static"):
            for fi in range(f):
                for oy in range(oh):
                    drow = &dov[b, fi, oy, 0]
                    for ci in range(c):
                        for i in range(kh):
                            dxrow = &dxv[b, ci, oy * stride + i, 0]
                            for j in range(kw):
                                wval = wv[fi, ci, i, j]
                                if stride == 1:
                                    for ox in range(ow):
                                        dxrow[ox + j] = dxrow[ox + j] + wval * drow[ox]
                                else:
                                    for ox in range(ow):
                                        dxrow[ox * stride + j] = dxrow[ox * stride + j] + wval * drow[ox]
    return dxp


def conv_direct_weight_grad(cnp.ndarray xp, cnp.ndarray dout, int kh, int kw, int stride):
    """Gradient w.r.t. the filters; parallel over (filter, channel) blocks,
    which partitions dw by ownership and keeps the (batch, row) summation
    order of every entry fixed. Four-lane accumulators split the reduction
    deterministically."""
    cdef double[:, :, :, ::1] xv = np.ascontiguousarray(xp, dtype=np.float64)
    cdef double[:, :, :, ::1] dov = np.ascontiguousarray(dout, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], c = xv.shape[1], hp = xv.shape[2], wp = xv.shape[3]
    cdef Py_ssize_t f = dov.shape[1], oh = dov.shape[2], ow = dov.shape[3]
    dw = np.zeros((f, c, kh, kw), dtype=np.float64)
    cdef double[:, :, :, ::1] dwv = dw
    cdef Py_ssize_t fc, b, fi, oy, ox, ci, i, j, tail
    cdef double a0, a1, a2, a3
    cdef double *drow
    cdef double *xrow
    tail = ow - (ow & 3)
    with nogil:
        for fc in prange(f * c, schedule="static"):
            fi = fc // c
            ci = fc % c
            for b in range(n):
                for oy in range(oh):
                    drow = &dov[b, fi, oy, 0]
                    for i in range(kh):
                        xrow = &xv[b, ci, oy * stride + i, 0]
                        for j in range(kw):
                            a0 = 0.0
                            a1 = 0.0
                            a2 = 0.0
                            a3 = 0.0
                            if stride == 1:
                                for ox in range(0, tail, 4):
                                    a0 = a0 + drow[ox] * xrow[ox + j]
                                    a1 = a1 + drow[ox + 1] * xrow[ox + 1 + j]
                                    a2 = a2 + drow[ox + 2] * xrow[ox + 2 + j]
                                    a3 = a3 + drow[ox + 3] * xrow[ox + 3 + j]
                                for ox in range(tail, ow):
                                    a0 = a0 + drow[ox] * xrow[ox + j]
                            else:
                                for ox in range(0, tail, 4):
                                    a0 = a0 + drow[ox] * xrow[ox * stride + j]
                                    a1 = a1 + drow[ox + 1] * xrow[(ox + 1) * stride + j]
                                    a2 = a2 + drow[ox + 2] * xrow[(ox + 2) * stride + j]
                                    a3 = a3 + drow[ox + 3] * xrow[(ox + 3) * stride + j]
                                for ox in range(tail, ow):
                                    a0 = a0 + drow[ox] * xrow[ox * stride + j]
                            dwv[fi, ci, i, j] += (a0 + a1) + (a2 + a3)
    return dw
