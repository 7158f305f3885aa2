"""The compiled and numpy kernel backends must agree bit for bit."""

import numpy as np
import pytest

from glyphforge import _kernels
from glyphforge._kernels import _core_np

cy = pytest.importorskip("glyphforge._kernels._core_cy")


@pytest.mark.parametrize("stride,pad", [(1, 0), (1, 1), (2, 0), (2, 1), (3, 2)])
def test_im2col_col2im_parity(stride, pad):
    rng = np.random.default_rng(0)
    x = rng.random((3, 4, 9, 11))
    for k in (1, 2, 3):
        a = _core_np.im2col(x, k, k, stride, pad)
        b = cy.im2col(x, k, k, stride, pad)
        assert np.array_equal(a, b)
        d = rng.random(a.shape)
        assert np.array_equal(
            _core_np.col2im(d, x.shape, k, k, stride, pad),
            cy.col2im(d, x.shape, k, k, stride, pad),
        )


@pytest.mark.parametrize("k,stride,pad", [(2, 2, 0), (3, 2, 1), (3, 1, 0), (2, 1, 1)])
def test_maxpool_parity(k, stride, pad):
    rng = np.random.default_rng(1)
    x = rng.random((2, 3, 10, 8))
    o1, a1 = _core_np.maxpool_forward(x, k, stride, pad)
    o2, a2 = cy.maxpool_forward(x, k, stride, pad)
    assert np.array_equal(o1, o2)
    assert np.array_equal(a1, a2)
    d = rng.random(o1.shape)
    assert np.array_equal(
        _core_np.maxpool_backward(d, a1, x.shape, k, stride, pad),
        cy.maxpool_backward(d, a2, x.shape, k, stride, pad),
    )


def test_maxpool_tie_goes_to_first_window_cell():
    x = np.zeros((1, 1, 2, 2))
    for backend in (_core_np, cy):
        out, arg = backend.maxpool_forward(x, 2, 2, 0)
        assert out[0, 0, 0, 0] == 0.0
        assert arg[0, 0, 0, 0] == 0


@pytest.mark.parametrize("k,stride", [(2, 2), (3, 1), (2, 1)])
def test_meanpool_parity(k, stride):
    rng = np.random.default_rng(2)
    x = rng.random((2, 2, 9, 9))
    assert np.array_equal(_core_np.meanpool_forward(x, k, stride), cy.meanpool_forward(x, k, stride))
    oh = (9 - k) // stride + 1
    d = rng.random((2, 2, oh, oh))
    assert np.array_equal(
        _core_np.meanpool_backward(d, x.shape, k, stride),
        cy.meanpool_backward(d, x.shape, k, stride),
    )


def test_lbp_parity():
    rng = np.random.default_rng(3)
    img = rng.random((17, 13))
    for P, R_margin in [(8, 1), (16, 2), (24, 3)]:
        from glyphforge.features import neighbor_offsets

        dys, dxs = neighbor_offsets(P, float(R_margin))
        a = _core_np.lbp_code_map(img, dys, dxs, R_margin)
        b = cy.lbp_code_map(img, dys, dxs, R_margin)
        assert np.array_equal(a, b)


def test_selected_backend_is_compiled_when_available():
    assert _kernels.backend_name() == "cython"
    assert len(_kernels.available_backends()) == 2
