import math

import numpy as np
import pytest

from glyphforge.features import (
    DEFAULT_ORIENTATIONS,
    DEFAULT_WAVELENGTHS,
    GaborParams,
    default_gabor_bank,
    gabor_bank,
    gabor_kernel,
)


def direct_gabor_value(x, y, lam, theta, psi, sigma, gamma):
    """Independent scalar evaluation of the Gabor formula."""
    xp = x * math.cos(theta) + y * math.sin(theta)
    yp = -x * math.sin(theta) + y * math.cos(theta)
    return math.exp(-(xp**2 + (gamma * yp) ** 2) / (2 * sigma**2)) * math.cos(
        2 * math.pi * xp / lam + psi
    )


def test_center_value_is_one_with_zero_phase():
    k = gabor_kernel(GaborParams(wavelength=4.0, orientation=0.7, phase=0.0))
    half = k.shape[0] // 2
    assert k[half, half] == pytest.approx(1.0, abs=1e-12)


def test_zero_phase_kernel_is_even():
    for theta in (0.0, 0.4, math.pi / 3):
        k = gabor_kernel(GaborParams(wavelength=5.0, orientation=theta, phase=0.0))
        assert np.allclose(k, k[::-1, ::-1], atol=1e-12)


def test_theta_plus_pi_leaves_kernel_unchanged():
    base = GaborParams(wavelength=6.0, orientation=0.9, phase=0.0)
    shifted = GaborParams(wavelength=6.0, orientation=0.9 + math.pi, phase=0.0)
    assert np.allclose(gabor_kernel(base), gabor_kernel(shifted), atol=1e-12)


def test_spot_values_match_direct_formula():
    params = GaborParams(wavelength=4.0, orientation=0.0, phase=0.0, sigma=2.0, aspect=1.0, kernel_size=7)
    k = gabor_kernel(params)
    assert k.shape == (7, 7)
    for (row, col) in [(0, 0), (1, 5), (3, 3), (6, 2), (2, 6)]:
        x = col - 3
        y = row - 3
        expected = direct_gabor_value(x, y, 4.0, 0.0, 0.0, 2.0, 1.0)
        assert k[row, col] == pytest.approx(expected, abs=1e-12)


def test_spot_values_rotated():
    params = GaborParams(wavelength=5.0, orientation=1.1, phase=0.3, sigma=1.7, aspect=0.5, kernel_size=9)
    k = gabor_kernel(params)
    for (row, col) in [(0, 8), (4, 4), (7, 1)]:
        expected = direct_gabor_value(col - 4, row - 4, 5.0, 1.1, 0.3, 1.7, 0.5)
        assert k[row, col] == pytest.approx(expected, abs=1e-12)


def test_default_bank_has_32_kernels():
    bank = default_gabor_bank()
    assert len(bank) == 32
    assert len(DEFAULT_WAVELENGTHS) == 8
    assert len(DEFAULT_ORIENTATIONS) == 4
    assert DEFAULT_WAVELENGTHS[0] == 4.0 and DEFAULT_WAVELENGTHS[-1] == 8.0
    assert DEFAULT_ORIENTATIONS[0] == 0.0 and DEFAULT_ORIENTATIONS[-1] == pytest.approx(math.pi / 2)


def test_single_entry_bank():
    bank = gabor_bank([4.0], [0.0])
    assert len(bank) == 1


def test_bank_ordering_stable():
    a = default_gabor_bank()
    b = default_gabor_bank()
    for ka, kb in zip(a, b):
        assert np.array_equal(ka, kb)
    # wavelength-major: first 4 kernels share the shortest wavelength
    sizes = [k.shape[0] for k in a]
    assert sizes[:4] == [sizes[0]] * 4


def test_default_size_is_odd_and_covers_envelope():
    p = GaborParams(wavelength=8.0)
    size = p.effective_size
    assert size % 2 == 1
    assert size >= 6 * p.effective_sigma
