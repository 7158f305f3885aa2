"""Real Gabor kernels and wavelength/orientation banks."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GaborParams:
    wavelength: float
    orientation: float = 0.0
    phase: float = 0.0
    sigma: float | None = None  # None -> 0.56 * wavelength (about one octave)
    aspect: float = 0.5
    kernel_size: int | None = None  # None -> next odd >= 6*sigma + 1

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        if self.kernel_size is not None and (self.kernel_size < 3 or self.kernel_size % 2 == 0):
            raise ValueError("kernel_size must be odd and >= 3")

    @property
    def effective_sigma(self) -> float:
        return 0.56 * self.wavelength if self.sigma is None else self.sigma

    @property
    def effective_size(self) -> int:
        if self.kernel_size is not None:
            return self.kernel_size
        size = int(math.ceil(6.0 * self.effective_sigma + 1.0))
        return size if size % 2 == 1 else size + 1


def gabor_kernel(params: GaborParams) -> np.ndarray:
    """Gaussian envelope times an oriented cosine carrier, sampled on the
    centered integer grid. With zero phase the center value is exactly 1."""
    size = params.effective_size
    half = size // 2
    sigma = params.effective_sigma
    gamma = params.aspect
    theta = params.orientation
    ys, xs = np.meshgrid(
        np.arange(-half, half + 1, dtype=np.float64),
        np.arange(-half, half + 1, dtype=np.float64),
        indexing="ij",
    )
    x_rot = xs * math.cos(theta) + ys * math.sin(theta)
    y_rot = -xs * math.sin(theta) + ys * math.cos(theta)
    envelope = np.exp(-(x_rot**2 + (gamma * y_rot) ** 2) / (2.0 * sigma**2))
    carrier = np.cos(2.0 * math.pi * x_rot / params.wavelength + params.phase)
    return envelope * carrier


def gabor_bank(
    wavelengths, orientations, phase: float = 0.0, sigma: float | None = None,
    aspect: float = 0.5, kernel_size: int | None = None,
) -> list:
    """Cartesian product of wavelengths x orientations, wavelength-major."""
    if not len(wavelengths) or not len(orientations):
        raise ValueError("wavelengths and orientations must be non-empty")
    bank = []
    for lam in wavelengths:
        for theta in orientations:
            bank.append(
                gabor_kernel(
                    GaborParams(
                        wavelength=float(lam),
                        orientation=float(theta),
                        phase=phase,
                        sigma=sigma,
                        aspect=aspect,
                        kernel_size=kernel_size,
                    )
                )
            )
    return bank


DEFAULT_WAVELENGTHS = tuple(np.linspace(4.0, 8.0, 8))
DEFAULT_ORIENTATIONS = tuple(np.linspace(0.0, math.pi / 2.0, 4))


def default_gabor_bank() -> list:
    """The stock 32-kernel bank: 8 wavelengths in [4, 8] by 4 orientations in [0, pi/2]."""
    return gabor_bank(DEFAULT_WAVELENGTHS, DEFAULT_ORIENTATIONS)
