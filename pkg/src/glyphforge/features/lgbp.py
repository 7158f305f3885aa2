"""Two-layer descriptor: Gabor magnitude maps re-encoded with binary patterns."""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import ImageTooSmall
from .lbp import LbpParams, lbp_dimension, lbp_histogram


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    descriptor_id: str

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature values must be finite")

    @property
    def dimension(self) -> int:
        return int(self.values.size)


def descriptor_id(config: dict) -> str:
    """Stable fingerprint of a descriptor configuration (canonical-JSON hash prefix)."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def convolve_reflect(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Same-size true convolution with reflect padding at the borders."""
    kh, kw = kernel.shape
    ph, pw = kh // 2, kw // 2
    h, w = img.shape
    if ph >= h or pw >= w:
        raise ImageTooSmall(f"{w}x{h} image too small for a {kw}x{kh} kernel with reflect padding")
    padded = np.pad(img, ((ph, kh - 1 - ph), (pw, kw - 1 - pw)), mode="reflect")
    flipped = np.ascontiguousarray(kernel[::-1, ::-1], dtype=np.float64)
    x = padded[np.newaxis, np.newaxis]
    out, _ = _kernels.conv2d_forward(x, flipped[np.newaxis, np.newaxis], None, 1, 0)
    return out[0, 0]


def magnitude_map(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Absolute filter response, min-max rescaled to [0, 1] (constant maps go to 0)."""
    mag = np.abs(convolve_reflect(img, kernel))
    lo, hi = mag.min(), mag.max()
    if hi - lo <= 0:
        return np.zeros_like(mag)
    return (mag - lo) / (hi - lo)


def lgbp_dimension(bank_size: int, lbp: LbpParams) -> int:
    return bank_size * lbp_dimension(lbp)


def lgbp_descriptor(img: np.ndarray, bank, lbp: LbpParams) -> np.ndarray:
    """Concatenated binary-pattern histograms over every magnitude map."""
    parts = [lbp_histogram(magnitude_map(img, kernel), lbp) for kernel in bank]
    return np.concatenate(parts)
