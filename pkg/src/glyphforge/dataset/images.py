"""Grayscale image representation and geometry helpers.

A glyph image is a numpy (height, width) float64 array with values in
[0, 1]; 0 is ink, 1 is paper. PNG files hold the same data as 8-bit
grayscale, mapped by value/255 at the I/O boundary. The reference
corpus crops are 64x64, but nothing below assumes that.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import BadImage


def validate_image(img: np.ndarray) -> np.ndarray:
    if not isinstance(img, np.ndarray) or img.ndim != 2:
        raise BadImage("expected a 2-D numpy array")
    if img.size == 0:
        raise BadImage("empty image")
    if np.isnan(img).any() or img.min() < 0.0 or img.max() > 1.0:
        raise BadImage("pixel values must lie in [0, 1]")
    return img


def load_png(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            arr = np.asarray(im.convert("L"), dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise BadImage(f"cannot decode {path}: {exc}") from exc
    return arr / 255.0


def save_png(img: np.ndarray, path) -> None:
    validate_image(img)
    data = np.rint(img * 255.0).astype(np.uint8)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(data, mode="L").save(path, format="PNG")


def _bilinear_gather(img: np.ndarray, ys: np.ndarray, xs: np.ndarray, fill: float) -> np.ndarray:
    """Sample img at real coordinates (ys, xs); out-of-range points get fill."""
    h, w = img.shape
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    fy = ys - y0
    fx = xs - x0

    def at(yy, xx):
        inside = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
        vals = img[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)]
        return np.where(inside, vals, fill)

    top = at(y0, x0) * (1 - fx) + at(y0, x0 + 1) * fx
    bot = at(y0 + 1, x0) * (1 - fx) + at(y0 + 1, x0 + 1) * fx
    return top * (1 - fy) + bot * fy


def resize_bilinear(img: np.ndarray, height: int, width: int) -> np.ndarray:
    """Resize with half-pixel-center sampling; clamped at the borders."""
    h, w = img.shape
    if (h, w) == (height, width):
        return img.copy()
    ys = (np.arange(height, dtype=np.float64) + 0.5) * (h / height) - 0.5
    xs = (np.arange(width, dtype=np.float64) + 0.5) * (w / width) - 0.5
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    grid_y, grid_x = np.meshgrid(ys, xs, indexing="ij")
    return _bilinear_gather(img, grid_y, grid_x, fill=1.0)


def affine_warp(
    img: np.ndarray,
    angle_deg: float,
    scale: float,
    tx: float,
    ty: float,
    fill: float = 1.0,
) -> np.ndarray:
    """Rotate (counterclockwise), scale, and translate about the image center.

    Output has the input's dimensions; uncovered pixels take `fill`.
    The inverse map is applied per output pixel with bilinear sampling.
    """
    h, w = img.shape
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    theta = np.deg2rad(angle_deg)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    ys, xs = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    # invert: undo translation, then rotation+scale about the center
    yr = ys - cy - ty
    xr = xs - cx - tx
    src_x = (cos_t * xr + sin_t * yr) / scale + cx
    src_y = (-sin_t * xr + cos_t * yr) / scale + cy
    return _bilinear_gather(img, src_y, src_x, fill=fill)
