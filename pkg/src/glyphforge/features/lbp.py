"""Local binary patterns at arbitrary neighbor count and radius.

A pixel's code thresholds P neighbors, equally spaced in angle at
radius R, against the center (neighbor >= center sets the bit). The
neighbor offsets are snapped to the nearest pixel: sampling actual
pixel values (rather than interpolating between them) keeps every code
exactly invariant under monotone intensity transforms and makes the
radius-1 ring coincide with the ordinary 8-neighborhood.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..errors import ImageTooSmall, OutOfBounds


@dataclass(frozen=True)
class LbpParams:
    neighbors: int = 8
    radius: float = 1.0
    grid: tuple = (4, 4)
    uniform: bool = True

    def __post_init__(self):
        if self.neighbors < 4:
            raise ValueError("neighbors must be >= 4")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")
        if self.grid[0] < 1 or self.grid[1] < 1:
            raise ValueError("grid dims must be >= 1")


def _round_half_away(v: float) -> int:
    return int(math.floor(abs(v) + 0.5)) * (1 if v >= 0 else -1)


@lru_cache(maxsize=64)
def neighbor_offsets(P: int, R: float):
    """Integer (dy, dx) offsets for neighbor p at angle 2*pi*p/P, radius R."""
    dys = np.empty(P, dtype=np.int64)
    dxs = np.empty(P, dtype=np.int64)
    for p in range(P):
        theta = 2.0 * math.pi * p / P
        dxs[p] = _round_half_away(R * math.cos(theta))
        dys[p] = _round_half_away(R * math.sin(theta))
    dys.setflags(write=False)
    dxs.setflags(write=False)
    return dys, dxs


def lbp_code_at(img: np.ndarray, x: int, y: int, P: int, R: float) -> int:
    """Code in [0, 2^P) for the pixel at column x, row y."""
    h, w = img.shape
    margin = math.ceil(R)
    if not (margin <= x < w - margin and margin <= y < h - margin):
        raise OutOfBounds(f"({x}, {y}) closer than {margin} px to a border of {w}x{h}")
    dys, dxs = neighbor_offsets(P, R)
    center = img[y, x]
    code = 0
    for p in range(P):
        if img[y + dys[p], x + dxs[p]] >= center:
            code |= 1 << p
    return code


def code_map(img: np.ndarray, P: int, R: float) -> np.ndarray:
    """Codes for all interior pixels at once; -1 outside the interior."""
    dys, dxs = neighbor_offsets(P, R)
    return _kernels.lbp_code_map(np.ascontiguousarray(img, dtype=np.float64), dys, dxs, math.ceil(R))


@lru_cache(maxsize=8)
def uniform_table(P: int):
    """(code -> bin) mapping for the uniform-pattern reduction.

    Codes with at most two circular 0/1 transitions get individual bins
    (ascending code order); all remaining codes share the final bin.
    Returns (table, bin_count).
    """
    if P > 24:
        raise ValueError("uniform table limited to P <= 24")
    codes = np.arange(1 << P, dtype=np.uint32)
    rotated = ((codes << 1) | (codes >> (P - 1))) & ((1 << P) - 1)
    transitions = np.bitwise_count(codes ^ rotated)
    is_uniform = transitions <= 2
    n_uniform = int(is_uniform.sum())
    table = np.full(1 << P, n_uniform, dtype=np.int32)
    table[is_uniform] = np.arange(n_uniform, dtype=np.int32)
    table.setflags(write=False)
    return table, n_uniform + 1


def lbp_dimension(params: LbpParams) -> int:
    cx, cy = params.grid
    bins = uniform_table(params.neighbors)[1] if params.uniform else (1 << params.neighbors)
    return cx * cy * bins


def lbp_histogram(img: np.ndarray, params: LbpParams):
    """Concatenated per-cell histograms of (uniform-mapped) codes.

    The image is partitioned into grid cells; each cell's histogram runs
    over its interior pixels (at least ceil(R) from the image border)
    and is L1-normalized. Cells are concatenated row-major.
    """
    h, w = img.shape
    P = params.neighbors
    margin = math.ceil(params.radius)
    codes = code_map(img, P, params.radius)
    if params.uniform:
        table, bins = uniform_table(P)
    else:
        table, bins = None, 1 << P

    cx, cy = params.grid
    out = np.zeros((cy, cx, bins), dtype=np.float64)
    for iy in range(cy):
        y0, y1 = iy * h // cy, (iy + 1) * h // cy
        for ix in range(cx):
            x0, x1 = ix * w // cx, (ix + 1) * w // cx
            cell = codes[max(y0, margin) : min(y1, h - margin), max(x0, margin) : min(x1, w - margin)]
            cell = cell[cell >= 0]
            if cell.size == 0:
                raise ImageTooSmall(
                    f"grid cell ({ix},{iy}) of {w}x{h} image has no interior pixels at radius {params.radius}"
                )
            if table is not None:
                cell = table[cell]
            counts = np.bincount(cell, minlength=bins).astype(np.float64)
            out[iy, ix] = counts / counts.sum()
    return out.reshape(-1)
