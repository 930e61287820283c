"""Histogram of Oriented Gradients on grayscale images.

Defaults give 9 unsigned orientation bins, 8x8-pixel cells, 2x2-cell blocks
and L2-Hys block normalisation; a 224x224 image yields 26,244 values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HogParams:
    orientations: int = 9
    cell_size: int = 8
    block_size: int = 2
    clip: float = 0.2
    epsilon: float = 1e-5

    def __post_init__(self):
        if self.orientations < 1 or self.cell_size < 1 or self.block_size < 1:
            raise ValueError(f"invalid HOG parameters: {self}")
        if self.clip <= 0 or self.epsilon <= 0:
            raise ValueError("clip and epsilon must be positive")


def descriptor_length(width: int, height: int, params: HogParams = HogParams()) -> int:
    bx = width // params.cell_size - params.block_size + 1
    by = height // params.cell_size - params.block_size + 1
    return max(bx, 0) * max(by, 0) * params.block_size**2 * params.orientations


def gradients(img) -> tuple[np.ndarray, np.ndarray]:
    """Undivided central differences; one-sided differences on the border.

    Returns ``(gx, gy)`` with ``gx`` along columns and ``gy`` along rows
    (row index increasing downwards).
    """
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError(f"expected a single-channel image, got shape {img.shape}")
    f = img.astype(np.float64)
    gx = np.zeros_like(f)
    gy = np.zeros_like(f)
    if f.shape[1] > 1:
        gx[:, 1:-1] = f[:, 2:] - f[:, :-2]
        gx[:, 0] = f[:, 1] - f[:, 0]
        gx[:, -1] = f[:, -1] - f[:, -2]
    if f.shape[0] > 1:
        gy[1:-1, :] = f[2:, :] - f[:-2, :]
        gy[0, :] = f[1, :] - f[0, :]
        gy[-1, :] = f[-1, :] - f[-2, :]
    return gx, gy


def cell_histograms(gx, gy, params: HogParams = HogParams()) -> np.ndarray:
    """Magnitude-weighted orientation histograms, shape ``(cells_y, cells_x, bins)``.

    Each pixel splits its vote linearly between the two nearest bin centres,
    which sit at ``(i + 0.5) * 180 / orientations`` degrees; the bins wrap
    around at 180.
    """
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    if gx.shape != gy.shape or gx.ndim != 2:
        raise ValueError("gradient planes must be 2-D and of equal shape")
    c, nb = params.cell_size, params.orientations
    h, w = gx.shape
    if h % c or w % c:
        raise ValueError(f"image size {w}x{h} is not a multiple of the cell size {c}")
    magnitude = np.hypot(gx, gy)
    angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
    width = 180.0 / nb
    pos = angle / width - 0.5
    lo = np.floor(pos)
    frac = pos - lo
    lo_bin = lo.astype(np.int64) % nb
    hi_bin = (lo_bin + 1) % nb

    cy, cx = h // c, w // c
    cell_index = (np.arange(h)[:, None] // c) * cx + (np.arange(w)[None, :] // c)
    flat_lo = (cell_index * nb + lo_bin).ravel()
    flat_hi = (cell_index * nb + hi_bin).ravel()
    hist = np.bincount(flat_lo, weights=(magnitude * (1 - frac)).ravel(), minlength=cy * cx * nb)
    hist += np.bincount(flat_hi, weights=(magnitude * frac).ravel(), minlength=cy * cx * nb)
    return hist.reshape(cy, cx, nb)


def _l2(v: np.ndarray, eps: float) -> np.ndarray:
    return v / np.sqrt(np.sum(v * v, axis=-1, keepdims=True) + eps**2)


def block_vectors(cells: np.ndarray, params: HogParams = HogParams()) -> np.ndarray:
    """Raw (unnormalised) block vectors, shape ``(blocks_y, blocks_x, b*b*bins)``."""
    cells = np.asarray(cells, dtype=np.float64)
    b = params.block_size
    cy, cx, nb = cells.shape
    if cy < b or cx < b:
        raise ValueError(f"cell grid {cy}x{cx} is smaller than one {b}x{b} block")
    by, bx = cy - b + 1, cx - b + 1
    out = np.empty((by, bx, b, b, nb))
    for dy in range(b):
        for dx in range(b):
            out[:, :, dy, dx, :] = cells[dy:dy + by, dx:dx + bx, :]
    return out.reshape(by, bx, b * b * nb)


def l2hys_clipped(blocks: np.ndarray, params: HogParams = HogParams()) -> np.ndarray:
    """First L2 normalisation followed by clipping: the stage before renormalising."""
    return np.minimum(_l2(blocks, params.epsilon), params.clip)


def block_normalize(cells, params: HogParams = HogParams()) -> np.ndarray:
    blocks = l2hys_clipped(block_vectors(cells, params), params)
    return _l2(blocks, params.epsilon).ravel()


def hog_features(img, params: HogParams = HogParams()) -> np.ndarray:
    gx, gy = gradients(img)
    return block_normalize(cell_histograms(gx, gy, params), params)
