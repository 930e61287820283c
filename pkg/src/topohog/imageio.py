"""Image loading, resizing and channel extraction.

Images are plain ``numpy.uint8`` arrays: ``(height, width)`` for a single
channel and ``(height, width, 3)`` for RGB. Both feature pipelines start from
these arrays.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

GRAY_WEIGHTS = (0.299, 0.587, 0.114)


class ImageError(Exception):
    """Base class for image decoding problems. Carries the offending path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = str(path)


class ImageNotFoundError(ImageError, FileNotFoundError):
    pass


class UnsupportedFormatError(ImageError):
    pass


class CorruptImageError(ImageError):
    pass


class ChannelSet(NamedTuple):
    """Grayscale plus the raw R, G, B planes of one image."""

    gray: np.ndarray
    red: np.ndarray
    green: np.ndarray
    blue: np.ndarray


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim not in (2, 3) or (img.ndim == 3 and img.shape[2] != 3):
        raise ValueError(f"expected (H, W) or (H, W, 3) image, got shape {img.shape}")
    if img.size == 0:
        raise ValueError("empty image")
    if img.dtype != np.uint8:
        if np.any(img < 0) or np.any(img > 255):
            raise ValueError("intensities must lie in [0, 255]")
        img = img.astype(np.uint8)
    return img


def load_image(path) -> np.ndarray:
    """Decode a PNG or JPEG file into a uint8 array.

    Palette and 16-bit images are converted to 8-bit RGB or L; alpha is
    dropped. EXIF orientation is not applied.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise ImageNotFoundError(path, "file not found")
    try:
        with PILImage.open(path) as im:
            if im.format not in ("PNG", "JPEG"):
                raise UnsupportedFormatError(path, f"unsupported format {im.format!r}")
            im.load()
            if im.mode in ("L", "RGB"):
                pass
            elif im.mode in ("1", "I;16", "I", "F"):
                if im.mode in ("I;16", "I"):
                    arr = np.asarray(im, dtype=np.float64)
                    if arr.max() > 255:
                        arr = arr / 257.0
                    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)
                im = im.convert("L")
            elif im.mode == "LA":
                im = im.convert("L")
            else:
                im = im.convert("RGB")
            return np.array(im, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormatError(path, "not a recognised image file") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, ImageError):
            raise
        raise CorruptImageError(path, f"could not decode ({exc})") from exc


def _round_clip(values: np.ndarray) -> np.ndarray:
    # round half up, then clamp
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def _bilinear_axis(src_len: int, dst_len: int):
    """Source indices and weights for half-pixel-centred linear resampling."""
    scale = src_len / dst_len
    coords = (np.arange(dst_len) + 0.5) * scale - 0.5
    coords = np.clip(coords, 0, src_len - 1)
    lo = np.floor(coords).astype(np.intp)
    hi = np.minimum(lo + 1, src_len - 1)
    frac = coords - lo
    return lo, hi, frac


def resize(img: np.ndarray, target_w: int, target_h: int) -> np.ndarray:
    """Bilinear resize with pixel centres aligned (no antialiasing)."""
    img = _check_image(img)
    if target_w < 1 or target_h < 1:
        raise ValueError(f"target size must be positive, got {target_w}x{target_h}")
    h, w = img.shape[:2]
    if (h, w) == (target_h, target_w):
        return img.copy()
    data = img.astype(np.float64)
    y0, y1, fy = _bilinear_axis(h, target_h)
    x0, x1, fx = _bilinear_axis(w, target_w)
    if data.ndim == 3:
        fy = fy[:, None, None]
        fx = fx[None, :, None]
    else:
        fy = fy[:, None]
        fx = fx[None, :]
    top = data[y0][:, x0] * (1 - fx) + data[y0][:, x1] * fx
    bottom = data[y1][:, x0] * (1 - fx) + data[y1][:, x1] * fx
    return _round_clip(top * (1 - fy) + bottom * fy)


def to_grayscale(img: np.ndarray) -> np.ndarray:
    img = _check_image(img)
    if img.ndim != 3:
        raise ValueError("to_grayscale expects a 3-channel image")
    # integer arithmetic keeps round-half-up exact: weights scaled by 1000
    r, g, b = (img[..., i].astype(np.int64) for i in range(3))
    weighted = 299 * r + 587 * g + 114 * b
    return np.clip((weighted + 500) // 1000, 0, 255).astype(np.uint8)


def split_channels(img: np.ndarray) -> ChannelSet:
    img = _check_image(img)
    if img.ndim != 3:
        raise ValueError("split_channels expects a 3-channel image")
    return ChannelSet(
        gray=to_grayscale(img),
        red=img[..., 0].copy(),
        green=img[..., 1].copy(),
        blue=img[..., 2].copy(),
    )
