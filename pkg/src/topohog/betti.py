"""Betti-curve vectorisation of persistence diagrams and class-level bands."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cubical import compute_persistence
from .imageio import ChannelSet

N_THRESHOLDS = 100
CHANNELS = ("gray", "red", "green", "blue")
DIMS = (0, 1)


def default_grid(n: int = N_THRESHOLDS) -> np.ndarray:
    """``n`` evenly spaced integer thresholds covering [0, 255]."""
    return np.floor(np.linspace(0.0, 255.0, n) + 0.5).astype(np.int64)


def feature_names(grid=None) -> list[str]:
    """Column labels in feature-vector order, e.g. ``gray_b0_t000``."""
    grid = default_grid() if grid is None else np.asarray(grid)
    return [
        f"{ch}_b{dim}_t{int(t):03d}" for ch in CHANNELS for dim in DIMS for t in grid
    ]


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid


def betti_curve(diagram, grid=None) -> np.ndarray:
    """Number of pairs alive (``birth <= t < death``) at each grid threshold."""
    grid = _check_grid(default_grid() if grid is None else grid)
    d = np.asarray(diagram, dtype=float).reshape(-1, 2)
    if len(d) == 0:
        return np.zeros(len(grid), dtype=np.int64)
    # counting sorted births/deaths avoids the (pairs x grid) table
    born = np.searchsorted(np.sort(d[:, 0]), grid, side="right")
    dead = np.searchsorted(np.sort(d[:, 1]), grid, side="right")
    return (born - dead).astype(np.int64)


def channel_curves(channel, grid=None) -> tuple[np.ndarray, np.ndarray]:
    pd0, pd1 = compute_persistence(channel)
    return betti_curve(pd0, grid), betti_curve(pd1, grid)


def tda_features(channels: ChannelSet, grid=None) -> np.ndarray:
    """Concatenated Betti curves ``[gray b0 | gray b1 | R b0 | ... | B b1]``.

    With the default 100-point grid the result has length 800.
    """
    blocks = []
    for name in CHANNELS:
        blocks.extend(channel_curves(getattr(channels, name), grid))
    return np.concatenate(blocks)


@dataclass(frozen=True)
class CurveBand:
    median: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    coverage: float


def median_band(curves, coverage: float = 0.4) -> CurveBand:
    """Pointwise median with a central ``coverage`` band of empirical quantiles.

    Quantiles are inclusive with linear interpolation between order statistics.
    ``curves`` is an ``(n_curves, n_thresholds)`` array or a list of equal
    length curves.
    """
    if not 0 < coverage < 1:
        raise ValueError("coverage must lie strictly between 0 and 1")
    if len(curves) == 0:
        raise ValueError("need at least one curve")
    lengths = {len(c) for c in curves}
    if len(lengths) != 1:
        raise ValueError("all curves must share the same grid")
    ordered = np.sort(np.asarray(curves, dtype=float), axis=0)
    tail = (1.0 - coverage) / 2.0
    return CurveBand(
        median=_order_statistic(ordered, 0.5),
        lower=_order_statistic(ordered, tail),
        upper=_order_statistic(ordered, 1.0 - tail),
        coverage=coverage,
    )


def _order_statistic(ordered, q):
    """Inclusive quantile ``q`` of column-sorted data, interpolating linearly."""
    pos = q * (len(ordered) - 1)
    lo = int(np.floor(pos))
    hi = min(lo + 1, len(ordered) - 1)
    frac = pos - lo
    return ordered[lo] + (ordered[hi] - ordered[lo]) * frac
