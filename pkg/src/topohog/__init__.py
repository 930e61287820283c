"""Topological (cubical persistence / Betti curve) and HOG features for image
classification, seven classical classifiers, and a cross-validation harness."""

from .betti import betti_curve, median_band, tda_features
from .cubical import INFINITY, binarize, compute_persistence
from .hog import HogParams, hog_features
from .imageio import load_image, resize, split_channels, to_grayscale

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "HogParams", "betti_curve", "binarize", "compute_persistence", "hog_features",
    "load_image", "median_band", "resize", "split_channels", "tda_features", "to_grayscale",
]
