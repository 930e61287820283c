from __future__ import annotations

import numpy as np


class NotFittedError(RuntimeError):
    pass


def check_dataset(X, y, n_classes=None):
    """Validate a training set; returns float features, int labels and class count."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[1] == 0:
        raise ValueError(f"features must be an (n, d) matrix with d > 0, got shape {X.shape}")
    if y.ndim != 1 or len(y) != len(X):
        raise ValueError("labels must be a vector with one entry per row")
    if not np.issubdtype(y.dtype, np.integer):
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise ValueError("labels must be integers")
        y = y.astype(np.int64)
    if len(y) < 2:
        raise ValueError("need at least two samples")
    if y.min() < 0:
        raise ValueError("labels must be non-negative")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    if y.max() >= n_classes:
        raise ValueError(f"label {int(y.max())} outside [0, {n_classes - 1}]")
    if len(np.unique(y)) < 2:
        raise ValueError("training data contains a single class")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain NaN or infinite values")
    return X, y.astype(np.int64), int(n_classes)


def check_query(X, n_features):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got shape {X.shape}")
    return X


def child_rngs(seed, n):
    """``n`` independent generators derived from ``seed``; the i-th never depends on n."""
    root = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in root.spawn(n)]


class Standardizer:
    """Zero-mean, unit-variance scaling fitted on training rows only."""

    def __init__(self, mean=None, scale=None):
        self.mean = mean
        self.scale = scale

    def fit(self, X):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        return self

    def transform(self, X):
        return (X - self.mean) / self.scale


def normalize_rows(scores):
    total = scores.sum(axis=1, keepdims=True)
    k = scores.shape[1]
    return np.divide(scores, total, out=np.full_like(scores, 1.0 / k), where=total > 0)


def ovr_probabilities(pos):
    """Turn an (m, K) matrix of one-vs-rest positive probabilities into rows summing to 1."""
    if pos.shape[1] == 1:
        p = pos[:, 0]
        return np.column_stack([1.0 - p, p])
    return normalize_rows(pos)
