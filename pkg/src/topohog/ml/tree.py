"""Gini classification trees and the two forest ensembles built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._base import check_dataset, check_query, child_rngs

LEAF = -1
# cap on n * features * classes held in memory while scanning splits
_SCAN_BUDGET = 4_000_000


@dataclass
class Tree:
    """Flat array encoding: node i splits on ``feature[i] <= threshold[i]``.

    Leaves have ``feature == -1``; ``value`` holds the class distribution of
    the training rows that reached each node.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self):
        return len(self.feature)

    def apply(self, X):
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.nonzero(active)[0]
            nd = node[rows]
            go_left = X[rows, self.feature[nd]] <= self.threshold[nd]
            node[rows] = np.where(go_left, self.left[nd], self.right[nd])
            active[rows] = self.feature[node[rows]] != LEAF
        return node

    def predict_proba(self, X):
        v = self.value[self.apply(X)]
        return v / v.sum(axis=1, keepdims=True)


def gini(counts):
    counts = np.asarray(counts, dtype=float)
    n = counts.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        g = 1.0 - np.sum(counts**2, axis=-1) / n**2
    return np.where(n > 0, g, 0.0)


def _weighted_impurity(left, n_left, total, n):
    # n_L * G_L + n_R * G_R, up to the constant n
    right = total - left
    n_right = n - n_left
    with np.errstate(invalid="ignore", divide="ignore"):
        sl = np.sum(left**2, axis=-1) / n_left
        sr = np.sum(right**2, axis=-1) / n_right
    return -(np.nan_to_num(sl) + np.nan_to_num(sr))


def _best_exact_split(Xn, onehot, features):
    """Best Gini threshold over ``features`` for the node rows ``Xn``.

    Returns ``(score, feature, threshold)`` with lower score better, or None.
    """
    n, k = onehot.shape
    total = onehot.sum(axis=0)
    best = None
    chunk = max(1, _SCAN_BUDGET // max(1, n * k))
    for start in range(0, len(features), chunk):
        feats = features[start:start + chunk]
        cols = Xn[:, feats]
        order = np.argsort(cols, axis=0, kind="stable")
        xs = np.take_along_axis(cols, order, axis=0)
        left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, m, k)
        n_left = np.arange(1, n, dtype=float)[:, None]
        score = _weighted_impurity(left, n_left, total, n)
        valid = xs[:-1] < xs[1:]
        score = np.where(valid, score, np.inf)
        flat = int(np.argmin(score.T))  # feature-major: earliest feature wins ties
        j, pos = divmod(flat, n - 1)
        if not np.isfinite(score[pos, j]):
            continue
        if best is None or score[pos, j] < best[0]:
            lo, hi = xs[pos, j], xs[pos + 1, j]
            thr = lo + (hi - lo) / 2.0
            if not lo <= thr < hi:
                thr = lo
            best = (score[pos, j], int(feats[j]), float(thr))
    return best


def _best_random_split(Xn, onehot, features, rng):
    """Extra-trees split: one uniform cut per feature, keep the purest."""
    n, k = onehot.shape
    total = onehot.sum(axis=0)
    cols = Xn[:, features]
    lo, hi = cols.min(axis=0), cols.max(axis=0)
    cuts = rng.uniform(lo, hi)
    cuts = np.where(cuts >= hi, lo, cuts)
    mask = cols <= cuts
    left = (mask.T.astype(float) @ onehot)  # (m, k)
    n_left = mask.sum(axis=0).astype(float)
    score = _weighted_impurity(left, n_left, total, n)
    score = np.where((n_left > 0) & (n_left < n), score, np.inf)
    j = int(np.argmin(score))
    if not np.isfinite(score[j]):
        return None
    return score[j], int(features[j]), float(cuts[j])


def build_tree(X, y, n_classes, *, max_features=None, max_depth=None,
               min_samples_split=2, min_samples_leaf=1, random_splits=False, rng=None):
    """Grow one Gini tree on all rows of ``X``.

    ``max_features`` limits how many non-constant features are examined per
    node, drawn at random when smaller than the number available.
    """
    n, d = X.shape
    onehot = np.eye(n_classes)[y]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(onehot[rows].sum(axis=0))
        return len(feature) - 1

    root = new_node(np.arange(n))
    stack = [(root, np.arange(n), 0)]
    while stack:
        node, rows, depth = stack.pop()
        counts = value[node]
        if (np.count_nonzero(counts) < 2 or len(rows) < min_samples_split
                or (max_depth is not None and depth >= max_depth)):
            continue
        Xn = X[rows]
        varying = np.nonzero(Xn.max(axis=0) > Xn.min(axis=0))[0]
        if len(varying) == 0:
            continue
        if max_features is not None and max_features < len(varying):
            varying = np.sort(rng.choice(varying, size=max_features, replace=False))
        if random_splits:
            split = _best_random_split(Xn, onehot[rows], varying, rng)
        else:
            split = _best_exact_split(Xn, onehot[rows], varying)
        if split is None:
            continue
        _, f, thr = split
        go_left = Xn[:, f] <= thr
        if min(go_left.sum(), (~go_left).sum()) < min_samples_leaf:
            continue
        feature[node], threshold[node] = f, thr
        lrows, rrows = rows[go_left], rows[~go_left]
        left[node] = new_node(lrows)
        right[node] = new_node(rrows)
        stack.append((right[node], rrows, depth + 1))
        stack.append((left[node], lrows, depth + 1))
    return Tree(np.array(feature, dtype=np.int64), np.array(threshold),
                np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                np.array(value).reshape(-1, n_classes))


def _resolve_max_features(max_features, d):
    if max_features is None:
        return None
    if max_features == "sqrt":
        return max(1, int(math.sqrt(d)))
    if isinstance(max_features, float):
        return max(1, int(max_features * d))
    return min(int(max_features), d)


def _trees_state(trees):
    sizes = np.array([t.n_nodes for t in trees], dtype=np.int64)
    cat = lambda name: np.concatenate([getattr(t, name) for t in trees])
    return {"tree_sizes": sizes, "feature": cat("feature"), "threshold": cat("threshold"),
            "left": cat("left"), "right": cat("right"), "value": cat("value")}


def _trees_from_state(state):
    bounds = np.concatenate([[0], np.cumsum(state["tree_sizes"])])
    trees = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        trees.append(Tree(*(np.asarray(state[name][a:b]) for name in
                            ("feature", "threshold", "left", "right", "value"))))
    return trees


class DecisionTree:
    kind = "decision_tree"

    def __init__(self, max_depth=None, min_samples_leaf=1, seed=0):
        if max_depth is not None and max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        self.max_depth, self.min_samples_leaf, self.seed = max_depth, min_samples_leaf, seed

    def params(self):
        return {"max_depth": self.max_depth, "min_samples_leaf": self.min_samples_leaf}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        self.n_features = X.shape[1]
        self.tree = build_tree(X, y, self.n_classes, max_depth=self.max_depth,
                               min_samples_leaf=self.min_samples_leaf)
        return self

    def predict_score(self, X):
        return self.tree.predict_proba(check_query(X, self.n_features))

    def get_state(self):
        return _trees_state([self.tree])

    def set_state(self, state):
        (self.tree,) = _trees_from_state(state)


class _Forest:
    bootstrap = True
    random_splits = False

    def __init__(self, n_trees=100, max_features="sqrt", max_depth=None,
                 min_samples_leaf=1, seed=0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        self.n_trees, self.max_features = int(n_trees), max_features
        self.max_depth, self.min_samples_leaf, self.seed = max_depth, min_samples_leaf, seed

    def params(self):
        return {"n_trees": self.n_trees, "max_features": self.max_features,
                "max_depth": self.max_depth, "min_samples_leaf": self.min_samples_leaf}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        n, self.n_features = X.shape
        m = _resolve_max_features(self.max_features, self.n_features)
        self.trees = []
        for rng in child_rngs(self.seed, self.n_trees):
            rows = rng.integers(0, n, n) if self.bootstrap else np.arange(n)
            self.trees.append(build_tree(
                X[rows], y[rows], self.n_classes, max_features=m, max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf, random_splits=self.random_splits,
                rng=rng))
        return self

    def votes(self, X):
        """Per-class count of trees voting for each class, shape (m, K)."""
        X = check_query(X, self.n_features)
        votes = np.zeros((len(X), self.n_classes))
        for tree in self.trees:
            # a tree votes for the lowest-index majority class of its leaf
            pick = np.argmax(tree.value[tree.apply(X)], axis=1)
            votes[np.arange(len(X)), pick] += 1
        return votes

    def predict_score(self, X):
        return self.votes(X) / len(self.trees)

    def get_state(self):
        return _trees_state(self.trees)

    def set_state(self, state):
        self.trees = _trees_from_state(state)


class RandomForest(_Forest):
    kind = "random_forest"


class ExtraTrees(_Forest):
    kind = "extra_trees"
    bootstrap = False
    random_splits = True
