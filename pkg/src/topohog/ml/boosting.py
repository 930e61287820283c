"""Second-order gradient boosting of regression trees with logistic loss.

Each round fits a tree to the gradient ``g = p - y`` and hessian
``h = p (1 - p)`` of the logistic loss. Splits maximise

    0.5 * (G_L^2 / (H_L + lam) + G_R^2 / (H_R + lam) - G^2 / (H + lam)) - gamma

and leaves take the Newton step ``-G / (H + lam)``. Candidate thresholds come
from per-feature quantile bins computed once per fit.
"""

from __future__ import annotations

import numpy as np

from ._base import check_dataset, check_query, ovr_probabilities
from .linear import _sigmoid
from .tree import LEAF, Tree


def make_bins(X, max_bins=256):
    """Per-feature split candidates and the bin index of every entry.

    Returns ``(codes, edges)``: ``codes[i, f] <= j`` exactly when
    ``X[i, f] <= edges[f][j]``.
    """
    n, d = X.shape
    codes = np.empty((n, d), dtype=np.uint16 if max_bins > 255 else np.uint8)
    edges = []
    for f in range(d):
        col = X[:, f]
        distinct = np.unique(col)
        if len(distinct) <= max_bins:
            e = distinct[:-1] + (distinct[1:] - distinct[:-1]) / 2.0
        else:
            e = np.unique(np.quantile(col, np.linspace(0, 1, max_bins + 1)[1:-1]))
        edges.append(e)
        codes[:, f] = np.searchsorted(e, col, side="left")
    return codes, edges


def newton_leaf_weight(G, H, lam):
    return -G / (H + lam)


def _split_gain(GL, HL, G, H, lam, gamma):
    GR, HR = G - GL, H - HL
    return 0.5 * (GL**2 / (HL + lam) + GR**2 / (HR + lam) - G**2 / (H + lam)) - gamma


def grow_newton_tree(codes, edges, g, h, *, max_depth=6, lam=1.0, gamma=0.0,
                     min_child_weight=1.0):
    """One regression tree on binned features; leaf values are unshrunk weights."""
    n, d = codes.shape
    n_edges = np.array([len(e) for e in edges])
    width = int(n_edges.max()) + 1 if d else 1
    offsets = (np.arange(d) * width)[None, :]
    # a split after bin j is only meaningful when an edge exists there
    usable = np.arange(width)[None, :] < n_edges[:, None]

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(G, H):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(newton_leaf_weight(G, H, lam))
        return len(feature) - 1

    rows = np.arange(n)
    root = new_node(g.sum(), h.sum())
    stack = [(root, rows, 0)]
    while stack:
        node, rows, depth = stack.pop()
        if depth >= max_depth or len(rows) < 2:
            continue
        G, H = g[rows].sum(), h[rows].sum()
        flat = (codes[rows].astype(np.int64) + offsets).ravel()
        size = d * width
        gh = np.bincount(flat, weights=np.repeat(g[rows], d), minlength=size).reshape(d, width)
        hh = np.bincount(flat, weights=np.repeat(h[rows], d), minlength=size).reshape(d, width)
        GL, HL = np.cumsum(gh, axis=1), np.cumsum(hh, axis=1)
        gain = _split_gain(GL, HL, G, H, lam, gamma)
        ok = usable & (HL >= min_child_weight) & (H - HL >= min_child_weight)
        gain = np.where(ok, gain, -np.inf)
        best = int(np.argmax(gain))
        f, j = divmod(best, width)
        if not gain[f, j] > 0:
            continue
        go_left = codes[rows, f] <= j
        lrows, rrows = rows[go_left], rows[~go_left]
        if len(lrows) == 0 or len(rrows) == 0:
            continue
        feature[node], threshold[node] = f, float(edges[f][j])
        left[node] = new_node(g[lrows].sum(), h[lrows].sum())
        right[node] = new_node(g[rrows].sum(), h[rrows].sum())
        stack.append((right[node], rrows, depth + 1))
        stack.append((left[node], lrows, depth + 1))
    return Tree(np.array(feature, dtype=np.int64), np.array(threshold),
                np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                np.array(value, dtype=float).reshape(-1, 1))


def boost_binary(X, codes, edges, y, *, n_trees, learning_rate, base_margin=0.0, **tree_kw):
    """Boosted trees for 0/1 targets; returns the list of unshrunk trees."""
    margin = np.full(len(y), base_margin)
    trees = []
    for _ in range(n_trees):
        p = _sigmoid(margin)
        tree = grow_newton_tree(codes, edges, p - y, p * (1.0 - p), **tree_kw)
        # x <= edges[f][j] iff code <= j, so raw routing matches the binned fit
        margin += learning_rate * tree.value[tree.apply(X), 0]
        trees.append(tree)
    return trees


class GradientBoosting:
    kind = "gradient_boost"

    def __init__(self, n_trees=100, max_depth=6, learning_rate=0.3, lam=1.0, gamma=0.0,
                 min_child_weight=1.0, max_bins=256, seed=0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if lam < 0 or gamma < 0 or min_child_weight < 0:
            raise ValueError("lam, gamma and min_child_weight must be non-negative")
        if max_bins < 2:
            raise ValueError("max_bins must be >= 2")
        self.n_trees, self.max_depth, self.learning_rate = int(n_trees), int(max_depth), learning_rate
        self.lam, self.gamma, self.min_child_weight = lam, gamma, min_child_weight
        self.max_bins, self.seed = int(max_bins), seed

    def params(self):
        return {"n_trees": self.n_trees, "max_depth": self.max_depth,
                "learning_rate": self.learning_rate, "lam": self.lam, "gamma": self.gamma,
                "min_child_weight": self.min_child_weight, "max_bins": self.max_bins}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        self.n_features = X.shape[1]
        codes, edges = make_bins(X, self.max_bins)
        targets = [1] if self.n_classes == 2 else range(self.n_classes)
        self.ensembles = [
            boost_binary(X, codes, edges, (y == k).astype(float), n_trees=self.n_trees,
                         learning_rate=self.learning_rate, max_depth=self.max_depth,
                         lam=self.lam, gamma=self.gamma, min_child_weight=self.min_child_weight)
            for k in targets
        ]
        return self

    def decision_function(self, X):
        X = check_query(X, self.n_features)
        margins = np.zeros((len(X), len(self.ensembles)))
        for k, trees in enumerate(self.ensembles):
            for tree in trees:
                margins[:, k] += self.learning_rate * tree.value[tree.apply(X), 0]
        return margins

    def predict_score(self, X):
        return ovr_probabilities(_sigmoid(self.decision_function(X)))

    def get_state(self):
        trees = [t for ens in self.ensembles for t in ens]
        sizes = np.array([t.n_nodes for t in trees], dtype=np.int64)
        return {
            "n_ensembles": np.array(len(self.ensembles)),
            "tree_sizes": sizes,
            **{name: np.concatenate([getattr(t, name) for t in trees])
               for name in ("feature", "threshold", "left", "right", "value")},
        }

    def set_state(self, state):
        bounds = np.concatenate([[0], np.cumsum(state["tree_sizes"])])
        trees = [Tree(*(np.asarray(state[name][a:b]) for name in
                        ("feature", "threshold", "left", "right", "value")))
                 for a, b in zip(bounds[:-1], bounds[1:])]
        k = int(state["n_ensembles"])
        per = len(trees) // k
        self.ensembles = [trees[i * per:(i + 1) * per] for i in range(k)]
