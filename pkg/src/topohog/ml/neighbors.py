from __future__ import annotations

import numpy as np

from ._base import check_dataset, check_query

_QUERY_BLOCK = 512


class KNearestNeighbors:
    """Majority vote among the ``k`` closest training rows (Euclidean).

    Equidistant neighbours are ordered by training-row index.
    """

    kind = "knn"

    def __init__(self, k=5, seed=0):
        if int(k) < 1:
            raise ValueError("k must be >= 1")
        self.k, self.seed = int(k), seed

    def params(self):
        return {"k": self.k}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        if self.k > len(X):
            raise ValueError(f"k={self.k} exceeds the {len(X)} training rows")
        self.n_features = X.shape[1]
        self.X, self.y = X, y
        return self

    def neighbors(self, X):
        X = check_query(X, self.n_features)
        sq_train = np.einsum("ij,ij->i", self.X, self.X)
        out = np.empty((len(X), self.k), dtype=np.int64)
        for start in range(0, len(X), _QUERY_BLOCK):
            Q = X[start:start + _QUERY_BLOCK]
            d2 = np.einsum("ij,ij->i", Q, Q)[:, None] + sq_train[None, :] - 2.0 * Q @ self.X.T
            np.maximum(d2, 0.0, out=d2)
            out[start:start + len(Q)] = np.argsort(d2, axis=1, kind="stable")[:, :self.k]
        return out

    def predict_score(self, X):
        labels = self.y[self.neighbors(X)]
        scores = np.zeros((len(labels), self.n_classes))
        for c in range(self.n_classes):
            scores[:, c] = np.mean(labels == c, axis=1)
        return scores

    def get_state(self):
        return {"X": self.X, "y": self.y}

    def set_state(self, state):
        self.X, self.y = np.asarray(state["X"]), np.asarray(state["y"])
