"""RBF-kernel SVM trained with kernelised Pegasos.

Pegasos minimises ``lam/2 ||w||^2 + mean(hinge)`` by stochastic subgradient
steps; with ``lam = 1 / (n C)`` this is the soft-margin primal divided by
``n C``. The bias is absorbed by adding a constant 1 to the kernel. The result
approximates the exact dual solution rather than reproducing it.
"""

from __future__ import annotations

import numpy as np

from ._base import Standardizer, check_dataset, check_query, child_rngs


def rbf_kernel(A, B, gamma):
    sq = np.einsum("ij,ij->i", A, A)[:, None] + np.einsum("ij,ij->i", B, B)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def pegasos_kernel(K, y, lam, n_iter, rng):
    """Support counts ``alpha`` for labels ``y`` in {-1, +1}.

    The decision value of training row i after ``t`` steps is
    ``sum_j alpha_j y_j K[j, i] / (lam t)``.
    """
    n = len(y)
    alpha = np.zeros(n)
    # running K @ (alpha * y), updated one column at a time
    acc = np.zeros(n)
    picks = rng.integers(0, n, n_iter)
    for t, i in enumerate(picks, start=1):
        if y[i] * acc[i] / (lam * t) < 1.0:
            alpha[i] += 1.0
            acc += y[i] * K[:, i]
    return alpha


class KernelSVM:
    kind = "svm"

    def __init__(self, C=1.0, gamma="scale", n_iter=None, seed=0):
        if C <= 0:
            raise ValueError("C must be positive")
        if gamma != "scale" and not gamma > 0:
            raise ValueError("gamma must be positive or 'scale'")
        if n_iter is not None and n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        self.C, self.gamma, self.n_iter, self.seed = C, gamma, n_iter, seed

    def params(self):
        return {"C": self.C, "gamma": self.gamma, "n_iter": self.n_iter}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        n, self.n_features = X.shape
        self.scaler = Standardizer().fit(X)
        Z = self.scaler.transform(X)
        if self.gamma == "scale":
            var = Z.var()
            self.gamma_ = 1.0 / (self.n_features * var) if var > 0 else 1.0
        else:
            self.gamma_ = float(self.gamma)
        K = rbf_kernel(Z, Z, self.gamma_) + 1.0
        lam = 1.0 / (n * self.C)
        n_iter = self.n_iter or max(2000, 20 * n)
        targets = [1] if self.n_classes == 2 else range(self.n_classes)
        rngs = child_rngs(self.seed, len(targets))
        coefs = []
        for k, rng in zip(targets, rngs):
            signs = np.where(y == k, 1.0, -1.0)
            alpha = pegasos_kernel(K, signs, lam, n_iter, rng)
            coefs.append(alpha * signs / (lam * n_iter))
        support = np.nonzero(np.any(np.array(coefs) != 0, axis=0))[0]
        self.support_vectors = Z[support]
        self.dual_coef = np.array(coefs)[:, support]
        return self

    def decision_function(self, X):
        X = check_query(X, self.n_features)
        K = rbf_kernel(self.scaler.transform(X), self.support_vectors, self.gamma_) + 1.0
        return K @ self.dual_coef.T

    def predict_score(self, X):
        """Signed margins; for two classes the columns are ``(-m, m)``."""
        m = self.decision_function(X)
        if m.shape[1] == 1:
            return np.column_stack([-m[:, 0], m[:, 0]])
        return m

    def get_state(self):
        return {"support_vectors": self.support_vectors, "dual_coef": self.dual_coef,
                "gamma_": np.array(self.gamma_), "mean": self.scaler.mean,
                "scale": self.scaler.scale}

    def set_state(self, state):
        self.support_vectors = np.asarray(state["support_vectors"])
        self.dual_coef = np.asarray(state["dual_coef"])
        self.gamma_ = float(state["gamma_"])
        self.scaler = Standardizer(state["mean"], state["scale"])
