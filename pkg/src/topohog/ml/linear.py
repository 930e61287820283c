"""L2-regularised logistic regression trained by batch gradient descent."""

from __future__ import annotations

import numpy as np

from ._base import Standardizer, check_dataset, check_query, ovr_probabilities


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(w, b, X, y, lam):
    """Mean cross-entropy plus ``lam * ||w||^2``; ``y`` holds 0/1 targets."""
    z = X @ w + b
    # log(1 + e^z) - y z, written to stay finite for large |z|
    ce = np.logaddexp(0.0, z) - y * z
    return ce.mean() + lam * np.dot(w, w)


def logistic_grad(w, b, X, y, lam):
    p = _sigmoid(X @ w + b)
    r = (p - y) / len(y)
    return X.T @ r + 2.0 * lam * w, r.sum()


def fit_binary_logistic(X, y, lam, max_iter=1000, tol=1e-6):
    """Gradient descent with step halving until the loss decreases.

    Stops when the relative loss change drops below ``tol`` or after
    ``max_iter`` accepted steps.
    """
    w = np.zeros(X.shape[1])
    b = 0.0
    loss = logistic_loss(w, b, X, y, lam)
    step = 1.0
    for _ in range(max_iter):
        gw, gb = logistic_grad(w, b, X, y, lam)
        gnorm2 = np.dot(gw, gw) + gb * gb
        if gnorm2 < tol**2:
            break
        while True:
            w_new, b_new = w - step * gw, b - step * gb
            new_loss = logistic_loss(w_new, b_new, X, y, lam)
            if new_loss <= loss - 0.5 * step * gnorm2 or step < 1e-12:
                break
            step *= 0.5
        done = abs(loss - new_loss) <= tol * max(1.0, abs(loss))
        w, b, loss = w_new, b_new, new_loss
        step *= 2.0
        if done:
            break
    return w, b


class LogisticRegression:
    kind = "logistic"

    def __init__(self, C=1.0, max_iter=1000, tol=1e-6, seed=0):
        if C <= 0:
            raise ValueError("C must be positive")
        if max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        self.C, self.max_iter, self.tol, self.seed = C, int(max_iter), tol, seed

    def params(self):
        return {"C": self.C, "max_iter": self.max_iter, "tol": self.tol}

    def fit(self, X, y, n_classes=None):
        X, y, self.n_classes = check_dataset(X, y, n_classes)
        self.n_features = X.shape[1]
        self.scaler = Standardizer().fit(X)
        Z = self.scaler.transform(X)
        lam = 1.0 / (len(y) * self.C)
        targets = [1] if self.n_classes == 2 else range(self.n_classes)
        fitted = [fit_binary_logistic(Z, (y == k).astype(float), lam, self.max_iter, self.tol)
                  for k in targets]
        self.coef = np.array([w for w, _ in fitted])
        self.intercept = np.array([b for _, b in fitted])
        return self

    def decision_function(self, X):
        X = check_query(X, self.n_features)
        return self.scaler.transform(X) @ self.coef.T + self.intercept

    def predict_score(self, X):
        return ovr_probabilities(_sigmoid(self.decision_function(X)))

    def get_state(self):
        return {"coef": self.coef, "intercept": self.intercept,
                "mean": self.scaler.mean, "scale": self.scaler.scale}

    def set_state(self, state):
        self.coef, self.intercept = state["coef"], state["intercept"]
        self.scaler = Standardizer(state["mean"], state["scale"])
