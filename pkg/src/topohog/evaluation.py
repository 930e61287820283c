"""Stratified k-fold cross-validation and the reported metrics.

Precision, recall and F1 are support-weighted one-vs-rest averages for
multi-class tasks, so weighted recall always equals accuracy. Binary tasks
report the positive (DR, label 1) class instead and add ROC AUC. All metrics
are percentages; fold spread is the sample standard deviation.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import ml

METRICS = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True)
class FoldSplit:
    assignments: np.ndarray
    fold_count: int
    seed: int

    def test_indices(self, fold):
        return np.nonzero(self.assignments == fold)[0]

    def train_indices(self, fold):
        return np.nonzero(self.assignments != fold)[0]


def stratified_folds(labels, k=10, seed=0) -> FoldSplit:
    """Seeded shuffle within each class, then one round-robin over all classes.

    The round-robin pointer carries over from one class to the next, so fold
    sizes differ by at most one overall as well as within every class.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("need at least two folds")
    classes, counts = np.unique(labels, return_counts=True)
    small = classes[counts < k]
    if len(small):
        raise ValueError(f"classes {small.tolist()} have fewer than {k} members")
    rng = np.random.default_rng(seed)
    assignments = np.empty(len(labels), dtype=np.int64)
    pointer = 0
    for c in classes:
        members = np.nonzero(labels == c)[0]
        members = members[rng.permutation(len(members))]
        assignments[members] = (pointer + np.arange(len(members))) % k
        pointer = (pointer + len(members)) % k
    return FoldSplit(assignments, k, seed)


def confusion_matrix(y_true, y_pred, n_classes) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return cm


def _safe_div(a, b):
    return np.divide(a, b, out=np.zeros_like(a, dtype=float), where=b > 0)


def per_class_metrics(cm):
    """Per-class precision, recall and F1 as fractions."""
    cm = np.asarray(cm, dtype=float)
    tp = np.diag(cm)
    precision = _safe_div(tp, cm.sum(axis=0))
    recall = _safe_div(tp, cm.sum(axis=1))
    f1 = _safe_div(2 * precision * recall, precision + recall)
    return precision, recall, f1


def metrics(cm, positive=None) -> dict:
    """Accuracy, precision, recall and F1 in percent.

    With ``positive`` set (binary tasks) the last three describe that class;
    otherwise they are support-weighted averages.
    """
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise ValueError("confusion matrix must be square")
    total = cm.sum()
    if total <= 0:
        raise ValueError("confusion matrix is empty")
    accuracy = np.trace(cm) / total
    precision, recall, f1 = per_class_metrics(cm)
    if positive is not None:
        p, r, f = precision[positive], recall[positive], f1[positive]
    else:
        support = cm.sum(axis=1) / total
        p, f = float(np.dot(support, precision)), float(np.dot(support, f1))
        # support-weighted recall is sum(tp) / total, i.e. accuracy
        r = accuracy
    return {
        "accuracy": 100.0 * accuracy,
        "precision": 100.0 * p,
        "recall": 100.0 * r,
        "f1": 100.0 * f,
    }


def roc_auc(scores, labels):
    """ROC AUC as the Mann-Whitney statistic (ties count one half) and the ROC points.

    Points are ``(fpr, tpr, threshold)`` rows, one per distinct score, from the
    strictest threshold down, preceded by ``(0, 0, inf)``.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC AUC needs both classes")
    order = np.argsort(-scores, kind="stable")
    s, p = scores[order], pos[order]
    last = np.r_[np.nonzero(s[1:] != s[:-1])[0], len(s) - 1]
    tps = np.cumsum(p)[last]
    fps = np.cumsum(~p)[last]
    tpr = np.r_[0.0, tps / n_pos]
    fpr = np.r_[0.0, fps / n_neg]
    # trapezoids on the step curve count tied pairs as one half
    auc = float(np.sum((fpr[1:] - fpr[:-1]) * (tpr[1:] + tpr[:-1]) / 2.0))
    points = np.column_stack([fpr, tpr, np.r_[np.inf, s[last]]])
    return auc, points


@dataclass
class FoldResult:
    fold: int
    confusion: np.ndarray
    metrics: dict
    auc: float | None = None
    roc: np.ndarray | None = None


@dataclass
class MetricsReport:
    model: str
    n_classes: int
    seed: int
    folds: list = field(default_factory=list)

    @property
    def binary(self):
        return self.n_classes == 2

    @property
    def metric_names(self):
        return METRICS + (("auc",) if self.binary else ())

    def fold_values(self, name):
        if name == "auc":
            return np.array([100.0 * f.auc for f in self.folds])
        return np.array([f.metrics[name] for f in self.folds])

    def mean(self, name):
        return float(np.mean(self.fold_values(name)))

    def std(self, name):
        values = self.fold_values(name)
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    def summary(self):
        return {name: (self.mean(name), self.std(name)) for name in self.metric_names}

    def pooled_confusion(self):
        return sum(f.confusion for f in self.folds)


def evaluate_fold(model, X_test, y_test, n_classes, fold=0) -> FoldResult:
    scores = ml.predict_score(model, X_test)
    pred = np.argmax(scores, axis=1)
    cm = confusion_matrix(y_test, pred, n_classes)
    binary = n_classes == 2
    result = FoldResult(fold, cm, metrics(cm, positive=1 if binary else None))
    if binary and len(np.unique(y_test)) == 2:
        result.auc, result.roc = roc_auc(scores[:, 1], y_test)
    elif binary:
        result.auc = float("nan")
    return result


def _run_fold(spec, X, y, n_classes, folds, fold):
    train, test = folds.train_indices(fold), folds.test_indices(fold)
    model = ml.fit(spec, X[train], y[train], n_classes)
    return evaluate_fold(model, X[test], y[test], n_classes, fold)


def cross_validate(spec, X, y, folds: FoldSplit, n_classes=None, n_jobs=1) -> MetricsReport:
    """Fit on the out-of-fold rows and score the held-out fold, for every fold.

    Folds are independent; with ``n_jobs > 1`` they run in worker processes
    without changing any result.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if len(X) != len(y) or len(folds.assignments) != len(y):
        raise ValueError("features, labels and fold assignments disagree in length")
    n_classes = int(y.max()) + 1 if n_classes is None else n_classes
    fold_ids = range(folds.fold_count)
    workers = resolve_jobs(n_jobs)
    if workers == 1:
        results = [_run_fold(spec, X, y, n_classes, folds, f) for f in fold_ids]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(partial(_run_fold, spec, X, y, n_classes, folds), fold_ids))
    return MetricsReport(spec.kind, n_classes, folds.seed, results)


def resolve_jobs(n_jobs):
    """``None`` or a value below 1 means one worker per available CPU."""
    if n_jobs is None or n_jobs < 1:
        return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity")
                   else os.cpu_count() or 1)
    return int(n_jobs)
