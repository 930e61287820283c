import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import auc_pairs
from topohog import ml
from topohog.evaluation import (
    FoldSplit,
    confusion_matrix,
    cross_validate,
    metrics,
    roc_auc,
    stratified_folds,
)
from topohog.ml import ModelSpec

APTOS_COUNTS = (1805, 370, 999, 193, 295)


def grades_with_counts(counts):
    return np.repeat(np.arange(len(counts)), counts)


def test_aptos_fold_sizes():
    labels = grades_with_counts(APTOS_COUNTS)
    folds = stratified_folds(labels, 10, seed=0)
    sizes = np.bincount(folds.assignments, minlength=10)
    assert sizes.sum() == 3662
    assert set(sizes) <= {366, 367}
    for c, total in enumerate(APTOS_COUNTS):
        per_fold = np.bincount(folds.assignments[labels == c], minlength=10)
        assert per_fold.max() - per_fold.min() <= 1
        assert set(per_fold) <= {total // 10, total // 10 + 1}


def test_binary_split_class_counts():
    labels = np.r_[np.zeros(1805, int), np.ones(1857, int)]
    for seed in range(5):
        folds = stratified_folds(labels, 10, seed=seed)
        zeros = np.bincount(folds.assignments[labels == 0], minlength=10)
        assert set(zeros) <= {180, 181}
        assert set(np.bincount(folds.assignments, minlength=10)) <= {366, 367}


def test_one_class_ten_samples():
    folds = stratified_folds(np.zeros(10, int), 10)
    assert sorted(folds.assignments.tolist()) == list(range(10))


def test_small_class_rejected():
    with pytest.raises(ValueError):
        stratified_folds(np.r_[np.zeros(20, int), np.ones(9, int)], 10)
    with pytest.raises(ValueError):
        stratified_folds(np.zeros(10, int), 1)


@given(st.lists(st.integers(0, 3), min_size=12, max_size=80), st.integers(2, 4), st.integers(0, 99))
@settings(max_examples=60, deadline=None)
def test_folds_partition(labels, k, seed):
    labels = np.array(labels)
    _, counts = np.unique(labels, return_counts=True)
    if counts.min() < k:
        with pytest.raises(ValueError):
            stratified_folds(labels, k, seed)
        return
    folds = stratified_folds(labels, k, seed)
    seen = np.concatenate([folds.test_indices(f) for f in range(k)])
    assert sorted(seen.tolist()) == list(range(len(labels)))
    for f in range(k):
        assert not set(folds.test_indices(f)) & set(folds.train_indices(f))
    assert np.array_equal(stratified_folds(labels, k, seed).assignments, folds.assignments)


def test_metrics_diagonal():
    m = metrics(np.diag([3, 5, 7]))
    assert all(v == 100 for v in m.values())
    m = metrics(np.array([[50, 0], [0, 50]]), positive=1)
    assert all(v == 100 for v in m.values())


def test_metrics_hand_computed():
    m = metrics(np.array([[40, 10], [5, 45]]), positive=1)
    assert m["accuracy"] == pytest.approx(85)
    assert m["precision"] == pytest.approx(100 * 45 / 55)
    assert m["recall"] == pytest.approx(100 * 45 / 50)
    p, r = 45 / 55, 45 / 50
    assert m["f1"] == pytest.approx(100 * 2 * p * r / (p + r))


def test_metrics_errors():
    with pytest.raises(ValueError):
        metrics(np.zeros((2, 2), int))
    with pytest.raises(ValueError):
        metrics(np.zeros((2, 3), int))


def test_weighted_recall_is_accuracy(rng):
    for _ in range(100):
        k = rng.integers(2, 6)
        cm = rng.integers(0, 30, (k, k))
        cm[0, 0] += 1
        m = metrics(cm)
        assert m["recall"] == m["accuracy"]


def test_pooled_accuracy_identity(rng):
    cms = [rng.integers(0, 10, (3, 3)) + np.eye(3, dtype=int) for _ in range(5)]
    pooled = metrics(sum(cms))["accuracy"]
    weights = np.array([cm.sum() for cm in cms])
    accs = np.array([metrics(cm)["accuracy"] for cm in cms])
    assert pooled == pytest.approx(np.dot(weights, accs) / weights.sum(), abs=1e-9)


def test_confusion_matrix_counts():
    cm = confusion_matrix([0, 1, 1, 2], [0, 2, 1, 2], 3)
    assert cm.tolist() == [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    assert cm.sum() == 4


def test_auc_perfect_and_ties():
    assert roc_auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])[0] == 1.0
    assert roc_auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1])[0] == 0.0
    assert roc_auc([0.5] * 6, [0, 1, 0, 1, 1, 0])[0] == 0.5


def test_auc_roc_points():
    auc, points = roc_auc([0.9, 0.4, 0.4, 0.1], [1, 1, 0, 0])
    assert points[0].tolist() == [0, 0, np.inf]
    assert points[-1, :2].tolist() == [1, 1]
    assert np.all(np.diff(points[:, 0]) >= 0) and np.all(np.diff(points[:, 1]) >= 0)
    assert auc == pytest.approx(0.875)


def test_auc_matches_pair_oracle(rng):
    for _ in range(200):
        n = rng.integers(2, 40)
        labels = rng.integers(0, 2, n)
        labels[:2] = [0, 1]
        scores = rng.integers(0, 8, n) / 7.0
        assert abs(roc_auc(scores, labels)[0] - auc_pairs(scores, labels)) < 1e-12


def test_auc_monotone_invariance(rng):
    scores = rng.normal(size=50)
    labels = rng.integers(0, 2, 50)
    labels[:2] = [0, 1]
    base = roc_auc(scores, labels)[0]
    assert roc_auc(np.exp(scores), labels)[0] == base
    assert roc_auc(3 * scores + 7, labels)[0] == base


def test_auc_single_class():
    with pytest.raises(ValueError):
        roc_auc([0.1, 0.2], [1, 1])


class AlwaysZero:
    kind = "always_zero"

    def __init__(self, seed=0):
        self.seed = seed

    def fit(self, X, y, n_classes=None):
        self.n_features, self.n_classes = X.shape[1], n_classes
        return self

    def predict_score(self, X):
        scores = np.zeros((len(X), self.n_classes))
        scores[:, 0] = 1
        return scores


class MeanSpy:
    """Records the column means seen at fit time."""

    kind = "mean_spy"
    seen = []

    def __init__(self, seed=0):
        self.seed = seed

    def fit(self, X, y, n_classes=None):
        MeanSpy.seen.append(X.mean(axis=0))
        self.n_features, self.n_classes = X.shape[1], n_classes
        return self

    def predict_score(self, X):
        return np.full((len(X), self.n_classes), 1.0 / self.n_classes)


@pytest.fixture
def stub_models(monkeypatch):
    monkeypatch.setitem(ml.MODEL_CLASSES, "always_zero", AlwaysZero)
    monkeypatch.setitem(ml.MODEL_CLASSES, "mean_spy", MeanSpy)


def test_always_zero_is_fifty_percent(stub_models, rng):
    y = np.tile([0, 1], 50)
    X = rng.normal(size=(100, 2))
    report = cross_validate(ModelSpec("always_zero"), X, y, stratified_folds(y, 10))
    assert report.mean("accuracy") == 50.0
    assert report.std("accuracy") == 0.0
    assert report.mean("auc") == 50.0


def test_two_fold_trace():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    y = np.array([0, 0, 1, 1])
    folds = FoldSplit(np.array([0, 1, 0, 1]), 2, seed=0)
    spec = ModelSpec("knn", {"k": 1})
    report = cross_validate(spec, X, y, folds)
    for f, result in enumerate(report.folds):
        train, test = folds.train_indices(f), folds.test_indices(f)
        model = ml.fit(spec, X[train], y[train], 2)
        pred = ml.predict(model, X[test])
        assert np.array_equal(result.confusion, confusion_matrix(y[test], pred, 2))
    assert report.mean("accuracy") == 100.0


def test_no_test_leakage(stub_models, rng):
    y = np.tile([0, 1], 20)
    X = rng.normal(size=(40, 3))
    folds = stratified_folds(y, 4, seed=1)
    poisoned = X.copy()
    poisoned[folds.test_indices(2)] = 1e9
    MeanSpy.seen = []
    cross_validate(ModelSpec("mean_spy"), X, y, folds)
    clean = MeanSpy.seen[2]
    MeanSpy.seen = []
    cross_validate(ModelSpec("mean_spy"), poisoned, y, folds)
    assert np.array_equal(MeanSpy.seen[2], clean)


def test_report_aggregates(rng):
    X = np.r_[rng.normal(0, 1, (40, 2)), rng.normal(1.2, 1, (40, 2))]
    y = np.repeat([0, 1], 40)
    report = cross_validate(ModelSpec("knn", {"k": 3}), X, y, stratified_folds(y, 5, seed=2))
    assert report.metric_names == ("accuracy", "precision", "recall", "f1", "auc")
    for name in report.metric_names:
        values = report.fold_values(name)
        assert np.all((values >= 0) & (values <= 100))
        assert abs(report.mean(name) - values.sum() / len(values)) < 1e-9
        assert report.std(name) == pytest.approx(np.std(values, ddof=1))
    assert report.pooled_confusion().sum() == 80


def test_multiclass_report_has_no_auc(rng):
    X = rng.normal(size=(60, 2))
    y = np.arange(60) % 3
    report = cross_validate(ModelSpec("knn", {"k": 3}), X, y, stratified_folds(y, 3))
    assert "auc" not in report.metric_names
    for f in report.folds:
        assert f.metrics["recall"] == f.metrics["accuracy"]


def test_parallel_matches_serial(rng):
    X = rng.normal(size=(60, 3))
    y = (X[:, 0] > 0).astype(int)
    folds = stratified_folds(y, 3, seed=4)
    spec = ModelSpec("random_forest", {"n_trees": 5}, seed=9)
    a = cross_validate(spec, X, y, folds, n_jobs=1)
    b = cross_validate(spec, X, y, folds, n_jobs=2)
    for fa, fb in zip(a.folds, b.folds):
        assert np.array_equal(fa.confusion, fb.confusion)
        assert fa.auc == fb.auc


def test_length_mismatch():
    folds = stratified_folds(np.tile([0, 1], 5), 2)
    with pytest.raises(ValueError):
        cross_validate(ModelSpec("knn"), np.zeros((9, 2)), np.tile([0, 1], 5)[:9], folds)
