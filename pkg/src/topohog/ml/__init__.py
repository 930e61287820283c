"""The seven classifiers behind one fit / predict / predict_score contract.

>>> spec = ModelSpec("knn", {"k": 3}, seed=0)
>>> model = fit(spec, X_train, y_train)            # doctest: +SKIP
>>> labels = predict(model, X_test)                # doctest: +SKIP

Logistic regression, the SVM and boosting handle more than two classes one
class against the rest; the trees, forests and kNN are natively multi-class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._base import NotFittedError
from .boosting import GradientBoosting
from .linear import LogisticRegression
from .neighbors import KNearestNeighbors
from .svm import KernelSVM
from .tree import DecisionTree, ExtraTrees, RandomForest

MODEL_CLASSES = {
    cls.kind: cls
    for cls in (LogisticRegression, RandomForest, GradientBoosting, KNearestNeighbors,
                DecisionTree, KernelSVM, ExtraTrees)
}
MODEL_KINDS = tuple(MODEL_CLASSES)
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in MODEL_CLASSES:
            raise ValueError(f"unknown model kind {self.kind!r}; choose from {', '.join(MODEL_KINDS)}")

    def build(self):
        try:
            return MODEL_CLASSES[self.kind](**self.hyperparameters, seed=self.seed)
        except TypeError as exc:
            raise ValueError(f"bad hyperparameters for {self.kind}: {exc}") from exc


def fit(spec: ModelSpec, X, y, n_classes=None):
    """Train a fresh model; ``n_classes`` defaults to ``max(y) + 1``."""
    return spec.build().fit(X, y, n_classes)


def _require_fitted(model):
    if getattr(model, "n_features", None) is None:
        raise NotFittedError(f"{model.kind} model has not been fitted")


def predict_score(model, X) -> np.ndarray:
    _require_fitted(model)
    return model.predict_score(X)


def predict(model, X) -> np.ndarray:
    _require_fitted(model)
    # argmax returns the first maximum, i.e. the lowest class index on ties
    return np.argmax(model.predict_score(X), axis=1)


def save_model(model, path) -> None:
    """Write a fitted model as an ``.npz`` archive with a JSON header entry."""
    _require_fitted(model)
    state = model.get_state()
    meta = {
        "format": "topohog-model",
        "version": FORMAT_VERSION,
        "kind": model.kind,
        "hyperparameters": model.params(),
        "seed": model.seed,
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "arrays": sorted(state),
    }
    with open(path, "wb") as fh:
        np.savez(fh, __meta__=np.array(json.dumps(meta, sort_keys=True)), **state)


def load_model(path):
    with np.load(path, allow_pickle=False) as archive:
        meta = json.loads(str(archive["__meta__"]))
        if meta.get("format") != "topohog-model":
            raise ValueError(f"{path}: not a saved model")
        if meta["version"] != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported model format version {meta['version']}")
        state = {name: archive[name] for name in meta["arrays"]}
    model = ModelSpec(meta["kind"], meta["hyperparameters"], meta["seed"]).build()
    model.n_classes, model.n_features = meta["n_classes"], meta["n_features"]
    model.set_state(state)
    return model


__all__ = [
    "MODEL_KINDS", "ModelSpec", "NotFittedError", "fit", "predict", "predict_score", "save_model", "load_model",
    "LogisticRegression", "RandomForest", "GradientBoosting", "KNearestNeighbors",
    "DecisionTree", "KernelSVM", "ExtraTrees",
]
