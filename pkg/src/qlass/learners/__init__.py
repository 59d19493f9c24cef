"""Baseline multiclass classifiers behind one fit/predict surface.

Every fitted model exposes ``predict_proba(X)``, ``predict(X)``,
``n_classes`` and ``size_bytes()``. ``predict`` is the argmax of
``predict_proba`` with ties going to the lowest class index.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .forest import ForestModel, ForestParams, fit_random_forest
from .impurity import entropy, gini_impurity, information_gain
from .naive_bayes import GaussianNBModel, fit_gaussian_nb
from .tree import DecisionTreeModel, TreeParams, fit_decision_tree, node_record_bytes

FAMILIES = ("tree", "forest", "nb")
DISPLAY_NAMES = {"tree": "Decision Tree", "forest": "Random Forest", "nb": "Naive Bayes"}


def default_params(family: str):
    if family == "tree":
        return TreeParams()
    if family == "forest":
        return ForestParams()
    if family == "nb":
        return None
    raise ConfigError(f"unknown learner family {family!r}; choose from {FAMILIES}")


def fit(family: str, X, y, params=None, seed: int = 0, *, n_classes: int | None = None,
        allow_missing_classes: bool = False):
    """Fit a learner of ``family`` ('tree', 'forest' or 'nb')."""
    if params is None:
        params = default_params(family)
    if family == "tree":
        return fit_decision_tree(X, y, params, seed, n_classes=n_classes)
    if family == "forest":
        return fit_random_forest(X, y, params, seed, n_classes=n_classes)
    if family == "nb":
        return fit_gaussian_nb(X, y, params, n_classes=n_classes,
                               allow_missing_classes=allow_missing_classes)
    raise ConfigError(f"unknown learner family {family!r}; choose from {FAMILIES}")


def class_probabilities(model, row) -> np.ndarray:
    return model.predict_proba(np.asarray(row, dtype=float)[None, :])[0]


def predict(model, row) -> int:
    return int(np.argmax(class_probabilities(model, row)))


__all__ = [
    "DISPLAY_NAMES",
    "FAMILIES",
    "DecisionTreeModel",
    "ForestModel",
    "ForestParams",
    "GaussianNBModel",
    "TreeParams",
    "class_probabilities",
    "default_params",
    "entropy",
    "fit",
    "fit_decision_tree",
    "fit_gaussian_nb",
    "fit_random_forest",
    "gini_impurity",
    "information_gain",
    "node_record_bytes",
    "predict",
]
