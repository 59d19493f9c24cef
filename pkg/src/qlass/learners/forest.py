"""Bagged random forest with per-split feature subsampling."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, EmptyTrainingSet
from .tree import DecisionTreeModel, TreeParams, fit_decision_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 10
    features_per_split: str | int = "sqrt"
    tree: TreeParams = field(default_factory=TreeParams)
    bootstrap: bool = True

    def __post_init__(self):
        if self.n_trees < 1:
            raise ConfigError("n_trees must be positive")
        fps = self.features_per_split
        if not (fps in ("sqrt", "all") or (isinstance(fps, int) and fps >= 1)):
            raise ConfigError(f"features_per_split must be 'sqrt', 'all' or a positive int, got {fps!r}")

    def resolve_features(self, d: int) -> int:
        if self.features_per_split == "sqrt":
            return math.ceil(math.sqrt(d))
        if self.features_per_split == "all":
            return d
        if self.features_per_split > d:
            raise ConfigError(f"features_per_split={self.features_per_split} exceeds {d} features")
        return self.features_per_split


@dataclass
class ForestModel:
    trees: list[DecisionTreeModel]
    n_classes: int

    kind = "forest"

    def votes(self, X) -> np.ndarray:
        """Per-tree predicted class, shape (n_trees, n_rows)."""
        return np.array([t.predict(X) for t in self.trees])

    def predict_proba(self, X) -> np.ndarray:
        votes = self.votes(X)
        fractions = np.zeros((votes.shape[1], self.n_classes))
        for row in votes:
            fractions[np.arange(len(row)), row] += 1.0
        return fractions / len(self.trees)

    def predict(self, X) -> np.ndarray:
        # plurality vote, lowest class index on ties
        return np.argmax(self.predict_proba(X), axis=1)

    @property
    def node_count(self) -> int:
        return sum(t.node_count for t in self.trees)

    def size_bytes(self) -> int:
        return sum(t.size_bytes() for t in self.trees)


def fit_random_forest(X, y, params: ForestParams | None = None, seed: int = 0, *,
                      n_classes: int | None = None) -> ForestModel:
    """Fit ``n_trees`` trees; tree ``i`` draws from a generator seeded with ``seed ^ i``."""
    params = params or ForestParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyTrainingSet("cannot fit a forest on zero rows")
    n, d = X.shape
    k = int(n_classes if n_classes is not None else y.max() + 1)
    m = params.resolve_features(d)
    trees = []
    for i in range(params.n_trees):
        rng = np.random.default_rng(seed ^ i)
        if params.bootstrap:
            idx = rng.integers(0, n, size=n)
            Xi, yi = X[idx], y[idx]
        else:
            Xi, yi = X, y
        trees.append(fit_decision_tree(Xi, yi, params.tree, rng, n_classes=k, max_features=m))
    return ForestModel(trees=trees, n_classes=k)
