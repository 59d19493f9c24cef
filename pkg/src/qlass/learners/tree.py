"""CART-style decision tree classifier with axis-aligned binary splits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, EmptyTrainingSet
from .impurity import CRITERIA

LEAF = -1
_MIN_DECREASE = 1e-12


@dataclass(frozen=True)
class TreeParams:
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_split: int = 2

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ConfigError(f"unknown criterion {self.criterion!r}; choose from {sorted(CRITERIA)}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError("max_depth must be a positive integer")
        if self.min_samples_split < 2:
            raise ConfigError("min_samples_split must be at least 2")


@dataclass
class DecisionTreeModel:
    """Flat-array tree. Node 0 is the root; leaves have ``feature == -1``.

    Every node (internal or leaf) stores the class counts of the training
    rows that reached it.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    n_classes: int
    n_features: int

    kind = "tree"

    @property
    def node_count(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.node_count, dtype=np.int64)
        for node in range(self.node_count):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def leaves(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] != LEAF
        return node

    def predict_proba(self, X) -> np.ndarray:
        counts = self.counts[self.leaves(X)].astype(float)
        return counts / counts.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def size_bytes(self) -> int:
        return self.node_count * node_record_bytes(self.n_classes)


def node_record_bytes(n_classes: int) -> int:
    # feature, threshold, left, right + one count per class, 8 bytes each
    return 8 * (4 + n_classes)


def _best_split(X, y_onehot, idx, features, impurity, parent_impurity):
    """Return (decrease, feature, threshold) of the best split of ``idx``.

    Candidates are midpoints between consecutive distinct values. Ties keep
    the earliest candidate: lowest feature index, then lowest threshold.
    """
    n = len(idx)
    best = (_MIN_DECREASE, None, None)
    for f in features:
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cuts = np.flatnonzero(xs[:-1] < xs[1:])
        if len(cuts) == 0:
            continue
        cumulative = np.cumsum(y_onehot[idx[order]], axis=0)
        left = cumulative[cuts]
        right = cumulative[-1] - left
        n_left = (cuts + 1).astype(float)
        child = (n_left * impurity(left) + (n - n_left) * impurity(right)) / n
        decrease = parent_impurity - child
        i = int(np.argmax(decrease))
        if decrease[i] > best[0]:
            lo, hi = xs[cuts[i]], xs[cuts[i] + 1]
            threshold = (lo + hi) / 2.0
            if threshold >= hi:
                threshold = lo
            best = (float(decrease[i]), int(f), float(threshold))
    return best


def fit_decision_tree(X, y, params: TreeParams | None = None, seed=0, *,
                      n_classes: int | None = None, max_features: int | None = None) -> DecisionTreeModel:
    """Grow a tree by greedy recursive splitting.

    ``max_features`` draws that many candidate features per split (random
    forest mode); ``seed`` may be an int or a ``numpy.random.Generator`` and
    is only consumed in that mode.
    """
    params = params or TreeParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyTrainingSet("cannot fit a tree on zero rows")
    n, d = X.shape
    k = int(n_classes if n_classes is not None else y.max() + 1)
    impurity = CRITERIA[params.criterion]
    onehot = np.zeros((n, k))
    onehot[np.arange(n), y] = 1.0
    subsample = max_features is not None and max_features < d
    rng = np.random.default_rng(seed) if subsample else None

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(node_counts):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        counts.append(node_counts)
        return len(feature) - 1

    root = new_node(np.bincount(y, minlength=k))
    stack = [(root, np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        node_counts = counts[node]
        if (np.count_nonzero(node_counts) <= 1 or len(idx) < params.min_samples_split
                or (params.max_depth is not None and depth >= params.max_depth)):
            continue
        if subsample:
            features = np.sort(rng.choice(d, size=max_features, replace=False))
        else:
            features = range(d)
        parent = impurity(node_counts[None, :].astype(float))[0]
        _, f, t = _best_split(X, onehot, idx, features, impurity, parent)
        if f is None:
            continue
        mask = X[idx, f] <= t
        li, ri = idx[mask], idx[~mask]
        ln = new_node(np.bincount(y[li], minlength=k))
        rn = new_node(np.bincount(y[ri], minlength=k))
        feature[node], threshold[node], left[node], right[node] = f, t, ln, rn
        # right pushed first so the left subtree is expanded first
        stack.append((rn, ri, depth + 1))
        stack.append((ln, li, depth + 1))

    return DecisionTreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        counts=np.array(counts, dtype=np.int64).reshape(-1, k),
        n_classes=k,
        n_features=d,
    )
