"""Split-quality criteria for tree induction."""
import numpy as np

from ..errors import EmptyNode, PartitionMismatch


def _proportions(class_counts):
    counts = np.asarray(class_counts, dtype=float)
    total = counts.sum()
    if total < 1:
        raise EmptyNode("impurity of an empty node is undefined")
    return counts / total


def gini_impurity(class_counts) -> float:
    p = _proportions(class_counts)
    return float(1.0 - np.sum(p * p))


def entropy(class_counts) -> float:
    """Shannon entropy in bits, with 0 log 0 taken as 0."""
    p = _proportions(class_counts)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def information_gain(parent_counts, children_counts) -> float:
    parent = np.asarray(parent_counts, dtype=np.int64)
    children = [np.asarray(c, dtype=np.int64) for c in children_counts]
    if not children or any(c.shape != parent.shape for c in children) \
            or not np.array_equal(np.sum(children, axis=0), parent):
        raise PartitionMismatch("children counts do not sum to the parent counts")
    n = parent.sum()
    weighted = sum(c.sum() / n * entropy(c) for c in children if c.sum() > 0)
    # clamp rounding noise; the exact quantity is a mutual information
    return max(0.0, entropy(parent) - weighted)


# Vectorized forms over a batch of count vectors (rows), used by the tree
# builder; every row must have a positive total.

def gini_rows(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=1, keepdims=True)
    p = counts / totals
    return 1.0 - np.sum(p * p, axis=1)


def entropy_rows(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=1, keepdims=True)
    p = counts / totals
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=1)


CRITERIA = {"gini": gini_rows, "info_gain": entropy_rows}
