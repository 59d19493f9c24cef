import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlass import learners
from qlass.errors import EmptyNode, EmptyTrainingSet, MissingClass, PartitionMismatch
from qlass.learners import (
    ForestParams,
    TreeParams,
    class_probabilities,
    entropy,
    fit_decision_tree,
    fit_gaussian_nb,
    fit_random_forest,
    gini_impurity,
    information_gain,
    predict,
)
from qlass.learners import io as model_io
from qlass.learners.forest import ForestModel


def brute_gini(labels):
    n = len(labels)
    return 1.0 - sum((labels.count(c) / n) ** 2 for c in set(labels))


def brute_best_threshold(x, y):
    """Try every midpoint; return the first threshold with minimal weighted gini."""
    values = sorted(set(x))
    best = (math.inf, None)
    for lo, hi in zip(values, values[1:]):
        t = (lo + hi) / 2
        left = [yi for xi, yi in zip(x, y) if xi <= t]
        right = [yi for xi, yi in zip(x, y) if xi > t]
        score = (len(left) * brute_gini(left) + len(right) * brute_gini(right)) / len(y)
        if score < best[0] - 1e-15:
            best = (score, t)
    return best[1]


def density_ratio_posterior(model, x):
    """Closed-form two-class posterior with math-module densities."""
    def log_joint(c):
        total = math.log(model.class_priors[c])
        for j, xj in enumerate(x):
            m, v = model.means[c, j], model.variances[c, j]
            total += -0.5 * math.log(2 * math.pi * v) - (xj - m) ** 2 / (2 * v)
        return total
    return 1.0 / (1.0 + math.exp(log_joint(1) - log_joint(0)))


# -- impurity ---------------------------------------------------------------------

def test_gini_examples():
    assert gini_impurity([10, 0]) == 0.0
    assert gini_impurity([5, 5]) == 0.5
    assert gini_impurity([1, 2, 3]) == pytest.approx(1 - 14 / 36, abs=1e-12)


def test_gini_empty():
    with pytest.raises(EmptyNode):
        gini_impurity([0, 0])


def test_entropy_and_gain_examples():
    assert entropy([4, 4]) == 1.0
    assert information_gain([4, 4], [[4, 0], [0, 4]]) == 1.0
    assert information_gain([4, 4], [[2, 2], [2, 2]]) == 0.0


def test_gain_partition_mismatch():
    with pytest.raises(PartitionMismatch):
        information_gain([4, 4], [[4, 0], [0, 3]])


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20)), min_size=2, max_size=4))
def test_gain_non_negative(children):
    children = [list(c) for c in children if sum(c) > 0]
    if len(children) < 1:
        return
    parent = np.sum(children, axis=0)
    assert information_gain(parent, children) >= 0.0


# -- tree -------------------------------------------------------------------------

def test_tree_single_split_example():
    x, y = [1.0, 2.0, 9.0, 10.0], [0, 0, 1, 1]
    tree = fit_decision_tree(np.array(x)[:, None], y)
    assert brute_best_threshold(x, y) == 5.5
    assert tree.node_count == 3
    assert tree.feature[0] == 0 and tree.threshold[0] == 5.5
    assert (tree.predict(np.array(x)[:, None]) == y).all()
    assert predict(tree, [1.5]) == 0
    assert predict(tree, [5.5]) == 0  # ties go left
    assert predict(tree, [5.5000001]) == 1


def test_tree_root_split_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(30):
        x = rng.integers(0, 12, size=15).astype(float)
        y = rng.integers(0, 3, size=15)
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        tree = fit_decision_tree(x[:, None], y)
        expected = brute_best_threshold(x.tolist(), y.tolist())
        if expected is None:
            assert tree.node_count == 1
        else:
            assert tree.threshold[0] == expected


def test_tree_pure_root():
    tree = fit_decision_tree(np.arange(5.0)[:, None], [2] * 5, n_classes=3)
    assert tree.node_count == 1 and tree.depth == 0
    assert tree.counts[0].tolist() == [0, 0, 5]


def test_tree_min_samples_split():
    tree = fit_decision_tree(np.arange(4.0)[:, None], [0, 0, 0, 1], TreeParams(min_samples_split=5))
    assert tree.node_count == 1
    assert predict(tree, [3.0]) == 0


def test_tree_leaf_proportions():
    tree = fit_decision_tree(np.zeros((4, 1)), [0, 0, 0, 1])
    np.testing.assert_allclose(class_probabilities(tree, [0.0]), [0.75, 0.25])


def test_tree_max_depth():
    rng = np.random.default_rng(0)
    X, y = rng.normal(size=(200, 3)), rng.integers(0, 3, 200)
    for depth in (1, 2, 4):
        assert fit_decision_tree(X, y, TreeParams(max_depth=depth)).depth <= depth


def test_tree_info_gain_criterion():
    tree = fit_decision_tree(np.array([[1.0], [2.0], [9.0], [10.0]]), [0, 0, 1, 1], TreeParams("info_gain"))
    assert tree.threshold[0] == 5.5


def test_tree_empty():
    with pytest.raises(EmptyTrainingSet):
        fit_decision_tree(np.zeros((0, 2)), [])


def test_tree_split_tie_prefers_lowest_feature():
    X = np.array([[0.0, 0.0], [1.0, 1.0]])
    tree = fit_decision_tree(X, [0, 1])
    assert tree.feature[0] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_tree_fits_distinct_rows_exactly(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 3))
    y = rng.integers(0, 4, 60)
    tree = fit_decision_tree(X, y, n_classes=4)
    assert (tree.predict(X) == y).all()


def test_tree_well_formed():
    rng = np.random.default_rng(3)
    tree = fit_decision_tree(rng.normal(size=(100, 2)), rng.integers(0, 2, 100))
    children = [c for c in np.concatenate([tree.left, tree.right]) if c >= 0]
    assert sorted(children) == list(range(1, tree.node_count))
    leaves = tree.feature == -1
    assert (tree.counts[leaves].sum(axis=1) >= 1).all()


# -- forest -----------------------------------------------------------------------

def test_forest_reduces_to_tree():
    rng = np.random.default_rng(2)
    X, y = rng.normal(size=(150, 4)), rng.integers(0, 3, 150)
    tree = fit_decision_tree(X, y, n_classes=3)
    forest = fit_random_forest(X, y, ForestParams(n_trees=1, features_per_split="all", bootstrap=False), 7)
    rows = rng.normal(size=(300, 4))
    assert np.array_equal(forest.predict(rows), tree.predict(rows))


def test_forest_deterministic():
    rng = np.random.default_rng(4)
    X, y = rng.normal(size=(100, 5)), rng.integers(0, 3, 100)
    a = fit_random_forest(X, y, seed=11)
    b = fit_random_forest(X, y, seed=11)
    assert model_io.model_to_dict(a) == model_io.model_to_dict(b)
    c = fit_random_forest(X, y, seed=12)
    assert model_io.model_to_dict(a) != model_io.model_to_dict(c)


def test_forest_sqrt_features():
    assert ForestParams().resolve_features(4) == 2
    assert ForestParams().resolve_features(5) == 3
    assert ForestParams(features_per_split=3).resolve_features(4) == 3


class _Const:
    def __init__(self, c):
        self.c = c

    def predict(self, X):
        return np.full(len(np.atleast_2d(X)), self.c)


def test_forest_votes():
    forest = ForestModel([_Const(0), _Const(0), _Const(1)], n_classes=2)
    np.testing.assert_allclose(class_probabilities(forest, [0.0]), [2 / 3, 1 / 3])
    assert predict(forest, [0.0]) == 0
    assert predict(ForestModel([_Const(0), _Const(1)], 2), [0.0]) == 0


def test_forest_not_worse_than_tree(separable):
    forest_acc, tree_acc = [], []
    for seed in range(5):
        sp = separable(seed)
        tree = fit_decision_tree(sp.train.features, sp.train.labels, n_classes=4)
        forest = fit_random_forest(sp.train.features, sp.train.labels, seed=seed, n_classes=4)
        tree_acc.append((tree.predict(sp.test.features) == sp.test.labels).mean())
        forest_acc.append((forest.predict(sp.test.features) == sp.test.labels).mean())
    assert np.median(forest_acc) >= np.median(tree_acc) - 0.02


# -- naive Bayes ------------------------------------------------------------------

def test_nb_hand_example():
    X = np.array([[0.0], [2.0], [10.0], [12.0]])
    model = fit_gaussian_nb(X, [0, 0, 1, 1])
    np.testing.assert_allclose(model.means[:, 0], [1.0, 11.0])
    np.testing.assert_allclose(model.variances[:, 0], [1.0, 1.0])
    np.testing.assert_allclose(model.class_priors, [0.5, 0.5])
    assert class_probabilities(model, [1.0])[0] > 0.99


def test_nb_variance_floor():
    model = fit_gaussian_nb(np.array([[0.0], [4.0]]), [0, 1])
    assert model.var_smoothing == pytest.approx(1e-9 * 4.0)
    assert model.variances.tolist() == [[model.var_smoothing], [model.var_smoothing]]


def test_nb_priors():
    model = fit_gaussian_nb(np.array([[0.0], [1.0], [2.0], [9.0]]), [0, 0, 0, 1])
    assert model.class_priors.tolist() == [0.75, 0.25]


def test_nb_missing_class():
    with pytest.raises(MissingClass):
        fit_gaussian_nb(np.zeros((3, 1)), [0, 0, 2], n_classes=3)
    model = fit_gaussian_nb(np.array([[0.0], [1.0], [5.0]]), [0, 0, 2], n_classes=3, allow_missing_classes=True)
    assert class_probabilities(model, [0.5])[1] == 0.0


def test_nb_symmetric_midpoint():
    model = fit_gaussian_nb(np.array([[-2.0], [-1.0], [1.0], [2.0]]), [0, 0, 1, 1])
    np.testing.assert_allclose(class_probabilities(model, [0.0]), [0.5, 0.5], atol=1e-12)


def test_nb_matches_density_ratio():
    rng = np.random.default_rng(8)
    for _ in range(200):
        X = rng.normal(size=(20, 3)) * rng.uniform(0.5, 2, size=3)
        y = np.array([0] * 10 + [1] * 10)
        X[y == 1] += rng.normal(size=3)
        model = fit_gaussian_nb(X, y)
        x = rng.normal(size=3)
        assert abs(class_probabilities(model, x)[0] - density_ratio_posterior(model, x)) < 1e-9


def test_nb_zero_separation_is_chance():
    from qlass.data import generate_synthetic, prepare
    sp = prepare(generate_synthetic(4000, 2, 4, 0.0, 3), ratio=0.8, seed=3)
    model = fit_gaussian_nb(sp.train.features, sp.train.labels)
    acc = (model.predict(sp.test.features) == sp.test.labels).mean()
    assert abs(acc - 0.25) < 0.06


# -- shared interface -------------------------------------------------------------

@pytest.mark.parametrize("family", learners.FAMILIES)
def test_probabilities_normalized_and_argmax(family):
    rng = np.random.default_rng(10)
    X, y = rng.normal(size=(120, 3)), rng.integers(0, 4, 120)
    model = learners.fit(family, X, y, seed=1, n_classes=4)
    rows = rng.normal(size=(1000, 3)) * 3
    p = model.predict_proba(rows)
    assert np.all(p >= 0)
    assert np.abs(p.sum(axis=1) - 1).max() <= 1e-9
    assert np.array_equal(model.predict(rows), np.argmax(p, axis=1))


@pytest.mark.parametrize("family", learners.FAMILIES)
def test_baselines_on_separable(family, separable):
    accs = []
    for seed in range(5):
        sp = separable(seed)
        model = learners.fit(family, sp.train.features, sp.train.labels, seed=seed, n_classes=4)
        accs.append((model.predict(sp.test.features) == sp.test.labels).mean())
    assert np.median(accs) >= 0.95


@pytest.mark.parametrize("family", learners.FAMILIES)
def test_serialization_round_trip(family, tmp_path):
    rng = np.random.default_rng(12)
    X, y = rng.normal(size=(80, 3)), rng.integers(0, 3, 80)
    model = learners.fit(family, X, y, seed=2, n_classes=3)
    path = tmp_path / "m.json"
    model_io.save_model(model, path, family=family, params=learners.default_params(family))
    back = model_io.load_model(path)
    rows = rng.normal(size=(200, 3))
    assert np.array_equal(back.predict_proba(rows), model.predict_proba(rows))
    doc = model_io.load(path)
    assert doc["format_version"] == 1 and doc["model"]["kind"] == family
    assert model_io.params_from_dict(family, doc["params"]) == learners.default_params(family)
