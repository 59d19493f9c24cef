import numpy as np
import pytest

from qlass.errors import LabelOutOfRange, LengthMismatch
from qlass.metrics import (
    ConfusionMatrix,
    Metrics,
    accuracy,
    build_comparison,
    compute_metrics,
    confusion_matrix,
    macro_precision,
    macro_recall,
    round_half_up,
)


def brute_metrics(y_true, y_pred, k):
    """Counting oracle written with plain loops."""
    n = len(y_true)
    cm = [[sum(1 for t, p in zip(y_true, y_pred) if t == i and p == j) for j in range(k)] for i in range(k)]
    acc = sum(1 for t, p in zip(y_true, y_pred) if t == p) / n
    recalls, precisions = [], []
    for c in range(k):
        actual = sum(1 for t in y_true if t == c)
        predicted = sum(1 for p in y_pred if p == c)
        hits = sum(1 for t, p in zip(y_true, y_pred) if t == p == c)
        recalls.append(hits / actual if actual else 0.0)
        precisions.append(hits / predicted if predicted else 0.0)
    return cm, acc, sum(recalls) / k, sum(precisions) / k


def test_confusion_examples():
    assert confusion_matrix([0, 1], [0, 1], 2).counts.tolist() == [[1, 0], [0, 1]]
    assert confusion_matrix([0, 0, 1], [1, 0, 1], 2).counts.tolist() == [[1, 1], [0, 1]]
    cm = confusion_matrix([0, 1, 2, 1], [0, 0, 0, 0], 3)
    assert cm.counts[:, 1:].sum() == 0


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion_matrix([0, 1], [0], 2)
    with pytest.raises(LabelOutOfRange):
        confusion_matrix([0, 2], [0, 1], 2)


def test_hand_example():
    cm = ConfusionMatrix(np.array([[1, 1], [0, 1]]))
    assert accuracy(cm) == pytest.approx(2 / 3)
    assert macro_recall(cm) == pytest.approx(0.75)
    assert macro_precision(cm) == pytest.approx(0.75)


def test_perfect_diagonal():
    m = compute_metrics([0, 1, 2], [0, 1, 2], 3)
    assert (m.accuracy, m.recall, m.precision) == (1.0, 1.0, 1.0)


def test_zero_prediction_class_contributes_zero():
    cm = confusion_matrix([0, 1], [0, 0], 2)
    # class 1 is never predicted: precision terms are [0.5, 0]
    assert macro_precision(cm) == 0.25


def test_micro_average_equals_accuracy():
    m = compute_metrics([0, 1, 1, 2], [0, 2, 1, 2], 3, average="micro")
    assert m.recall == m.precision == m.accuracy == 0.75


def test_brute_force_fuzz():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(2, 6))
        n = int(rng.integers(1, 40))
        y_true, y_pred = rng.integers(0, k, n).tolist(), rng.integers(0, k, n).tolist()
        m = compute_metrics(y_true, y_pred, k)
        cm, acc, rec, prec = brute_metrics(y_true, y_pred, k)
        assert m.confusion.counts.tolist() == cm
        assert m.accuracy == acc
        assert m.accuracy == np.mean(np.array(y_true) == np.array(y_pred))
        assert m.recall == pytest.approx(rec, abs=1e-15)
        assert m.precision == pytest.approx(prec, abs=1e-15)
        assert np.trace(m.confusion.counts) <= m.confusion.total
        assert all(0 <= c.recall <= 1 and 0 <= c.precision <= 1 for c in m.per_class)


def test_order_and_relabeling_invariance():
    rng = np.random.default_rng(1)
    for _ in range(200):
        k, n = 4, 30
        y_true, y_pred = rng.integers(0, k, n), rng.integers(0, k, n)
        base = compute_metrics(y_true, y_pred, k)
        order = rng.permutation(n)
        shuffled = compute_metrics(y_true[order], y_pred[order], k)
        relabel = rng.permutation(k)
        renamed = compute_metrics(relabel[y_true], relabel[y_pred], k)
        for other in (shuffled, renamed):
            assert other.accuracy == base.accuracy
            assert other.recall == pytest.approx(base.recall, abs=1e-12)
            assert other.precision == pytest.approx(base.precision, abs=1e-12)


def test_metrics_round_trip():
    m = compute_metrics([0, 1, 1], [0, 1, 0], 2)
    back = Metrics.from_dict(m.to_dict())
    assert back.to_dict() == m.to_dict()


def test_rounding_half_up():
    assert round_half_up(2 / 3) == "0.67"
    assert round_half_up(0.125) == "0.13"
    assert round_half_up(0.5) == "0.50"


def _stored(acc, rec, prec):
    return Metrics(acc, rec, prec, ConfusionMatrix(np.eye(2, dtype=np.int64)))


STORED_ROWS = [
    ("Decision Tree", 0.98, 0.50, 0.50),
    ("With DQN", 0.33, 0.28, 0.34),
    ("Random Forest", 0.99, 0.50, 0.50),
    ("With DQN", 0.32, 0.29, 0.34),
    ("Naive Bayes", 0.99, 0.75, 0.67),
    ("With DQN", 0.31, 0.28, 0.34),
]

GOLDEN_TABLE = """\
Model          Accuracy  Recall  Precision
-------------  --------  ------  ---------
Decision Tree      0.98    0.50       0.50
With DQN           0.33    0.28       0.34
Random Forest      0.99    0.50       0.50
With DQN           0.32    0.29       0.34
Naive Bayes        0.99    0.75       0.67
With DQN           0.31    0.28       0.34
"""


def test_golden_comparison_table():
    report = build_comparison([(name, _stored(*vals)) for name, *vals in STORED_ROWS])
    assert report.columns == ("Model", "Accuracy", "Recall", "Precision")
    assert report.render() == GOLDEN_TABLE
    assert [r["model"] for r in report.to_dict()["rows"]] == [r[0] for r in STORED_ROWS]


def test_single_row_and_full_precision():
    report = build_comparison([("Only", _stored(2 / 3, 0.5, 0.5))])
    assert len(report.rows) == 1
    assert "0.67" in report.render()
    assert report.to_dict()["rows"][0]["accuracy"] == 2 / 3
