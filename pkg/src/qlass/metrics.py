"""Confusion matrices, accuracy/precision/recall and the comparison table."""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .errors import ConfigError, LabelOutOfRange, LengthMismatch

TABLE_COLUMNS = ("Model", "Accuracy", "Recall", "Precision")
AVERAGES = ("macro", "micro")


@dataclass
class ConfusionMatrix:
    """Counts with rows = actual class, columns = predicted class."""

    counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion_matrix(y_true, y_pred, n_classes: int) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if len(y_true) != len(y_pred) or len(y_true) == 0:
        raise LengthMismatch(f"y_true has {len(y_true)} entries, y_pred {len(y_pred)}")
    for y in (y_true, y_pred):
        if y.min() < 0 or y.max() >= n_classes:
            raise LabelOutOfRange(f"labels must lie in 0..{n_classes - 1}")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


def _ratio(num, den):
    # zero-denominator classes contribute 0
    return np.divide(num, den, out=np.zeros(len(num)), where=den > 0)


def accuracy(cm: ConfusionMatrix) -> float:
    return float(np.trace(cm.counts) / cm.total)


def per_class_recall(cm: ConfusionMatrix) -> np.ndarray:
    return _ratio(np.diag(cm.counts).astype(float), cm.counts.sum(axis=1))


def per_class_precision(cm: ConfusionMatrix) -> np.ndarray:
    return _ratio(np.diag(cm.counts).astype(float), cm.counts.sum(axis=0))


def macro_recall(cm: ConfusionMatrix) -> float:
    return float(per_class_recall(cm).mean())


def macro_precision(cm: ConfusionMatrix) -> float:
    return float(per_class_precision(cm).mean())


@dataclass
class ClassMetrics:
    recall: float
    precision: float
    support: int


@dataclass
class Metrics:
    accuracy: float
    recall: float
    precision: float
    confusion: ConfusionMatrix
    per_class: list[ClassMetrics] = field(default_factory=list)
    average: str = "macro"

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "recall": self.recall,
            "precision": self.precision,
            "average": self.average,
            "confusion": {"orientation": "rows=actual,columns=predicted",
                          "counts": self.confusion.counts.tolist()},
            "per_class": [vars(c).copy() for c in self.per_class],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Metrics":
        return cls(
            accuracy=doc["accuracy"],
            recall=doc["recall"],
            precision=doc["precision"],
            confusion=ConfusionMatrix(np.array(doc["confusion"]["counts"], dtype=np.int64)),
            per_class=[ClassMetrics(**c) for c in doc.get("per_class", [])],
            average=doc.get("average", "macro"),
        )


def compute_metrics(y_true, y_pred, n_classes: int, average: str = "macro") -> Metrics:
    """All evaluation metrics for one prediction vector.

    ``average='micro'`` pools counts over classes; for single-label
    multiclass data micro recall and precision both equal accuracy.
    """
    if average not in AVERAGES:
        raise ConfigError(f"average must be one of {AVERAGES}")
    cm = confusion_matrix(y_true, y_pred, n_classes)
    recalls, precisions = per_class_recall(cm), per_class_precision(cm)
    support = cm.counts.sum(axis=1)
    acc = accuracy(cm)
    return Metrics(
        accuracy=acc,
        recall=float(recalls.mean()) if average == "macro" else acc,
        precision=float(precisions.mean()) if average == "macro" else acc,
        confusion=cm,
        per_class=[ClassMetrics(float(r), float(p), int(s)) for r, p, s in zip(recalls, precisions, support)],
        average=average,
    )


# -- comparison report ----------------------------------------------------------

def round_half_up(value: float, places: int = 2) -> str:
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass
class ComparisonRow:
    model: str
    accuracy: float
    recall: float
    precision: float
    curve: str | None = None


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow]

    columns = TABLE_COLUMNS

    def render(self) -> str:
        """Aligned text table, values rounded half-up to two decimals."""
        body = [[r.model, round_half_up(r.accuracy), round_half_up(r.recall), round_half_up(r.precision)]
                for r in self.rows]
        widths = [max(len(h), *(len(line[i]) for line in body)) for i, h in enumerate(self.columns)]

        def fmt(cells):
            first = cells[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
            return "  ".join([first, *rest]).rstrip()

        rule = "  ".join("-" * w for w in widths)
        return "\n".join([fmt(list(self.columns)), rule, *(fmt(line) for line in body)]) + "\n"

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "rows": [vars(r).copy() for r in self.rows],
        }


def build_comparison(reports) -> ComparisonReport:
    """``reports``: iterable of ``(name, Metrics)`` or ``(name, Metrics, curve_path)``."""
    rows = []
    for entry in reports:
        name, m = entry[0], entry[1]
        curve = entry[2] if len(entry) > 2 else None
        rows.append(ComparisonRow(name, m.accuracy, m.recall, m.precision, curve))
    if not rows:
        raise ConfigError("comparison needs at least one model")
    return ComparisonReport(rows)
