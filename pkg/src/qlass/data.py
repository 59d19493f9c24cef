"""Tabular data ingestion and preprocessing.

The pipeline is: :func:`load_csv` -> :func:`train_test_split` ->
:func:`impute_missing` -> :func:`encode` -> :func:`zscore_normalize`.
:func:`prepare` runs all of it with train-only statistics, and
:func:`generate_synthetic` builds an already-encoded stand-in dataset.
"""
from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import (
    AllMissingColumn,
    BadRatio,
    DataError,
    DegenerateTarget,
    EmptyDataset,
    MissingColumn,
    ParseError,
)

KINDS = ("numeric", "categorical", "target")
ROLES = ("feature", "identifier", "target")
LABEL_COLUMN = "label"


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str = "numeric"
    role: str = "feature"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise DataError(f"column {self.name!r}: unknown role {self.role!r}")

    @property
    def is_numeric(self) -> bool:
        return self.kind == "numeric"


def check_columns(columns) -> None:
    names = [c.name for c in columns]
    if len(set(names)) != len(names):
        raise DataError(f"duplicate column names in {names}")
    n_target = sum(c.role == "target" for c in columns)
    if n_target != 1:
        raise DataError(f"exactly one target column required, got {n_target}")


@dataclass
class Dataset:
    """A table plus (once encoded) its numeric feature matrix.

    ``cells`` keeps the per-column values as read (``None`` marks an absent
    cell). ``features``/``labels`` are filled by :func:`encode` or by the
    synthetic generator. ``rows`` holds each row's position in the source
    table so splits stay traceable.
    """

    columns: list[ColumnSpec]
    cells: dict[str, list]
    rows: np.ndarray
    features: np.ndarray | None = None
    labels: np.ndarray | None = None
    feature_names: list[str] = field(default_factory=list)
    class_names: list[str] = field(default_factory=list)
    encoders: dict[str, dict[str, int]] = field(default_factory=dict)
    thresholds: list[float] | None = None
    norm_params: list[tuple[float, float]] | None = None

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def target(self) -> ColumnSpec:
        return next(c for c in self.columns if c.role == "target")

    @property
    def encoded(self) -> bool:
        return self.features is not None

    def take(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        cells = {k: [v[i] for i in idx] for k, v in self.cells.items()}
        return replace(
            self,
            cells=cells,
            rows=self.rows[idx],
            features=None if self.features is None else self.features[idx],
            labels=None if self.labels is None else self.labels[idx],
        )


@dataclass
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    ratio: float


# -- loading ------------------------------------------------------------------

def _parse_number(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def load_csv(path, spec) -> Dataset:
    """Read the declared columns of a comma-separated file.

    Header columns not named in ``spec`` are ignored. Empty cells become
    ``None``; numeric columns are parsed to ``float``, everything else stays
    text until encoding.
    """
    columns = list(spec)
    check_columns(columns)
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyDataset(f"{path}: no header row") from None
        positions = {}
        for col in columns:
            if col.name not in header:
                raise MissingColumn(col.name)
            positions[col.name] = header.index(col.name)
        cells = {c.name: [] for c in columns}
        n = 0
        for r, record in enumerate(reader):
            if not record:
                continue
            if len(record) != len(header):
                raise ParseError(r, "*", ",".join(record), path)
            for col in columns:
                raw = record[positions[col.name]].strip()
                if raw == "":
                    cells[col.name].append(None)
                elif col.is_numeric:
                    try:
                        cells[col.name].append(_parse_number(raw))
                    except ValueError:
                        raise ParseError(r, col.name, raw, path) from None
                else:
                    cells[col.name].append(raw)
            n += 1
    if n < 2:
        raise EmptyDataset(f"{path}: need at least 2 data rows, found {n}")
    return Dataset(columns=columns, cells=cells, rows=np.arange(n))


# -- encoding -----------------------------------------------------------------

def label_encode(values):
    """Map distinct values to codes in ascending lexicographic order."""
    mapping = {v: i for i, v in enumerate(sorted(set(values)))}
    return [mapping[v] for v in values], mapping


def invert_mapping(mapping):
    return {code: value for value, code in mapping.items()}


def bin_target(values, k: int):
    """Discretize a continuous target into ``k`` equal-frequency levels.

    Thresholds are the interior empirical quantiles (midpoint interpolation);
    a value's label is the number of thresholds strictly below it.
    """
    values = np.asarray(values, dtype=float)
    if k < 2:
        raise DegenerateTarget(f"need at least 2 bins, got {k}")
    if len(np.unique(values)) < k:
        raise DegenerateTarget(f"target has fewer than {k} distinct values")
    thresholds = np.quantile(values, np.arange(1, k) / k, method="midpoint")
    labels = apply_thresholds(values, thresholds)
    empty = np.flatnonzero(np.bincount(labels, minlength=k) == 0)
    if len(empty):
        raise DegenerateTarget(f"quantile bins {empty.tolist()} are empty; target too tied for k={k}")
    return labels, [float(t) for t in thresholds]


def apply_thresholds(values, thresholds) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    # count of thresholds strictly below each value
    return np.searchsorted(np.asarray(thresholds, dtype=float), values, side="left").astype(np.int64)


def _target_text(value) -> str:
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def fit_encoders(dataset: Dataset) -> dict[str, dict[str, int]]:
    """Label encoders for every text-valued column (present values only)."""
    encoders = {}
    for col in dataset.columns:
        if col.role == "target" or col.is_numeric:
            continue
        present = [v for v in dataset.cells[col.name] if v is not None]
        if present:
            encoders[col.name] = label_encode(present)[1]
    return encoders


def _target_classes(values):
    distinct = set(values)
    if all(isinstance(v, float) for v in distinct):
        ordered = [_target_text(v) for v in sorted(distinct)]
    else:
        ordered = sorted(_target_text(v) for v in distinct)
    return {name: i for i, name in enumerate(ordered)}


def encode(dataset: Dataset, *, bins: int | None = None, include_identifiers: bool = False,
           encoders=None, thresholds=None, classes=None) -> Dataset:
    """Build the numeric feature matrix and class labels.

    Feature columns (and identifier columns if ``include_identifiers``) go
    into ``features`` in declaration order, text columns via label encoding.
    With ``bins`` the target is quantile-binned, otherwise its distinct
    values become the classes. Pass ``encoders``/``thresholds``/``classes``
    fitted elsewhere to apply them instead of fitting here.
    """
    target = dataset.target
    tvals = dataset.cells[target.name]
    for r, v in enumerate(tvals):
        if v is None:
            raise DataError(f"row {r}: target {target.name!r} is missing")
    encoders = dict(fit_encoders(dataset) if encoders is None else encoders)

    if bins:
        numeric = []
        for r, v in enumerate(tvals):
            try:
                numeric.append(float(v))
            except ValueError:
                raise ParseError(r, target.name, v) from None
        if thresholds is None:
            labels, thresholds = bin_target(numeric, bins)
        else:
            labels = apply_thresholds(numeric, thresholds)
        class_names = [str(i) for i in range(len(thresholds) + 1)]
    else:
        if classes is None:
            classes = _target_classes(tvals)
        try:
            labels = np.array([classes[_target_text(v)] for v in tvals], dtype=np.int64)
        except KeyError as exc:
            raise DataError(f"target value {exc.args[0]!r} not among known classes") from None
        class_names = sorted(classes, key=classes.get)
        encoders[target.name] = dict(classes)
        thresholds = None

    used = [c for c in dataset.columns
            if c.role == "feature" or (include_identifiers and c.role == "identifier")]
    if not used:
        raise DataError("no feature columns selected")
    matrix = np.empty((dataset.n_rows, len(used)), dtype=float)
    for j, col in enumerate(used):
        vals = dataset.cells[col.name]
        if col.is_numeric:
            matrix[:, j] = [np.nan if v is None else v for v in vals]
        else:
            mapping = encoders.get(col.name, {})
            for i, v in enumerate(vals):
                if v is not None and v not in mapping:
                    raise DataError(f"column {col.name!r}: unseen category {v!r}")
            matrix[:, j] = [np.nan if v is None else mapping[v] for v in vals]
    if not np.all(np.isfinite(matrix)):
        raise DataError("feature matrix has missing values; run impute_missing first")

    return replace(
        dataset,
        features=matrix,
        labels=np.asarray(labels, dtype=np.int64),
        feature_names=[c.name for c in used],
        class_names=class_names,
        encoders=encoders,
        thresholds=thresholds,
    )


# -- cleaning -----------------------------------------------------------------

def _mode(values):
    counts = Counter(values)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)


def impute_missing(dataset: Dataset, reference: Dataset | None = None) -> Dataset:
    """Fill absent non-target cells with the reference column mean or mode.

    Statistics come from ``reference`` (the training partition), defaulting
    to the dataset itself. Modal ties resolve to the smallest value.
    """
    reference = dataset if reference is None else reference
    cells = dict(dataset.cells)
    for col in dataset.columns:
        if col.role == "target":
            continue
        present = [v for v in reference.cells[col.name] if v is not None]
        if not present:
            raise AllMissingColumn(col.name)
        fill = math.fsum(present) / len(present) if col.is_numeric else _mode(present)
        cells[col.name] = [fill if v is None else v for v in dataset.cells[col.name]]
    return replace(dataset, cells=cells)


def zscore_normalize(train: Dataset, apply_to: Dataset) -> Dataset:
    """Standardize ``apply_to`` with the training columns' mean and population std.

    Columns whose training std is below 1e-12 map to zero.
    """
    X = train.features
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    degenerate = std < 1e-12
    safe = np.where(degenerate, 1.0, std)
    out = (apply_to.features - mean) / safe
    out[:, degenerate] = 0.0
    params = [(float(m), float(s)) for m, s in zip(mean, std)]
    return replace(apply_to, features=out, norm_params=params)


# -- splitting ----------------------------------------------------------------

def split_indices(n: int, ratio: float, seed: int):
    if not 0.0 < ratio < 1.0:
        raise BadRatio(f"split ratio must lie in (0, 1), got {ratio}")
    n_train = math.floor(n * ratio)
    if n_train < 1 or n - n_train < 1:
        raise BadRatio(f"ratio {ratio} leaves an empty partition for n={n}")
    order = np.random.default_rng(seed).permutation(n)
    return order[:n_train], order[n_train:]


def train_test_split(dataset: Dataset, ratio: float = 0.8, seed: int = 0) -> SplitPair:
    train_idx, test_idx = split_indices(dataset.n_rows, ratio, seed)
    return SplitPair(dataset.take(train_idx), dataset.take(test_idx), seed, ratio)


def prepare(dataset: Dataset, *, ratio: float = 0.8, seed: int = 0, bins: int | None = None,
            include_identifiers: bool = False, normalize: bool = True) -> SplitPair:
    """Split, impute, encode and normalize using training-partition statistics only."""
    split = train_test_split(dataset, ratio, seed)
    train, test = split.train, split.test
    if not dataset.encoded:
        train, test = impute_missing(train), impute_missing(test, reference=train)
        encoders = fit_encoders(dataset)
        train = encode(train, bins=bins, include_identifiers=include_identifiers, encoders=encoders)
        test = encode(test, bins=bins, include_identifiers=include_identifiers, encoders=encoders,
                      thresholds=train.thresholds,
                      classes=None if bins else train.encoders[train.target.name])
        if bins and len(np.unique(train.labels)) < bins:
            raise DegenerateTarget("a target level is empty in the training partition")
    if normalize:
        train, test = zscore_normalize(train, train), zscore_normalize(train, test)
    return SplitPair(train, test, seed, ratio)


# -- synthetic data -----------------------------------------------------------

def _lattice_centers(d: int, k: int, separation: float, rng) -> np.ndarray:
    side = 2
    while side ** d < k:
        side += 1
    chosen = rng.choice(side ** d, size=k, replace=False)
    digits = np.array([[(c // side ** j) % side for j in range(d)] for c in chosen], dtype=float)
    # random sign flip per axis keeps distinct lattice points >= 1 apart
    signs = rng.choice([-1.0, 1.0], size=d)
    return separation * digits * signs


def generate_synthetic(n: int, d: int, k: int, separation: float, seed: int = 0) -> Dataset:
    """Balanced mixture of ``k`` unit-variance Gaussian clusters in ``d`` dimensions.

    Centers are distinct points of an integer lattice scaled by
    ``separation``, so any two are at least ``separation`` apart.
    """
    if n < k or d < 1 or k < 2 or separation < 0:
        raise DataError(f"invalid synthetic spec n={n} d={d} k={k} separation={separation}")
    rng = np.random.default_rng(seed)
    centers = _lattice_centers(d, k, separation, rng)
    labels = np.repeat(np.arange(k), [n // k + (c < n % k) for c in range(k)])
    labels = labels[rng.permutation(n)]
    X = centers[labels] + rng.standard_normal((n, d))

    names = [f"x{j + 1}" for j in range(d)]
    class_names = [str(c) for c in range(k)]
    columns = [ColumnSpec(name) for name in names]
    columns.append(ColumnSpec("target", "categorical", "target"))
    cells = {name: X[:, j].tolist() for j, name in enumerate(names)}
    cells["target"] = [class_names[c] for c in labels]
    return Dataset(
        columns=columns,
        cells=cells,
        rows=np.arange(n),
        features=X,
        labels=labels.astype(np.int64),
        feature_names=names,
        class_names=class_names,
        encoders={"target": {name: i for i, name in enumerate(class_names)}},
    )


# -- files --------------------------------------------------------------------

def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(dataset: Dataset, path) -> None:
    """Write the raw cells back out as CSV (absent cells as empty strings)."""
    names = [c.name for c in dataset.columns]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for i in range(dataset.n_rows):
            writer.writerow([_cell_text(dataset.cells[n][i]) for n in names])


def write_prepared(dataset: Dataset, path) -> None:
    """Write the encoded matrix with an integer ``label`` column."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*dataset.feature_names, LABEL_COLUMN])
        for row, label in zip(dataset.features, dataset.labels):
            writer.writerow([*(repr(float(v)) for v in row), int(label)])


def read_prepared(path, class_names=None) -> Dataset:
    """Load a file written by :func:`write_prepared`."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[-1] != LABEL_COLUMN:
            raise DataError(f"{path}: last column must be {LABEL_COLUMN!r}")
        rows = [r for r in reader if r]
    try:
        X = np.array([[float(v) for v in r[:-1]] for r in rows], dtype=float).reshape(len(rows), len(header) - 1)
        y = np.array([int(r[-1]) for r in rows], dtype=np.int64)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    names = header[:-1]
    if class_names is None:
        class_names = [str(c) for c in range(int(y.max()) + 1)] if len(y) else []
    columns = [ColumnSpec(n) for n in names] + [ColumnSpec(LABEL_COLUMN, "categorical", "target")]
    return Dataset(columns=columns, cells={}, rows=np.arange(len(y)), features=X, labels=y,
                   feature_names=names, class_names=list(class_names))
