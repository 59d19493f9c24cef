"""JSON (de)serialization of fitted models.

A model document is a JSON object::

    {"format": "qlass-model", "format_version": 1, "kind": "tree" | "forest" | "nb", ...}

Floats are written with ``repr`` precision so a load/save round trip is
exact. Parameters travel alongside the fitted arrays.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..errors import DataError
from .forest import ForestModel, ForestParams
from .naive_bayes import GaussianNBModel
from .tree import DecisionTreeModel, TreeParams

FORMAT = "qlass-model"
FORMAT_VERSION = 1


def model_to_dict(model) -> dict:
    if isinstance(model, DecisionTreeModel):
        return {
            "kind": "tree",
            "n_classes": model.n_classes,
            "n_features": model.n_features,
            "feature": model.feature.tolist(),
            "threshold": model.threshold.tolist(),
            "left": model.left.tolist(),
            "right": model.right.tolist(),
            "counts": model.counts.tolist(),
        }
    if isinstance(model, ForestModel):
        return {
            "kind": "forest",
            "n_classes": model.n_classes,
            "trees": [model_to_dict(t) for t in model.trees],
        }
    if isinstance(model, GaussianNBModel):
        return {
            "kind": "nb",
            "class_priors": model.class_priors.tolist(),
            "means": model.means.tolist(),
            "variances": model.variances.tolist(),
            "var_smoothing": model.var_smoothing,
        }
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(doc: dict):
    kind = doc.get("kind")
    if kind == "tree":
        k = doc["n_classes"]
        return DecisionTreeModel(
            feature=np.array(doc["feature"], dtype=np.int64),
            threshold=np.array(doc["threshold"], dtype=float),
            left=np.array(doc["left"], dtype=np.int64),
            right=np.array(doc["right"], dtype=np.int64),
            counts=np.array(doc["counts"], dtype=np.int64).reshape(-1, k),
            n_classes=k,
            n_features=doc["n_features"],
        )
    if kind == "forest":
        return ForestModel(trees=[model_from_dict(t) for t in doc["trees"]], n_classes=doc["n_classes"])
    if kind == "nb":
        return GaussianNBModel(
            class_priors=np.array(doc["class_priors"], dtype=float),
            means=np.array(doc["means"], dtype=float),
            variances=np.array(doc["variances"], dtype=float),
            var_smoothing=float(doc["var_smoothing"]),
        )
    raise DataError(f"unknown model kind {kind!r}")


def params_to_dict(params):
    if params is None:
        return None
    if isinstance(params, (TreeParams, ForestParams)):
        return asdict(params)
    return params


def params_from_dict(family: str, doc):
    if doc is None or family == "nb":
        return doc
    if family == "tree":
        return TreeParams(**doc)
    return ForestParams(**{**doc, "tree": TreeParams(**doc["tree"])})


def dump(doc: dict, path) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load(path, expected_format: str = FORMAT) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from None
    if doc.get("format") != expected_format:
        raise DataError(f"{path}: expected format {expected_format!r}, got {doc.get('format')!r}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataError(f"{path}: unsupported format_version {doc.get('format_version')!r}")
    return doc


def save_model(model, path, *, family: str | None = None, params=None, extra: dict | None = None) -> None:
    doc = {"format": FORMAT, "format_version": FORMAT_VERSION, "model": model_to_dict(model)}
    if family is not None:
        doc["family"] = family
        doc["params"] = params_to_dict(params)
    if extra:
        doc.update(extra)
    dump(doc, path)


def load_model(path):
    return model_from_dict(load(path)["model"])
