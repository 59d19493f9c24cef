"""Gaussian naive Bayes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyTrainingSet, MissingClass

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class GaussianNBModel:
    class_priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    var_smoothing: float

    kind = "nb"

    @property
    def n_classes(self) -> int:
        return len(self.class_priors)

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.class_priors)
        diff = X[:, None, :] - self.means[None, :, :]
        log_density = -0.5 * (LOG_2PI + np.log(self.variances)[None] + diff ** 2 / self.variances[None])
        return log_prior[None, :] + log_density.sum(axis=2)

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll = jll - jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def size_bytes(self) -> int:
        k, d = self.means.shape
        return (2 * k * d + k) * 8


def fit_gaussian_nb(X, y, var_smoothing: float | None = None, *, n_classes: int | None = None,
                    allow_missing_classes: bool = False) -> GaussianNBModel:
    """Per-class priors, means and population variances.

    Variances are floored at ``var_smoothing`` (default 1e-9 times the
    largest feature variance). With ``allow_missing_classes`` a class absent
    from ``y`` gets prior 0 and so posterior 0 everywhere.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) == 0:
        raise EmptyTrainingSet("cannot fit naive Bayes on zero rows")
    k = int(n_classes if n_classes is not None else y.max() + 1)
    support = np.bincount(y, minlength=k)
    missing = np.flatnonzero(support == 0)
    if len(missing) and not allow_missing_classes:
        raise MissingClass(f"classes {missing.tolist()} have no training rows")
    if var_smoothing is None:
        var_smoothing = 1e-9 * float(X.var(axis=0).max())
        if var_smoothing <= 0:
            var_smoothing = 1e-9

    d = X.shape[1]
    means = np.zeros((k, d))
    variances = np.ones((k, d))
    for c in np.flatnonzero(support):
        rows = X[y == c]
        means[c] = rows.mean(axis=0)
        variances[c] = rows.var(axis=0)
    variances = np.maximum(variances, var_smoothing)
    return GaussianNBModel(
        class_priors=support / support.sum(),
        means=means,
        variances=variances,
        var_smoothing=float(var_smoothing),
    )
