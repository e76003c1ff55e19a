"""Error metrics and cross-validation."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .forest import forest_predict, train_forest
from .targets import angular_error_deg


@dataclass(frozen=True)
class EvalReport:
    """Mean absolute errors in target units (degrees for circular targets).

    ``mae_p90`` and ``mae_p95`` average the smallest 90% / 95% of the
    per-sample errors. ``mae_per_dim`` lists the MAE of each Euclidean target
    dimension; ``mae`` is their average.
    """

    mae: float
    mae_p90: float
    mae_p95: float
    n: int
    mae_per_dim: tuple = ()

    def as_dict(self):
        return {"mae": self.mae, "mae_p90": self.mae_p90, "mae_p95": self.mae_p95,
                "n": self.n, "mae_per_dim": list(self.mae_per_dim)}


def absolute_errors(space, truth, pred):
    """Per-sample, per-dimension absolute errors, shape ``(n, q)``.

    Circular errors are shorter-arc differences in ``[0, 180]`` degrees.
    """
    truth = np.asarray(truth, dtype=np.float64)
    pred = np.asarray(pred, dtype=np.float64)
    if truth.shape != pred.shape:
        raise InvalidInputError(f"shape mismatch: {truth.shape} vs {pred.shape}")
    if space.is_circular:
        return angular_error_deg(truth, pred)
    return np.abs(truth - pred)


def truncated_mae(errors, fraction):
    """Mean of the smallest ``ceil(fraction * n)`` values."""
    e = np.sort(np.asarray(errors, dtype=np.float64).ravel())
    if e.size == 0:
        raise InvalidInputError("no errors to average")
    m = max(1, math.ceil(fraction * e.size - 1e-9))
    return float(e[:m].mean())


def report_from_errors(errors):
    """Build an :class:`EvalReport` from an ``(n, q)`` array of absolute errors."""
    errors = np.asarray(errors, dtype=np.float64)
    if errors.ndim == 1:
        errors = errors[:, None]
    per_sample = errors.mean(axis=1)
    return EvalReport(
        mae=float(per_sample.mean()),
        mae_p90=truncated_mae(per_sample, 0.90),
        mae_p95=truncated_mae(per_sample, 0.95),
        n=int(errors.shape[0]),
        mae_per_dim=tuple(float(v) for v in errors.mean(axis=0)),
    )


def evaluate(forest, dataset):
    """Score ``forest`` on ``dataset``."""
    if len(dataset) == 0:
        raise InvalidInputError("cannot evaluate on an empty dataset")
    if dataset.space != forest.space:
        raise InvalidInputError(f"dataset space {dataset.space} != model space {forest.space}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        pred = forest_predict(forest, dataset.features)
    return report_from_errors(absolute_errors(dataset.space, dataset.targets, pred))


def kfold_indices(n, folds, seed=0):
    """Shuffled ``(train, validation)`` index pairs for ``folds``-fold CV."""
    if folds < 2:
        raise InvalidInputError("need at least 2 folds")
    order = np.random.default_rng(seed).permutation(n)
    parts = np.array_split(order, folds)
    return [(np.sort(np.concatenate(parts[:i] + parts[i + 1:])), np.sort(parts[i]))
            for i in range(folds)]


def group_indices(groups):
    """Leave-one-group-out ``(train, validation)`` pairs, in sorted group order."""
    groups = np.asarray(groups)
    return [(np.flatnonzero(groups != g), np.flatnonzero(groups == g))
            for g in np.unique(groups)]


@dataclass(frozen=True)
class CvResult:
    best_index: int
    best_config: object
    scores: tuple


def cross_validate(dataset, configs, folds=5, seed=0, by_group=False, n_jobs=1):
    """Pick the forest configuration with the lowest mean validation MAE.

    Folds are shuffled deterministically from ``seed``, or formed by leaving
    one group out when ``by_group`` is set. Folds with an empty training or
    validation part are skipped with a warning. Ties keep the first
    configuration in ``configs``.
    """
    configs = list(configs)
    if not configs:
        raise InvalidInputError("empty configuration grid")
    if by_group:
        if dataset.groups is None:
            raise InvalidInputError("dataset has no group column")
        splits = group_indices(dataset.groups)
    else:
        splits = kfold_indices(len(dataset), folds, seed)
    usable = []
    for i, (tr, va) in enumerate(splits):
        if len(tr) == 0 or len(va) == 0:
            warnings.warn(f"fold {i} has an empty training or validation part; skipped")
        else:
            usable.append((tr, va))
    if not usable:
        raise InvalidInputError("no usable cross-validation fold")

    scores = []
    for config in configs:
        maes = [evaluate(train_forest(dataset.subset(tr), config, n_jobs), dataset.subset(va)).mae
                for tr, va in usable]
        scores.append(float(np.mean(maes)))
    best = int(np.argmin(scores))
    return CvResult(best, configs[best], tuple(scores))
