"""Bagged ensembles of regression trees."""
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .exceptions import InvalidInputError
from .targets import DEGENERATE_EPS, TargetSpace, wrap_angle
from .tree import TreeConfig, grow_tree, tree_predict


@dataclass(frozen=True)
class ForestConfig:
    num_trees: int = 20
    bagging_ratio_beta: float = 1.0
    tree_config: TreeConfig = field(default_factory=TreeConfig)
    seed: int = 0

    def __post_init__(self):
        if self.num_trees < 1:
            raise InvalidInputError("num_trees must be >= 1")
        if not 0.0 < self.bagging_ratio_beta <= 1.0:
            raise InvalidInputError("bagging_ratio_beta must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class Forest:
    trees: tuple
    space: TargetSpace
    n_features: int
    config: ForestConfig


def tree_rng(seed, index):
    """Independent stream for tree ``index``; does not depend on training order."""
    return np.random.default_rng([int(seed), int(index)])


def subsample_size(n, beta):
    return max(1, math.ceil(beta * n - 1e-9))


def _fit_one(dataset, config, index):
    rng = tree_rng(config.seed, index)
    size = subsample_size(len(dataset), config.bagging_ratio_beta)
    rows = np.sort(rng.choice(len(dataset), size=size, replace=False))
    tree_seed = int(rng.integers(2**63))
    return grow_tree(dataset.subset(rows), replace(config.tree_config, seed=tree_seed))


def train_forest(dataset, config, n_jobs=1):
    """Train ``config.num_trees`` trees, each on ``ceil(beta * n)`` samples drawn
    without replacement.

    Results do not depend on ``n_jobs``.
    """
    if len(dataset) == 0:
        raise InvalidInputError("cannot train on an empty dataset")
    if n_jobs == 1:
        trees = [_fit_one(dataset, config, i) for i in range(config.num_trees)]
    else:
        trees = Parallel(n_jobs=n_jobs)(
            delayed(_fit_one)(dataset, config, i) for i in range(config.num_trees))
    return Forest(tuple(trees), dataset.space, dataset.n_features, config)


def aggregate(space, outputs):
    """Combine per-tree outputs ``(m, n, q)`` into ``(n, q)``.

    Returns the aggregate and a boolean mask of samples whose circular mean
    was undefined; those fall back to the first tree's output.
    """
    outputs = np.asarray(outputs, dtype=np.float64)
    if not space.is_circular:
        return outputs.mean(axis=0), np.zeros(outputs.shape[1], dtype=bool)
    s = np.sin(outputs[..., 0]).mean(axis=0)
    c = np.cos(outputs[..., 0]).mean(axis=0)
    degenerate = np.hypot(s, c) < DEGENERATE_EPS
    agg = wrap_angle(np.arctan2(s, c))
    agg = np.where(degenerate, outputs[0, :, 0], agg)
    return agg[:, None], degenerate


def forest_predict(forest, X, return_flags=False):
    """Mean of the tree outputs (circular mean for circular targets).

    Accepts one sample ``(p,)`` or a batch ``(n, p)``. With
    ``return_flags=True`` also returns the degenerate-aggregation mask.
    """
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X2 = X[None, :] if single else X
    if X2.ndim != 2 or X2.shape[1] != forest.n_features:
        raise InvalidInputError(
            f"expected {forest.n_features} features, got shape {X.shape}")
    outputs = np.stack([tree_predict(t, X2) for t in forest.trees])
    pred, flags = aggregate(forest.space, outputs)
    if flags.any():
        warnings.warn(f"{int(flags.sum())} prediction(s) had an undefined circular mean; "
                      "used the first tree's output", RuntimeWarning, stacklevel=2)
    if single:
        pred, flags = pred[0], bool(flags[0])
    return (pred, flags) if return_flags else pred
