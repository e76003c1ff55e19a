"""Regression trees grown by k-means-guided or axis-threshold node splitting.

The k-means-guided splitter clusters the node's targets, trains a one-vs-rest
linear classifier to recover the cluster ids from the features, and forwards
every sample to the child its classifier score selects. Children are formed
from the routed samples, not from the cluster assignments.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import DEFAULT_MAX_ITERS, kmeans
from .exceptions import DegenerateMeanError, InvalidInputError, SelectionFailedError
from .linear import DEFAULT_TOLERANCE, OvrClassifier, predict, train_ovr
from .model_selection import select_k
from .targets import mean

MAX_DEPTH = 64


# -- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class KrfFixed:
    """Cluster every node into ``k`` groups."""

    k: int = 2

    def __post_init__(self):
        if self.k < 2:
            raise InvalidInputError("KrfFixed needs k >= 2")


@dataclass(frozen=True)
class KrfAdaptive:
    """Choose the number of groups per node by minimum BIC."""

    k_min: int = 2
    k_max: int = 40

    def __post_init__(self):
        if not 2 <= self.k_min <= self.k_max:
            raise InvalidInputError("KrfAdaptive needs 2 <= k_min <= k_max")


@dataclass(frozen=True)
class Binary:
    """Exhaustive axis-aligned threshold search."""


@dataclass(frozen=True)
class TreeConfig:
    splitter: object = field(default_factory=KrfFixed)
    min_samples_leaf: int = 5
    penalty_c: float = 1.0
    feature_ratio_gamma: float = 1.0
    seed: int = 0
    max_depth: int = MAX_DEPTH
    svm_tolerance: float = DEFAULT_TOLERANCE
    kmeans_max_iters: int = DEFAULT_MAX_ITERS
    kmeans_restarts: int = 1

    def __post_init__(self):
        if not isinstance(self.splitter, (KrfFixed, KrfAdaptive, Binary)):
            raise InvalidInputError(f"unknown splitter {self.splitter!r}")
        if self.min_samples_leaf < 1:
            raise InvalidInputError("min_samples_leaf must be >= 1")
        if self.penalty_c <= 0:
            raise InvalidInputError("penalty_c must be positive")
        if not 0.0 < self.feature_ratio_gamma <= 1.0:
            raise InvalidInputError("feature_ratio_gamma must lie in (0, 1]")


# -- tree structure ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearRule:
    classifier: OvrClassifier

    @property
    def num_children(self):
        return self.classifier.num_classes

    def route(self, X):
        return predict(self.classifier, X)


@dataclass(frozen=True)
class AxisThreshold:
    """Samples with ``x[dim] <= threshold`` go to child 0, the rest to child 1."""

    dim: int
    threshold: float

    num_children = 2

    def route(self, X):
        X = np.asarray(X, dtype=np.float64)
        return (X[..., self.dim] > self.threshold).astype(np.int64)


@dataclass(frozen=True, eq=False)
class Leaf:
    estimate: np.ndarray
    sample_count: int
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class Internal:
    rule: object
    children: tuple


def iter_nodes(node):
    """Depth-first, pre-order traversal."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Internal):
            stack.extend(reversed(n.children))


def leaves(node):
    return [n for n in iter_nodes(node) if isinstance(n, Leaf)]


def depth(node):
    if isinstance(node, Leaf):
        return 0
    return 1 + max(depth(c) for c in node.children)


# -- splitters ---------------------------------------------------------------

def _seed_from(rng):
    return int(rng.integers(2**63))


def split_node_krf(features, targets, space, config, rng):
    """Cluster targets, learn a linear router, and partition the node.

    Returns ``(rule, children)`` where ``children`` is a list of index arrays
    into the node's samples, or ``None`` when the node cannot be split.
    Classes that receive no training sample are removed from the router so
    that every child is non-empty.
    """
    splitter = config.splitter
    if isinstance(splitter, KrfAdaptive):
        try:
            clustering, _ = select_k(
                space, targets, splitter.k_min, splitter.k_max, seed=_seed_from(rng),
                max_iters=config.kmeans_max_iters, n_init=config.kmeans_restarts)
        except SelectionFailedError:
            return None
    else:
        clustering = kmeans(space, targets, splitter.k, seed=rng,
                            max_iters=config.kmeans_max_iters)
    if clustering.k_effective < 2:
        return None

    clf = train_ovr(features, clustering.assignments, clustering.k_effective,
                    config.penalty_c, config.svm_tolerance)
    routed = predict(clf, features)
    used = np.unique(routed)
    if len(used) < 2:
        return None
    if len(used) < clf.num_classes:
        # dropping a class never changes the argmax for samples routed elsewhere
        clf = OvrClassifier(clf.weights[used], clf.penalty_c)
        routed = np.searchsorted(used, routed)
    children = [np.flatnonzero(routed == j) for j in range(len(used))]
    return LinearRule(clf), children


def _prefix_losses(space, t_sorted):
    """Loss of every prefix about its own mean.

    ``t_sorted`` is ``(n, m, q)``: targets ordered along axis 0 separately for
    each of ``m`` candidate dimensions. Entry ``[i, j]`` of the result is the
    loss of the first ``i + 1`` samples in ordering ``j``.
    """
    n = t_sorted.shape[0]
    counts = np.arange(1, n + 1, dtype=np.float64)[:, None]
    if space.is_circular:
        s = np.cumsum(np.sin(t_sorted[..., 0]), axis=0)
        c = np.cumsum(np.cos(t_sorted[..., 0]), axis=0)
        return np.maximum(counts - np.hypot(s, c), 0.0)
    sums = np.cumsum(t_sorted, axis=0)
    sq = np.cumsum(np.einsum("nmq,nmq->nm", t_sorted, t_sorted), axis=0)
    return np.maximum(sq - np.einsum("nmq,nmq->nm", sums, sums) / counts, 0.0)


def split_node_binary(features, targets, space, config, rng):
    """Best axis-aligned threshold over a random subset of feature dimensions.

    ``ceil(gamma * p)`` dimensions are drawn without replacement. Candidate
    thresholds are midpoints between consecutive distinct values; ties keep
    the lowest dimension, then the lowest threshold. Returns
    ``(rule, children)`` or ``None`` if no threshold separates the samples.
    """
    n, p = features.shape
    m = max(1, math.ceil(config.feature_ratio_gamma * p - 1e-12))
    dims = np.sort(rng.choice(p, size=m, replace=False)) if m < p else np.arange(p)
    if n < 2:
        return None
    t = targets
    if not space.is_circular:
        t = targets - targets.mean(axis=0)

    X = features[:, dims]
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    ts = t[order]
    left = _prefix_losses(space, ts)
    right = _prefix_losses(space, ts[::-1])[::-1]
    total = left[:-1] + right[1:]
    total[~(xs[:-1] < xs[1:])] = np.inf
    # argmin over (dimension, position) in dimension-major order
    flat = int(np.argmin(total.T))
    j, i = divmod(flat, n - 1)
    if not np.isfinite(total[i, j]):
        return None
    lo, hi = xs[i, j], xs[i + 1, j]
    thr = 0.5 * (lo + hi)
    if not lo <= thr < hi:
        thr = lo
    rule = AxisThreshold(int(dims[j]), float(thr))
    routed = rule.route(features)
    return rule, [np.flatnonzero(routed == 0), np.flatnonzero(routed == 1)]


# -- growing and prediction --------------------------------------------------

def make_leaf(space, targets):
    try:
        return Leaf(mean(space, targets), targets.shape[0])
    except DegenerateMeanError:
        return Leaf(targets[0].copy(), targets.shape[0], degenerate=True)


def _grow(X, T, space, config, rng, level):
    n = X.shape[0]
    if n < config.min_samples_leaf or level >= config.max_depth:
        return make_leaf(space, T)
    if isinstance(config.splitter, Binary):
        split = split_node_binary(X, T, space, config, rng)
    else:
        split = split_node_krf(X, T, space, config, rng)
    if split is None:
        return make_leaf(space, T)
    rule, groups = split
    children = tuple(_grow(X[g], T[g], space, config, rng, level + 1) for g in groups)
    return Internal(rule, children)


def grow_tree(dataset, config):
    """Grow a tree on ``dataset``.

    A node becomes a leaf when it holds fewer than ``config.min_samples_leaf``
    samples, reaches ``config.max_depth``, or its splitter finds no split.
    Leaves store the space-appropriate mean of their targets; when a circular
    mean is undefined the first sample's target is stored and the leaf is
    flagged ``degenerate``.
    """
    if len(dataset) == 0:
        raise InvalidInputError("cannot grow a tree on an empty dataset")
    rng = np.random.default_rng(config.seed)
    return _grow(dataset.features, dataset.targets, dataset.space, config, rng, 0)


def _predict_into(node, X, index, out):
    if isinstance(node, Leaf):
        out[index] = node.estimate
        return
    routed = node.rule.route(X[index])
    for j, child in enumerate(node.children):
        sel = index[routed == j]
        if len(sel):
            _predict_into(child, X, sel, out)


def tree_predict(tree, X):
    """Leaf estimate for one sample ``(p,)`` or a batch ``(n, p)``."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X2 = X[None, :] if single else X
    if X2.ndim != 2:
        raise InvalidInputError("X must be 1-D or 2-D")
    first = next(n for n in iter_nodes(tree) if isinstance(n, Leaf))
    out = np.empty((X2.shape[0], first.estimate.shape[0]))
    _check_width(tree, X2.shape[1])
    _predict_into(tree, X2, np.arange(X2.shape[0]), out)
    return out[0] if single else out


def _check_width(tree, p):
    if isinstance(tree, Internal):
        rule = tree.rule
        if isinstance(rule, LinearRule):
            if rule.classifier.num_features != p:
                raise InvalidInputError(
                    f"expected {rule.classifier.num_features} features, got {p}")
        elif rule.dim >= p:
            raise InvalidInputError(f"feature index {rule.dim} out of range for {p} features")
