"""Lloyd k-means in a target space."""
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import InvalidInputError
from .targets import DEGENERATE_EPS, as_targets, pairwise_loss

DEFAULT_MAX_ITERS = 100


@dataclass(frozen=True)
class Clustering:
    """Result of :func:`kmeans`.

    Attributes
    ----------
    assignments : ndarray of int, shape (n,)
        Cluster index of every sample, in ``[0, k_effective)``.
    centroids : ndarray, shape (k_effective, q)
        Cluster means in the target space.
    objective : float
        Total loss of the samples about their centroids.
    history : tuple of float
        Objective after the initial assignment and after every Lloyd iteration.
    """

    assignments: np.ndarray
    centroids: np.ndarray
    objective: float
    history: tuple = ()

    @property
    def k_effective(self):
        return self.centroids.shape[0]

    def sizes(self):
        return np.bincount(self.assignments, minlength=self.k_effective)


def assign(space, targets, centroids):
    """Nearest-centroid assignment; ties go to the lowest index.

    Returns the labels and each sample's loss to its centroid.
    """
    d = pairwise_loss(space, targets, centroids)
    labels = np.argmin(d, axis=1)
    return labels, d[np.arange(len(labels)), labels]


def unique_rows(targets):
    if targets.shape[1] == 1:
        return np.unique(targets[:, 0], return_index=True)[1]
    return np.unique(targets, axis=0, return_index=True)[1]


def count_distinct(targets):
    return len(unique_rows(targets))


def initial_centroids(targets, k, rng):
    """Pick ``k`` distinct target values from a random permutation of the samples."""
    order = rng.permutation(targets.shape[0])
    head = targets[order[:k]]
    if len(set(map(tuple, head.tolist()))) == len(head):
        return head.copy()
    first = np.sort(unique_rows(targets[order]))
    return targets[order[first[:k]]].copy()


def own_loss(space, targets, centroids, assignments):
    """Loss of every sample to its assigned centroid."""
    c = centroids[assignments]
    if space.is_circular:
        return 1.0 - np.cos(targets[:, 0] - c[:, 0])
    d = targets - c
    return np.einsum("ij,ij->i", d, d)


@njit(cache=True)
def _lloyd(t, c, circular, max_iters, eps):
    n, q = t.shape
    k = c.shape[0]
    if circular:
        st = np.sin(t[:, 0])
        ct = np.cos(t[:, 0])
    labels = np.empty(n, np.int64)
    new_labels = np.empty(n, np.int64)
    history = np.empty(max_iters + 1)
    counts = np.empty(k)
    sums = np.empty((k, 2 if circular else q))

    for step in range(max_iters + 1):
        if circular:
            sc = np.sin(c[:, 0])
            cc = np.cos(c[:, 0])
        total = 0.0
        for i in range(n):
            best = np.inf
            arg = 0
            for j in range(k):
                if circular:
                    d = 1.0 - (ct[i] * cc[j] + st[i] * sc[j])
                else:
                    d = 0.0
                    for m in range(q):
                        diff = t[i, m] - c[j, m]
                        d += diff * diff
                if d < best:
                    best = d
                    arg = j
            new_labels[i] = arg
            total += best
        history[step] = total
        if step > 0:
            same = True
            for i in range(n):
                if new_labels[i] != labels[i]:
                    same = False
                    break
            if same:
                return labels, c, history[:step + 1]
        labels[:] = new_labels
        if step == max_iters:
            break

        counts[:] = 0.0
        sums[:, :] = 0.0
        for i in range(n):
            j = labels[i]
            counts[j] += 1.0
            if circular:
                sums[j, 0] += st[i]
                sums[j, 1] += ct[i]
            else:
                for m in range(q):
                    sums[j, m] += t[i, m]
        for j in range(k):
            if counts[j] == 0.0:
                continue
            if circular:
                if math.hypot(sums[j, 0], sums[j, 1]) >= eps * counts[j]:
                    a = math.atan2(sums[j, 0], sums[j, 1]) % (2.0 * math.pi)
                    c[j, 0] = 0.0 if a >= 2.0 * math.pi else a
            else:
                for m in range(q):
                    c[j, m] = sums[j, m] / counts[j]
    return labels, c, history[:max_iters + 1]


def kmeans(space, targets, k, seed=None, max_iters=DEFAULT_MAX_ITERS, init=None):
    """Cluster ``targets`` into at most ``k`` groups with Lloyd iterations.

    Parameters
    ----------
    space : TargetSpace
    targets : array_like, shape (n, q)
    k : int
        Requested number of clusters. Clamped to the number of distinct targets.
    seed : int, Generator or None
        Seeds the choice of initial centroids (distinct data points).
    max_iters : int
    init : array_like, shape (k, q), optional
        Explicit initial centroids; overrides the random choice.

    Returns
    -------
    Clustering
        Empty clusters are removed, so ``k_effective <= k``.
    """
    t = as_targets(space, targets)
    if t.shape[0] == 0:
        raise InvalidInputError("kmeans needs at least one target")
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if init is None:
        rng = np.random.default_rng(seed)
        centroids = initial_centroids(t, int(k), rng)
    else:
        centroids = as_targets(space, init).copy()

    return run_lloyd(space, t, centroids, max_iters)


@njit(cache=True)
def _compact(t, labels, c, circular):
    """Drop empty clusters; return relabelled assignments, centroids, objective, sizes."""
    n, k = labels.shape[0], c.shape[0]
    counts = np.zeros(k, np.int64)
    for i in range(n):
        counts[labels[i]] += 1
    remap = np.empty(k, np.int64)
    used = 0
    for j in range(k):
        remap[j] = used
        if counts[j] > 0:
            used += 1
    out_c = np.empty((used, c.shape[1]))
    sizes = np.empty(used, np.int64)
    for j in range(k):
        if counts[j] > 0:
            out_c[remap[j]] = c[j]
            sizes[remap[j]] = counts[j]
    out_labels = np.empty(n, np.int64)
    total = 0.0
    for i in range(n):
        j = remap[labels[i]]
        out_labels[i] = j
        if circular:
            total += 1.0 - math.cos(t[i, 0] - out_c[j, 0])
        else:
            for m in range(t.shape[1]):
                d = t[i, m] - out_c[j, m]
                total += d * d
    return out_labels, out_c, total, sizes


def run_lloyd(space, t, centroids, max_iters=DEFAULT_MAX_ITERS):
    """Lloyd iterations from ``centroids`` on validated ``(n, q)`` targets."""
    labels, centroids, history = _lloyd(
        t, centroids, space.is_circular, int(max_iters), DEGENERATE_EPS)
    labels, centroids, objective, _ = _compact(t, labels, centroids, space.is_circular)
    return Clustering(labels, centroids, float(objective), tuple(history.tolist()))
