"""BIC scoring of clusterings and adaptive choice of the cluster count.

Euclidean targets are modelled as a mixture of isotropic Gaussians with a
shared variance, circular targets as a mixture of von Mises laws with a
shared concentration. Mixture weights are the cluster proportions.
"""
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .clustering import DEFAULT_MAX_ITERS, Clustering, _compact, _lloyd, count_distinct
from .exceptions import InvalidInputError, NotComputableError, SelectionFailedError
from .special import _log_i0, log_i0
from .targets import DEGENERATE_EPS, as_targets

#: Cap applied to the concentration estimate when the resultant length -> 1.
KAPPA_MAX = 5e11
_R_CAP = 1.0 - 1e-12


@dataclass(frozen=True)
class BicScore:
    k: int
    log_likelihood: float
    penalty: float

    @property
    def bic(self):
        return -2.0 * self.log_likelihood + self.penalty


@njit(cache=True)
def _score_terms(t, labels, centroids, circular):
    """Summed own-centroid loss and ``sum_k n_k ln n_k - n ln n``."""
    n, q = t.shape
    k = centroids.shape[0]
    sizes = np.zeros(k)
    total = 0.0
    for i in range(n):
        j = labels[i]
        sizes[j] += 1.0
        if circular:
            total += 1.0 - math.cos(t[i, 0] - centroids[j, 0])
        else:
            for m in range(q):
                d = t[i, m] - centroids[j, m]
                total += d * d
    mix = -n * math.log(n)
    for j in range(k):
        if sizes[j] > 0:
            mix += sizes[j] * math.log(sizes[j])
    return total, mix


def _terms(space, t, clustering):
    return _score_terms(t, clustering.assignments, clustering.centroids, space.is_circular)


def euclidean_bic(space, targets, clustering):
    """BIC of a clustering under a shared-variance isotropic Gaussian mixture.

    Raises NotComputableError when ``n <= k`` or the pooled variance is zero.
    """
    t = as_targets(space, targets)
    n, q = t.shape
    k = clustering.k_effective
    if n <= k:
        raise NotComputableError(f"need more samples than clusters (n={n}, k={k})")
    sse, mix = _terms(space, t, clustering)
    return _euclidean_score(n, q, k, sse, mix)


def _euclidean_score(n, q, k, sse, mix):
    var = sse / (n - k)
    if not var > 0.0:
        raise NotComputableError("pooled variance is zero")
    loglik = -0.5 * q * n * math.log(2.0 * math.pi * var) - 0.5 * (n - k) + mix
    penalty = (k - 1 + q * k + 1) * math.log(n)
    return BicScore(k, loglik, penalty)


def estimate_kappa(r_bar):
    """Approximate von Mises concentration from a mean resultant length.

    Uses ``kappa = 1 / (2 (1 - r_bar))``; values of ``r_bar`` within 1e-12 of
    one return ``KAPPA_MAX``.
    """
    r = float(r_bar)
    if not 0.0 <= r <= 1.0:
        raise InvalidInputError(f"resultant length must lie in [0, 1], got {r_bar}")
    if r >= _R_CAP:
        return KAPPA_MAX
    return 1.0 / (2.0 * (1.0 - r))


def circular_bic(space, targets, clustering):
    """BIC of a clustering under a shared-concentration von Mises mixture."""
    t = as_targets(space, targets)
    if not space.is_circular:
        raise InvalidInputError("circular_bic needs a circular target space")
    n = t.shape[0]
    k = clustering.k_effective
    loss_sum, mix = _terms(space, t, clustering)
    return _circular_score(n, k, loss_sum, mix)


def _circular_score(n, k, loss_sum, mix):
    cos_sum = n - loss_sum
    r_bar = min(max(cos_sum / n, 0.0), 1.0)
    kappa = estimate_kappa(r_bar)
    loglik = -n * (math.log(2.0 * math.pi) + log_i0(kappa)) + kappa * cos_sum + mix
    penalty = 2.0 * k * math.log(n)
    return BicScore(k, loglik, penalty)


def bic(space, targets, clustering):
    """Space-appropriate BIC score."""
    if space.is_circular:
        return circular_bic(space, targets, clustering)
    return euclidean_bic(space, targets, clustering)


def _seed_int(seed):
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(2**63))
    return 0 if seed is None else int(seed)


def candidate_ks(targets, k_min, k_max):
    """Cluster counts worth trying: capped at ``n - 1`` and the distinct-target count."""
    n = targets.shape[0]
    n_distinct = count_distinct(targets)
    return range(k_min, min(k_max, n - 1, n_distinct) + 1)


@njit(cache=True)
def _distinct_init(t, k, order):
    """First ``k`` distinct rows of ``t`` taken in ``order``."""
    q = t.shape[1]
    c = np.empty((k, q))
    got = 0
    for i in order:
        fresh = True
        for j in range(got):
            same = True
            for m in range(q):
                if t[i, m] != c[j, m]:
                    same = False
                    break
            if same:
                fresh = False
                break
        if fresh:
            c[got] = t[i]
            got += 1
            if got == k:
                break
    return c


@njit(cache=True)
def _sweep(t, circular, k_lo, k_hi, state, n_init, max_iters, eps, kappa_max, r_cap):
    n, q = t.shape
    nk = k_hi - k_lo + 1
    labels = np.empty((nk, n), np.int64)
    cents = np.zeros((nk, k_hi, q))
    kk = np.zeros(nk, np.int64)
    objective = np.zeros(nk)
    loglik = np.zeros(nk)
    penalty = np.zeros(nk)
    valid = np.zeros(nk, np.bool_)
    hist = np.zeros((nk, max_iters + 1))
    hlen = np.zeros(nk, np.int64)
    log_n = math.log(n)
    for idx in range(nk):
        k = k_lo + idx
        np.random.seed((state + k * 2654435761) % 4294967296)
        best = np.inf
        for _ in range(n_init):
            c0 = _distinct_init(t, k, np.random.permutation(n))
            lab, c, h = _lloyd(t, c0, circular, max_iters, eps)
            lab, c, obj, sizes = _compact(t, lab, c, circular)
            if obj < best:
                best = obj
                m = c.shape[0]
                labels[idx] = lab
                cents[idx, :m] = c
                kk[idx] = m
                objective[idx] = obj
                hist[idx, :h.shape[0]] = h
                hlen[idx] = h.shape[0]
                mix = -n * log_n
                for j in range(m):
                    mix += sizes[j] * math.log(sizes[j])
                loglik[idx] = mix
        m = kk[idx]
        mix = loglik[idx]
        if circular:
            cos_sum = n - objective[idx]
            r = min(max(cos_sum / n, 0.0), 1.0)
            kappa = kappa_max if r >= r_cap else 1.0 / (2.0 * (1.0 - r))
            loglik[idx] = -n * (math.log(2.0 * math.pi) + _log_i0(kappa)) + kappa * cos_sum + mix
            penalty[idx] = 2.0 * m * log_n
            valid[idx] = True
        elif n > m and objective[idx] > 0.0:
            var = objective[idx] / (n - m)
            loglik[idx] = -0.5 * q * n * math.log(2.0 * math.pi * var) - 0.5 * (n - m) + mix
            penalty[idx] = (m - 1 + q * m + 1) * log_n
            valid[idx] = True
    return labels, cents, kk, objective, loglik, penalty, valid, hist, hlen


def bic_curve(space, targets, k_min=2, k_max=40, seed=None,
              max_iters=DEFAULT_MAX_ITERS, n_init=10):
    """Run k-means and score every candidate K.

    Returns a list of ``(clustering, score)`` pairs; candidates whose BIC is
    not computable are omitted. Each K reseeds its own stream from
    ``(seed, K)``. With ``n_init > 1`` the lowest-objective run per K is kept.
    """
    if not 2 <= k_min <= k_max:
        raise InvalidInputError(f"need 2 <= k_min <= k_max, got {k_min}, {k_max}")
    if n_init < 1:
        raise InvalidInputError(f"n_init must be >= 1, got {n_init}")
    t = as_targets(space, targets)
    if t.shape[0] == 0:
        raise InvalidInputError("no targets")
    ks = candidate_ks(t, k_min, k_max)
    if len(ks) == 0:
        return []
    state = int(np.random.SeedSequence(_seed_int(seed)).generate_state(1)[0])
    labels, cents, kk, obj, loglik, penalty, valid, hist, hlen = _sweep(
        t, space.is_circular, ks.start, ks.stop - 1, state, int(n_init), int(max_iters),
        DEGENERATE_EPS, KAPPA_MAX, _R_CAP)
    out = []
    for i in np.flatnonzero(valid):
        m = int(kk[i])
        clustering = Clustering(labels[i].copy(), cents[i, :m].copy(), float(obj[i]),
                                tuple(hist[i, :hlen[i]].tolist()))
        out.append((clustering, BicScore(m, float(loglik[i]), float(penalty[i]))))
    return out


def select_k(space, targets, k_min=2, k_max=40, seed=None,
             max_iters=DEFAULT_MAX_ITERS, n_init=10):
    """Clustering with the smallest BIC over ``K in [k_min, k_max]``.

    Returns ``(clustering, score)``. Ties keep the smaller K. Raises
    SelectionFailedError when no candidate is computable.
    """
    curve = bic_curve(space, targets, k_min, k_max, seed, max_iters, n_init)
    if not curve:
        raise SelectionFailedError("no cluster count produced a computable BIC")
    return min(curve, key=lambda cs: cs[1].bic)
