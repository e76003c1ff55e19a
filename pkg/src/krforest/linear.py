"""One-vs-rest linear classifier with L2 regularization and squared hinge loss.

Each class ``k`` gets a weight vector minimizing::

    J(w) = 0.5 * ||w||^2 + C * sum_i max(0, 1 - l_i * w @ x_i)^2

where ``x_i`` carries an appended constant 1 (bias) and ``l_i`` is +1 for
members of class ``k`` and -1 otherwise. ``J`` is strongly convex and
piecewise quadratic, so a generalized Newton iteration with a backtracking
line search converges in a handful of steps. All classes are solved together
in one batched iteration.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError

DEFAULT_TOLERANCE = 1e-3
MAX_NEWTON_ITERS = 1000


@dataclass(frozen=True)
class OvrClassifier:
    """``weights[k]`` holds the ``p`` feature weights of class ``k`` followed by its bias."""

    weights: np.ndarray
    penalty_c: float = 1.0

    @property
    def num_classes(self):
        return self.weights.shape[0]

    @property
    def num_features(self):
        return self.weights.shape[1] - 1

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.num_features:
            raise InvalidInputError(
                f"expected {self.num_features} features, got {X.shape[-1]}")
        return X @ self.weights[:, :-1].T + self.weights[:, -1]


def with_bias(X):
    return np.hstack([X, np.ones((X.shape[0], 1))])


def objective(w, Xb, signs, penalty_c):
    """Primal objective ``J(w)`` on bias-augmented features ``Xb``."""
    slack = np.maximum(0.0, 1.0 - signs * (Xb @ w))
    return 0.5 * float(w @ w) + penalty_c * float(slack @ slack)


def _solve_ovr(Xb, signs, penalty_c, tolerance, max_iter):
    """Generalized Newton on all one-vs-rest problems at once.

    ``signs`` is ``(n, k)``; column ``j`` holds the +-1 targets of class ``j``.
    """
    k, d = signs.shape[1], Xb.shape[1]
    W = np.zeros((k, d))
    margin = np.zeros_like(signs)
    eye = np.eye(d)
    live = np.arange(k)
    for _ in range(max_iter):
        S, M = signs[:, live], margin[:, live]
        slack = np.maximum(0.0, 1.0 - M)
        Wl = W[live]
        value = 0.5 * np.einsum("kd,kd->k", Wl, Wl) + penalty_c * np.einsum("nk,nk->k", slack, slack)
        grad = Wl - 2.0 * penalty_c * (S * slack).T @ Xb
        # strong convexity (modulus 1) bounds the gap by ||grad||^2 / 2
        done = np.einsum("kd,kd->k", grad, grad) <= tolerance * value
        if done.all():
            break
        keep = ~done
        live, S, M, Wl, value, grad = live[keep], S[:, keep], M[:, keep], Wl[keep], value[keep], grad[keep]
        active = (M < 1.0).astype(np.float64)
        masked = active.T[:, :, None] * Xb[None, :, :]
        hess = eye + 2.0 * penalty_c * np.matmul(masked.transpose(0, 2, 1), Xb)
        step = -np.linalg.solve(hess, grad[:, :, None])[:, :, 0]
        slope = np.einsum("kd,kd->k", grad, step)
        dmargin = S * (Xb @ step.T)
        t = np.ones(len(live))
        pending = np.ones(len(live), dtype=bool)
        new_W, new_M = Wl.copy(), M.copy()
        while pending.any():
            idx = np.flatnonzero(pending)
            w_trial = Wl[idx] + t[idx, None] * step[idx]
            m_trial = M[:, idx] + t[idx] * dmargin[:, idx]
            sl = np.maximum(0.0, 1.0 - m_trial)
            trial = (0.5 * np.einsum("kd,kd->k", w_trial, w_trial)
                     + penalty_c * np.einsum("nk,nk->k", sl, sl))
            ok = (trial <= value[idx] + 0.01 * t[idx] * slope[idx]) | (t[idx] < 1e-12)
            acc = idx[ok]
            new_W[acc] = w_trial[ok]
            new_M[:, acc] = m_trial[:, ok]
            pending[acc] = False
            t[idx[~ok]] *= 0.5
        W[live] = new_W
        margin[:, live] = new_M
    return W


def train_ovr(features, labels, num_classes=None, penalty_c=1.0,
              tolerance=DEFAULT_TOLERANCE, max_iter=MAX_NEWTON_ITERS):
    """Fit one squared-hinge linear classifier per class.

    Parameters
    ----------
    features : array_like, shape (n, p)
    labels : array_like of int, shape (n,)
        Class indices in ``[0, num_classes)``.
    num_classes : int, optional
        Defaults to ``labels.max() + 1``. Classes absent from ``labels`` are
        trained against all-negative targets.
    penalty_c : float
    tolerance : float
        Each returned weight vector satisfies ``J(w) - J* <= tolerance * J*``.

    Returns
    -------
    OvrClassifier
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] == 0:
        raise InvalidInputError("features must be a non-empty 2-D array")
    if y.shape != (X.shape[0],):
        raise InvalidInputError("labels must have one entry per sample")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("features contain non-finite values")
    if penalty_c <= 0:
        raise InvalidInputError("penalty_c must be positive")
    k = int(y.max()) + 1 if num_classes is None else int(num_classes)
    if k < 2:
        raise InvalidInputError("need at least two classes")
    if y.min() < 0 or y.max() >= k:
        raise InvalidInputError(f"labels must lie in [0, {k})")

    Xb = with_bias(X)
    signs = np.where(y[:, None] == np.arange(k)[None, :], 1.0, -1.0)
    W = _solve_ovr(Xb, signs, float(penalty_c), tolerance, max_iter)
    return OvrClassifier(W, float(penalty_c))


def predict(classifier, X):
    """Index of the highest-scoring class; ties go to the lowest index.

    Accepts a single sample of shape ``(p,)`` or a batch ``(n, p)``.
    """
    scores = classifier.decision_function(X)
    out = np.argmax(scores, axis=-1)
    return int(out) if np.ndim(out) == 0 else out
