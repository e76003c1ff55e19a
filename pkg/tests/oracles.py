"""Independent reference implementations used as test oracles.

Nothing here imports the package's numerical code; each function is a
direct, slow evaluation of the quantity it names.
"""
import itertools
import math

import numpy as np
from scipy import integrate, special


def cluster_cost(points, circular):
    """Loss of one group about its own optimal center."""
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return 0.0
    if circular:
        # sum(1 - cos(t - a)) is minimized at the mean direction with value n - R
        return len(pts) - math.hypot(np.sin(pts).sum(), np.cos(pts).sum())
    return float(((pts - pts.mean(axis=0)) ** 2).sum())


def best_partition(targets, k, circular):
    """Minimum total cost over all assignments into at most ``k`` groups."""
    t = np.asarray(targets, dtype=float)
    if t.ndim == 1:
        t = t[:, None]
    vals = t[:, 0] if circular else t
    best = math.inf
    for labels in itertools.product(range(k), repeat=len(t)):
        labels = np.array(labels)
        cost = sum(cluster_cost(vals[labels == j], circular) for j in range(k))
        best = min(best, cost)
    return best


def ovr_gradient_descent(X, y, k, c, tol=1e-8, max_steps=2_000_000):
    """Optimal squared-hinge one-vs-rest objectives by plain gradient descent.

    Uses the global Lipschitz bound of the gradient as a fixed step and stops
    once the squared gradient norm falls below ``tol``. Returns one optimal
    objective value per class.
    """
    Xb = np.hstack([X, np.ones((len(X), 1))])
    lip = 1.0 + 2.0 * c * np.linalg.eigvalsh(Xb.T @ Xb).max()
    out = []
    for cls in range(k):
        s = np.where(y == cls, 1.0, -1.0)
        w = np.zeros(Xb.shape[1])
        for _ in range(max_steps):
            slack = np.maximum(0.0, 1.0 - s * (Xb @ w))
            g = w - 2.0 * c * Xb.T @ (s * slack)
            if g @ g < tol:
                break
            w -= g / lip
        slack = np.maximum(0.0, 1.0 - s * (Xb @ w))
        out.append(0.5 * w @ w + c * slack @ slack)
    return np.array(out)


def ovr_objective(w, X, y_sign, c):
    Xb = np.hstack([X, np.ones((len(X), 1))])
    slack = np.maximum(0.0, 1.0 - y_sign * (Xb @ w))
    return 0.5 * w @ w + c * slack @ slack


def euclidean_bic(targets, labels):
    """Gaussian-mixture BIC of a hard clustering, from the printed closed form."""
    t = np.asarray(targets, dtype=float)
    if t.ndim == 1:
        t = t[:, None]
    n, q = t.shape
    ks = sorted(set(labels.tolist()))
    k = len(ks)
    sse = sum(((t[labels == j] - t[labels == j].mean(axis=0)) ** 2).sum() for j in ks)
    var = sse / (n - k)
    sizes = [int((labels == j).sum()) for j in ks]
    lnl = (-q * n / 2 * math.log(2 * math.pi * var) - (n - k) / 2
           + sum(m * math.log(m) for m in sizes) - n * math.log(n))
    penalty = (k - 1 + q * k + 1) * math.log(n)
    return lnl, penalty, -2 * lnl + penalty


def log_i0_quadrature(x):
    """``ln I0(x)`` from the integral ``(1/pi) int_0^pi exp(x cos t) dt``, scaled by ``exp(-x)``."""
    val, _ = integrate.quad(lambda s: math.exp(x * (math.cos(s) - 1.0)), 0.0, math.pi,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return x + math.log(val / math.pi)


def log_i1_quadrature(x):
    val, _ = integrate.quad(lambda s: math.exp(x * (math.cos(s) - 1.0)) * math.cos(s),
                            0.0, math.pi, epsabs=0.0, epsrel=1e-13, limit=200)
    return x + math.log(val / math.pi)


def circular_bic(angles, labels, kappa_cap=5e11):
    """Von-Mises-mixture BIC of a hard clustering with a shared concentration."""
    a = np.asarray(angles, dtype=float).ravel()
    n = len(a)
    ks = sorted(set(labels.tolist()))
    k = len(ks)
    centers = {j: math.atan2(np.sin(a[labels == j]).mean(), np.cos(a[labels == j]).mean())
               for j in ks}
    cos_sum = sum(math.cos(a[i] - centers[labels[i]]) for i in range(n))
    r_bar = cos_sum / n
    kappa = kappa_cap if r_bar >= 1 - 1e-12 else 1.0 / (2.0 * (1.0 - r_bar))
    log_i0 = math.log(special.i0e(kappa)) + kappa
    sizes = [int((labels == j).sum()) for j in ks]
    lnl = (-n * (math.log(2 * math.pi) + log_i0) + kappa * cos_sum
           + sum(m * math.log(m) for m in sizes) - n * math.log(n))
    penalty = 2 * k * math.log(n)
    return lnl, penalty, -2 * lnl + penalty, kappa


def best_threshold(x, t, circular):
    """Exhaustive search over midpoints of a single feature column."""
    xs = np.unique(x)
    best = (math.inf, None)
    for lo, hi in zip(xs[:-1], xs[1:]):
        thr = 0.5 * (lo + hi)
        left, right = t[x <= thr], t[x > thr]
        cost = cluster_cost(left, circular) + cluster_cost(right, circular)
        if cost < best[0] - 1e-12:
            best = (cost, thr)
    return best
