"""Target geometries: Euclidean R^q and the unit circle.

Targets are stored as float arrays of shape ``(n, q)``. Circular targets use
``q == 1`` and hold angles in radians, normalized to ``[0, 2*pi)``.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateMeanError, InvalidInputError

TWO_PI = 2.0 * np.pi

#: Resultant length below which a circular mean is considered undefined.
DEGENERATE_EPS = 1e-12

EUCLIDEAN = "euclidean"
CIRCULAR = "circular"


@dataclass(frozen=True)
class TargetSpace:
    """Geometry of the regression targets.

    Use :meth:`euclidean` or :meth:`circular` rather than the constructor.
    """

    kind: str
    q: int = 1

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, CIRCULAR):
            raise InvalidInputError(f"unknown target space kind {self.kind!r}")
        if self.kind == EUCLIDEAN and (int(self.q) != self.q or self.q < 1):
            raise InvalidInputError(f"Euclidean dimension must be >= 1, got {self.q}")
        if self.kind == CIRCULAR and self.q != 1:
            raise InvalidInputError("circular targets are one-dimensional")

    @classmethod
    def euclidean(cls, q=1):
        return cls(EUCLIDEAN, int(q))

    @classmethod
    def circular(cls):
        return cls(CIRCULAR, 1)

    @property
    def is_circular(self):
        return self.kind == CIRCULAR

    def __str__(self):
        return "circular" if self.is_circular else f"euclidean(q={self.q})"


def wrap_angle(a):
    """Map angles in radians onto ``[0, 2*pi)``."""
    out = np.mod(a, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    return np.where(out >= TWO_PI, 0.0, out)


def as_point(space, values):
    """Validate a single target point and return it as a ``(q,)`` array."""
    p = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if p.ndim != 1 or p.shape[0] != space.q:
        raise InvalidInputError(
            f"target point must have {space.q} value(s), got shape {np.shape(values)}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("target point contains non-finite values")
    if space.is_circular:
        p = wrap_angle(p)
    return p


def as_targets(space, targets):
    """Validate a target collection and return it as an ``(n, q)`` array.

    A 1-D array is accepted when ``q == 1``. Circular values are wrapped.
    """
    t = np.asarray(targets, dtype=np.float64)
    if t.ndim == 1 and space.q == 1:
        t = t[:, None]
    if t.ndim != 2 or t.shape[1] != space.q:
        raise InvalidInputError(
            f"expected targets of shape (n, {space.q}), got {np.shape(targets)}")
    if not np.all(np.isfinite(t)):
        raise InvalidInputError("targets contain non-finite values")
    if space.is_circular:
        t = wrap_angle(t)
    return t


def loss(space, t1, t2):
    """Loss between target points (broadcasts over leading axes).

    Squared Euclidean distance, or ``1 - cos(t1 - t2)`` on the circle.
    """
    a = np.asarray(t1, dtype=np.float64)
    b = np.asarray(t2, dtype=np.float64)
    if a.shape[-1:] != (space.q,) or b.shape[-1:] != (space.q,):
        raise InvalidInputError(
            f"dimension mismatch: {a.shape} vs {b.shape} in {space}")
    if space.is_circular:
        out = 1.0 - np.cos(a[..., 0] - b[..., 0])
    else:
        d = a - b
        out = np.einsum("...i,...i->...", d, d)
    return float(out) if np.ndim(out) == 0 else out


def pairwise_loss(space, points, centers):
    """``(n, k)`` matrix of losses between every point and every center."""
    if space.is_circular:
        return 1.0 - np.cos(points[:, 0][:, None] - centers[:, 0][None, :])
    d = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", d, d)


def resultant_length(angles):
    """Length of the mean unit vector of a set of angles (radians)."""
    a = np.asarray(angles, dtype=np.float64).ravel()
    if a.size == 0:
        raise InvalidInputError("resultant length of an empty set")
    return float(np.hypot(np.mean(np.sin(a)), np.mean(np.cos(a))))


def circular_mean(angles):
    """Mean direction ``atan2(mean sin, mean cos)`` in ``[0, 2*pi)``.

    Raises DegenerateMeanError when the resultant length is below
    ``DEGENERATE_EPS``.
    """
    a = np.asarray(angles, dtype=np.float64).ravel()
    if a.size == 0:
        raise InvalidInputError("mean of an empty set")
    s, c = np.mean(np.sin(a)), np.mean(np.cos(a))
    if np.hypot(s, c) < DEGENERATE_EPS:
        raise DegenerateMeanError("circular mean undefined: resultant length is ~0")
    return float(wrap_angle(np.arctan2(s, c)))


def mean(space, points):
    """Loss-minimizing mean of ``points`` as a ``(q,)`` array."""
    t = np.asarray(points, dtype=np.float64)
    if t.ndim == 1 and space.q == 1:
        t = t[:, None]
    if t.ndim != 2 or t.shape[1] != space.q:
        raise InvalidInputError(f"expected points of shape (n, {space.q})")
    if t.shape[0] == 0:
        raise InvalidInputError("mean of an empty set")
    if space.is_circular:
        return np.array([circular_mean(t[:, 0])])
    return t.mean(axis=0)


def total_loss(space, points, center):
    """Sum of losses from every point to ``center``."""
    return float(np.sum(loss(space, np.asarray(points, dtype=np.float64), center)))


def angular_error_deg(truth, pred):
    """Shorter-arc difference in degrees between angles given in radians."""
    d = np.abs(np.mod(np.asarray(truth) - np.asarray(pred), TWO_PI))
    return np.degrees(np.minimum(d, TWO_PI - d))
