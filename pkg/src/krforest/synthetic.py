"""Synthetic regression problems with known structure."""
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .exceptions import InvalidInputError
from .targets import TargetSpace, wrap_angle


@dataclass(frozen=True)
class PiecewiseConstant:
    """Constant target per input region plus Gaussian noise.

    Regions are the cells of a Voronoi partition of the feature space around
    ``regions`` random centers, so their boundaries are oblique hyperplanes.
    Region constants are drawn uniformly from ``[-90, 90]^q``.
    """

    regions: int = 10
    noise_sigma: float = 1.0
    q: int = 2


@dataclass(frozen=True)
class GaussianBlobs:
    """``k`` equal-size target clusters centered at ``0, separation, 2*separation, ...``.

    Features are noisy copies of a random per-cluster center in ``R^p``.
    """

    k: int = 3
    separation: float = 50.0
    sigma: float = 1.0


@dataclass(frozen=True)
class CircularBlobs:
    """``k`` equal-size angular clusters at ``360 / k`` degree spacing."""

    k: int = 2
    sigma_deg: float = 5.0


@dataclass(frozen=True)
class RotationField:
    """Circular target whose features are a noisy nonlinear embedding of the angle.

    The angle is uniform on the circle unless ``spread_deg`` is given, in which
    case it is normal around ``center_deg`` with that standard deviation.
    Features are a random linear mix of the first two harmonics of the angle
    after perturbing it by ``noise_deg``.
    """

    noise_deg: float = 5.0
    center_deg: float = 0.0
    spread_deg: float = None
    feature_noise: float = 0.05


@dataclass(frozen=True)
class SyntheticSpec:
    generator: object = field(default_factory=PiecewiseConstant)
    n: int = 200
    p: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise InvalidInputError("n and p must be >= 1")


def _cluster_features(rng, labels, k, p):
    centers = rng.normal(scale=3.0, size=(k, p))
    return centers[labels] + rng.normal(size=(len(labels), p))


def generate(spec):
    """Deterministically draw a :class:`Dataset` from ``spec``."""
    g = spec.generator
    rng = np.random.default_rng(spec.seed)
    n, p = spec.n, spec.p

    if isinstance(g, PiecewiseConstant):
        centers = rng.normal(size=(g.regions, p))
        values = rng.uniform(-90.0, 90.0, size=(g.regions, g.q))
        X = rng.normal(size=(n, p))
        d = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        region = np.argmin(d, axis=1)
        T = values[region] + g.noise_sigma * rng.normal(size=(n, g.q))
        return Dataset(X, T, TargetSpace.euclidean(g.q))

    if isinstance(g, GaussianBlobs):
        labels = np.arange(n) % g.k
        T = g.separation * labels + g.sigma * rng.normal(size=n)
        X = _cluster_features(rng, labels, g.k, p)
        return Dataset(X, T[:, None], TargetSpace.euclidean(1))

    if isinstance(g, CircularBlobs):
        labels = np.arange(n) % g.k
        deg = 360.0 / g.k * labels + g.sigma_deg * rng.normal(size=n)
        X = _cluster_features(rng, labels, g.k, p)
        return Dataset(X, wrap_angle(np.radians(deg))[:, None], TargetSpace.circular())

    if isinstance(g, RotationField):
        if g.spread_deg is None:
            theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        else:
            theta = np.radians(g.center_deg + g.spread_deg * rng.normal(size=n))
        theta = wrap_angle(theta)
        phi = theta + np.radians(g.noise_deg) * rng.normal(size=n)
        basis = np.column_stack([np.cos(phi), np.sin(phi), np.cos(2 * phi), np.sin(2 * phi)])
        mix = rng.normal(size=(4, p))
        X = basis @ mix + g.feature_noise * rng.normal(size=(n, p))
        return Dataset(X, theta[:, None], TargetSpace.circular())

    raise InvalidInputError(f"unknown generator {g!r}")
