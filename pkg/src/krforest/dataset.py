from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .targets import TargetSpace, as_targets


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix ``(n, p)`` paired with targets ``(n, q)`` in ``space``.

    ``groups`` optionally holds one integer group id per sample, used for
    leave-one-group-out cross-validation.
    """

    features: np.ndarray
    targets: np.ndarray
    space: TargetSpace
    groups: np.ndarray = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2:
            raise InvalidInputError("features must be a 2-D array")
        if not np.all(np.isfinite(X)):
            raise InvalidInputError("features contain non-finite values")
        T = as_targets(self.space, self.targets)
        if T.shape[0] != X.shape[0]:
            raise InvalidInputError(
                f"{X.shape[0]} feature rows but {T.shape[0]} targets")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", T)
        if self.groups is not None:
            g = np.asarray(self.groups)
            if g.shape != (X.shape[0],):
                raise InvalidInputError("groups must have one entry per sample")
            object.__setattr__(self, "groups", g.astype(np.int64))

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    def subset(self, index):
        index = np.asarray(index)
        groups = None if self.groups is None else self.groups[index]
        return Dataset(self.features[index], self.targets[index], self.space, groups)
