"""
Choosing the number of clusters
===============================

k-means is run for a range of cluster counts and each result is scored
with BIC. The minimum picks the count, here for three Gaussian blobs and
for two opposite groups of angles.
"""
import numpy as np

from krforest import TargetSpace, select_k
from krforest.model_selection import bic_curve

rng = np.random.default_rng(0)
blobs = np.concatenate([rng.normal(m, 1.0, 20) for m in (0.0, 50.0, 100.0)])
line = TargetSpace.euclidean(1)

# BIC for every candidate K; the curve drops sharply until K reaches 3
for clustering, score in bic_curve(line, blobs, 2, 8, seed=0):
    print(f"K={clustering.k_effective}  bic={score.bic:9.2f}")

best, score = select_k(line, blobs, 2, 40, seed=0)
print("selected K:", best.k_effective, "centroids:", np.round(np.sort(best.centroids[:, 0]), 2))

# the same search on angles uses a von Mises mixture
angles = np.radians(np.concatenate([rng.normal(0, 5, 20), rng.normal(180, 5, 20)]))
best, _ = select_k(TargetSpace.circular(), angles, 2, 20, seed=0)
print("circular selected K:", best.k_effective,
      "centroids (deg):", np.round(np.sort(np.degrees(best.centroids[:, 0])) % 360, 1))
