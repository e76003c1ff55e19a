"""
Predicting angles and saving the model
======================================

A forest trained on angles averages its trees on the circle. The trained
model is written to a checksummed file and read back bit for bit.
"""
import tempfile
from pathlib import Path

import numpy as np

from krforest import ForestConfig, TreeConfig, evaluate, load_model, save_model, train_forest
from krforest.forest import forest_predict
from krforest.synthetic import RotationField, SyntheticSpec, generate
from krforest.tree import KrfAdaptive

# orientations packed around the seam at 0 degrees
data = generate(SyntheticSpec(RotationField(5.0, 0.0, 8.0, 0.05), n=400, p=6, seed=1))
train, test = data.subset(np.arange(300)), data.subset(np.arange(300, 400))

forest = train_forest(train, ForestConfig(10, 1.0, TreeConfig(KrfAdaptive(2, 20)), seed=0))
print("test MAE (deg):", round(evaluate(forest, test).mae, 2))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "rotation.krf"
    save_model(forest, path)
    print("header:", path.read_bytes().split(b"\n", 1)[0].decode()[:40], "...")
    again = load_model(path)
    same = np.array_equal(forest_predict(forest, test.features),
                          forest_predict(again, test.features))
    print("identical predictions after reload:", same)
