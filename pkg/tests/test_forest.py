import numpy as np
import pytest

from krforest.dataset import Dataset
from krforest.exceptions import InvalidInputError
from krforest.forest import (Forest, ForestConfig, aggregate, forest_predict, subsample_size,
                             train_forest, tree_rng)
from krforest.synthetic import PiecewiseConstant, RotationField, SyntheticSpec, generate
from krforest.targets import TargetSpace
from krforest.tree import (Binary, KrfAdaptive, KrfFixed, Leaf, TreeConfig, grow_tree, leaves,
                           tree_predict)

CIRC = TargetSpace.circular()
E1 = TargetSpace.euclidean(1)
rad = np.radians

EUC = generate(SyntheticSpec(PiecewiseConstant(5, 1.0, 2), n=120, p=4, seed=0))
ROT = generate(SyntheticSpec(RotationField(5.0), n=120, p=4, seed=0))
PROBE = np.random.default_rng(5).normal(size=(50, 4))


def test_config_validation():
    with pytest.raises(InvalidInputError):
        ForestConfig(num_trees=0)
    with pytest.raises(InvalidInputError):
        ForestConfig(bagging_ratio_beta=0.0)
    with pytest.raises(InvalidInputError):
        ForestConfig(bagging_ratio_beta=1.5)


def test_one_tree_full_data_equals_tree():
    cfg = ForestConfig(1, 1.0, TreeConfig(KrfFixed(3)), seed=4)
    forest = train_forest(EUC, cfg)
    # a full-size sample without replacement is the whole dataset
    tree = grow_tree(EUC, TreeConfig(KrfFixed(3), seed=int(_tree_seed(4, 0, len(EUC), 1.0))))
    np.testing.assert_array_equal(forest_predict(forest, PROBE), tree_predict(tree, PROBE))
    np.testing.assert_array_equal(forest_predict(forest, PROBE),
                                  tree_predict(forest.trees[0], PROBE))


def _tree_seed(seed, index, n, beta):
    rng = tree_rng(seed, index)
    rng.choice(n, size=subsample_size(n, beta), replace=False)
    return rng.integers(2**63)


def test_subsample_size_contract():
    data = generate(SyntheticSpec(PiecewiseConstant(4, 1.0, 1), n=100, p=3, seed=1))
    forest = train_forest(data, ForestConfig(20, 0.5, TreeConfig(min_samples_leaf=1000)))
    assert subsample_size(100, 0.5) == 50
    assert all(t.sample_count == 50 for t in forest.trees)
    assert subsample_size(7, 0.5) == 4
    assert subsample_size(3, 1e-9) == 1


@pytest.mark.parametrize("splitter", [KrfFixed(2), KrfAdaptive(2, 6), Binary()])
@pytest.mark.parametrize("data", [EUC, ROT], ids=["euclidean", "circular"])
def test_same_seed_identical_forests(splitter, data):
    cfg = ForestConfig(4, 0.7, TreeConfig(splitter), seed=11)
    a, b = train_forest(data, cfg), train_forest(data, cfg)
    np.testing.assert_array_equal(forest_predict(a, PROBE), forest_predict(b, PROBE))
    for ta, tb in zip(a.trees, b.trees):
        la, lb = leaves(ta), leaves(tb)
        assert len(la) == len(lb)
        for x, y in zip(la, lb):
            np.testing.assert_array_equal(x.estimate, y.estimate)


def test_parallel_equals_sequential():
    cfg = ForestConfig(4, 0.8, TreeConfig(KrfFixed(2)), seed=2)
    seq = forest_predict(train_forest(EUC, cfg, n_jobs=1), PROBE)
    par = forest_predict(train_forest(EUC, cfg, n_jobs=2), PROBE)
    np.testing.assert_array_equal(seq, par)


def test_different_seeds_differ():
    a = train_forest(EUC, ForestConfig(3, 0.7, seed=0))
    b = train_forest(EUC, ForestConfig(3, 0.7, seed=1))
    assert not np.array_equal(forest_predict(a, PROBE), forest_predict(b, PROBE))


def _stub(values, space):
    trees = tuple(Leaf(np.array(v, dtype=float), 1) for v in values)
    cfg = ForestConfig(len(trees))
    return Forest(trees, space, 2, cfg)


def test_circular_aggregation_examples():
    f = _stub([[rad(10)], [rad(350)]], CIRC)
    p = forest_predict(f, np.zeros(2))[0]
    assert min(p, 2 * np.pi - p) < 1e-12
    f = _stub([[1.0]] * 3, CIRC)
    assert forest_predict(f, np.zeros(2))[0] == pytest.approx(1.0)


def test_circular_degenerate_falls_back_with_warning():
    f = _stub([[0.0], [np.pi]], CIRC)
    with pytest.warns(RuntimeWarning):
        pred, flag = forest_predict(f, np.zeros(2), return_flags=True)
    assert flag and pred[0] == 0.0


def test_euclidean_mean_of_known_leaves():
    vals = [[1.0, 2.0], [3.0, -1.0], [10.0, 0.5], [-4.0, 4.0], [0.25, 0.0]]
    f = _stub(vals, TargetSpace.euclidean(2))
    manual = [sum(v[0] for v in vals) / 5, sum(v[1] for v in vals) / 5]
    np.testing.assert_allclose(forest_predict(f, np.zeros(2)), manual, rtol=1e-15)


@pytest.mark.parametrize("data", [EUC, ROT], ids=["euclidean", "circular"])
def test_permutation_invariance(data):
    forest = train_forest(data, ForestConfig(6, 0.7, seed=3))
    perm = Forest(tuple(reversed(forest.trees)), forest.space, forest.n_features, forest.config)
    a, b = forest_predict(forest, PROBE), forest_predict(perm, PROBE)
    if data.space.is_circular:
        d = np.abs(a - b) % (2 * np.pi)
        assert np.all(np.minimum(d, 2 * np.pi - d) < 1e-12)
    else:
        np.testing.assert_allclose(a, b, rtol=1e-15, atol=1e-12)


def test_aggregate_shapes():
    out, flags = aggregate(E1, np.ones((3, 4, 1)))
    assert out.shape == (4, 1) and not flags.any()


def test_predict_width_checked():
    forest = train_forest(EUC, ForestConfig(2))
    with pytest.raises(InvalidInputError):
        forest_predict(forest, np.zeros((3, 5)))


def test_empty_dataset_rejected():
    with pytest.raises(InvalidInputError):
        train_forest(Dataset(np.empty((0, 2)), np.empty((0, 1)), E1), ForestConfig())


def test_forest_improves_on_train_mean():
    train, test = EUC.subset(np.arange(90)), EUC.subset(np.arange(90, 120))
    forest = train_forest(train, ForestConfig(10, 0.8, TreeConfig(KrfFixed(2))))
    err = np.abs(forest_predict(forest, test.features) - test.targets).mean()
    base = np.abs(train.targets.mean(axis=0) - test.targets).mean()
    assert err < base
