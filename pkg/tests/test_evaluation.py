import numpy as np
import pytest

from krforest.dataset import Dataset
from krforest.evaluation import (absolute_errors, cross_validate, evaluate, group_indices,
                                 kfold_indices, report_from_errors, truncated_mae)
from krforest.exceptions import InvalidInputError
from krforest.forest import ForestConfig, train_forest
from krforest.synthetic import GaussianBlobs, RotationField, SyntheticSpec, generate
from krforest.targets import TargetSpace
from krforest.tree import KrfFixed, TreeConfig

CIRC = TargetSpace.circular()
rad = np.radians


def test_wraparound_error():
    e = absolute_errors(CIRC, rad([[10.0]]), rad([[350.0]]))
    assert e[0, 0] == pytest.approx(20.0)


def test_errors_one_to_ten():
    r = report_from_errors(np.arange(1.0, 11.0))
    assert r.mae == pytest.approx(5.5)
    assert r.mae_p90 == pytest.approx(5.0)
    assert r.mae_p95 == pytest.approx(5.5)
    assert r.n == 10


def test_perfect_predictions():
    r = report_from_errors(np.zeros((7, 2)))
    assert r.mae == r.mae_p90 == r.mae_p95 == 0.0


def test_truncated_mae_uses_ceiling():
    assert truncated_mae([1, 2, 3], 0.9) == pytest.approx(2.0)
    assert truncated_mae([5.0], 0.9) == 5.0
    with pytest.raises(InvalidInputError):
        truncated_mae([], 0.9)


def test_per_dimension_mae():
    r = report_from_errors(np.array([[1.0, 3.0], [3.0, 5.0]]))
    assert r.mae_per_dim == (2.0, 4.0)
    assert r.mae == 3.0


@pytest.mark.parametrize("seed", range(20))
def test_report_ordering(seed):
    g = np.random.default_rng(seed)
    r = report_from_errors(np.abs(g.standard_cauchy(size=(int(g.integers(1, 200)), 2))))
    assert r.mae_p90 <= r.mae_p95 + 1e-12 <= r.mae + 2e-12


def test_circular_errors_bounded():
    g = np.random.default_rng(0)
    e = absolute_errors(CIRC, g.uniform(-20, 20, (500, 1)), g.uniform(-20, 20, (500, 1)))
    assert e.min() >= 0 and e.max() <= 180


def test_evaluate_forest():
    data = generate(SyntheticSpec(RotationField(5.0), n=120, p=4, seed=1))
    forest = train_forest(data.subset(np.arange(90)), ForestConfig(5))
    r = evaluate(forest, data.subset(np.arange(90, 120)))
    assert r.n == 30 and 0 <= r.mae_p90 <= r.mae_p95 <= r.mae <= 180


def test_evaluate_space_mismatch():
    data = generate(SyntheticSpec(RotationField(5.0), n=40, p=2, seed=1))
    forest = train_forest(data, ForestConfig(2))
    euclid = Dataset(data.features, data.targets, TargetSpace.euclidean(1))
    with pytest.raises(InvalidInputError):
        evaluate(forest, euclid)


def test_kfold_partition():
    folds = kfold_indices(23, 5, seed=3)
    assert len(folds) == 5
    val = np.sort(np.concatenate([v for _, v in folds]))
    np.testing.assert_array_equal(val, np.arange(23))
    for tr, va in folds:
        assert not set(tr) & set(va) and len(tr) + len(va) == 23
    assert [v.tolist() for _, v in folds] == [v.tolist() for _, v in kfold_indices(23, 5, 3)]
    with pytest.raises(InvalidInputError):
        kfold_indices(10, 1)


def test_four_groups_four_folds():
    groups = np.repeat([7, 2, 9, 4], 5)
    folds = group_indices(groups)
    assert len(folds) == 4
    for tr, va in folds:
        assert len(set(groups[va])) == 1 and groups[va][0] not in set(groups[tr])


def test_single_config_grid():
    data = generate(SyntheticSpec(GaussianBlobs(3), n=40, p=2, seed=0))
    cfg = ForestConfig(2)
    res = cross_validate(data, [cfg], folds=3)
    assert res.best_index == 0 and res.best_config is cfg and len(res.scores) == 1


def test_k_grid_selects_minimum():
    data = generate(SyntheticSpec(GaussianBlobs(5, 20.0, 1.0), n=150, p=3, seed=2))
    grid = [ForestConfig(4, 1.0, TreeConfig(KrfFixed(k))) for k in (2, 5, 10)]
    res = cross_validate(data, grid, folds=3, seed=1)
    assert res.scores[res.best_index] == min(res.scores)
    assert res.best_config is grid[res.best_index]
    again = cross_validate(data, grid, folds=3, seed=1)
    assert again.scores == res.scores


def test_ties_keep_first():
    data = generate(SyntheticSpec(GaussianBlobs(2), n=30, p=2, seed=0))
    cfg = ForestConfig(2)
    res = cross_validate(data, [cfg, cfg], folds=3)
    assert res.best_index == 0


def test_group_cv_and_empty_fold_warning():
    data = generate(SyntheticSpec(GaussianBlobs(2), n=30, p=2, seed=0))
    grouped = Dataset(data.features, data.targets, data.space, groups=np.arange(30) % 3)
    res = cross_validate(grouped, [ForestConfig(2)], by_group=True)
    assert len(res.scores) == 1
    single = Dataset(data.features, data.targets, data.space, groups=np.zeros(30, int))
    with pytest.warns(UserWarning, match="empty"):
        with pytest.raises(InvalidInputError):
            cross_validate(single, [ForestConfig(2)], by_group=True)
    with pytest.raises(InvalidInputError):
        cross_validate(data, [ForestConfig(2)], by_group=True)
    with pytest.raises(InvalidInputError):
        cross_validate(data, [])
