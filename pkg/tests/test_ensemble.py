import numpy as np
import pytest

from rssikit.cart import RegressionTree, TreeParams
from rssikit.ensemble import ForestParams, GbtParams, GradientBoosting, RandomForest
from rssikit.errors import FitError, OobUnavailableError, PredictError
from rssikit.metrics import mse

from conftest import rand_xy


def test_degenerate_forest_equals_single_tree():
    X, y = rand_xy(0)
    tp = TreeParams(max_depth=6)
    forest = RandomForest(
        ForestParams(n_trees=1, tree=tp, m_features=2, bootstrap=False, seed=0)
    ).fit(X, y)
    tree = RegressionTree(tp).fit(X, y)
    Xq = np.random.default_rng(1).random((60, 2))
    np.testing.assert_array_equal(forest.predict(Xq), tree.predict(Xq))


def test_forest_deterministic_per_seed():
    X, y = rand_xy(1)
    a = RandomForest(ForestParams(n_trees=15, seed=9)).fit(X, y)
    b = RandomForest(ForestParams(n_trees=15, seed=9)).fit(X, y)
    assert a.to_text() == b.to_text()
    Xq = np.random.default_rng(2).random((40, 2))
    np.testing.assert_array_equal(a.predict(Xq), b.predict(Xq))


def test_forest_worker_count_invariant():
    X, y = rand_xy(2)
    a = RandomForest(ForestParams(n_trees=12, seed=4)).fit(X, y, n_workers=1)
    b = RandomForest(ForestParams(n_trees=12, seed=4)).fit(X, y, n_workers=3)
    assert a.to_text() == b.to_text()


def test_forest_prediction_is_tree_mean():
    X, y = rand_xy(3)
    forest = RandomForest(ForestParams(n_trees=10, seed=1)).fit(X, y)
    Xq = np.random.default_rng(3).random((30, 2))
    naive = np.zeros(30)
    for tree in forest.trees:  # naive loop oracle
        naive += tree.predict(Xq)
    naive /= len(forest.trees)
    np.testing.assert_allclose(forest.predict(Xq), naive, rtol=0, atol=1e-12)


def test_forest_beats_single_tree_across_seeds(field):
    # paired runs on the synthetic field, same TreeParams for both models
    from rssikit.dataset import build_dataset, split
    from rssikit.synthfield import generate_walk

    tp = TreeParams(max_depth=100)
    wins = 0
    for seed in range(10):
        data = build_dataset(generate_walk(field, 2_000, seed=seed))
        train, test = split(data, 800, seed)
        tree = RegressionTree(tp).fit(train.X, train.y)
        forest = RandomForest(ForestParams(n_trees=100, tree=tp, seed=seed)).fit(
            train.X, train.y
        )
        if mse(test.y, forest.predict(test.X)) <= mse(test.y, tree.predict(test.X)):
            wins += 1
    assert wins >= 9


def test_forest_seed_changes_model():
    X, y = rand_xy(4)
    a = RandomForest(ForestParams(n_trees=5, seed=0)).fit(X, y)
    b = RandomForest(ForestParams(n_trees=5, seed=1)).fit(X, y)
    assert a.to_text() != b.to_text()


def test_oob_requires_bootstrap():
    X, y = rand_xy(5)
    forest = RandomForest(ForestParams(n_trees=5, bootstrap=False)).fit(X, y)
    with pytest.raises(OobUnavailableError):
        forest.oob_error(X, y)


def test_oob_constant_targets():
    rng = np.random.default_rng(6)
    X = rng.random((50, 2))
    y = np.full(50, -63.0)
    forest = RandomForest(ForestParams(n_trees=20, seed=2)).fit(X, y)
    oob = forest.oob_error(X, y)
    assert oob.mae_db == 0.0
    assert oob.mse_db2 == mse(y, np.full(50, -63.0))  # both exactly zero


def test_oob_full_coverage_with_many_trees():
    X, y = rand_xy(7, n=60)
    forest = RandomForest(ForestParams(n_trees=100, seed=3)).fit(X, y)
    oob = forest.oob_error(X, y)
    assert oob.n == 60  # expected exclusion rate ~ e^-1 per tree


def test_forest_m_features_validation():
    X, y = rand_xy(8)
    with pytest.raises(FitError):
        RandomForest(ForestParams(m_features=3)).fit(X, y)


def test_gbt_single_full_stage_memorizes():
    rng = np.random.default_rng(9)
    X = rng.random((60, 2))
    y = rng.normal(-50, 5, 60)
    gbt = GradientBoosting(
        GbtParams(n_stages=1, learning_rate=1.0, tree=TreeParams(max_depth=1000))
    ).fit(X, y)
    np.testing.assert_allclose(gbt.predict(X), y, rtol=0, atol=1e-12)


def test_gbt_constant_targets():
    rng = np.random.default_rng(10)
    X = rng.random((40, 2))
    y = np.full(40, -71.5)
    gbt = GradientBoosting(GbtParams(n_stages=5)).fit(X, y)
    assert gbt.base_value == -71.5
    np.testing.assert_allclose(gbt.predict(X), y, rtol=0, atol=1e-12)


def test_gbt_training_mse_monotone():
    X, y = rand_xy(11, n=200)
    gbt = GradientBoosting(GbtParams(n_stages=60, learning_rate=0.2)).fit(X, y)
    last = np.inf
    for pred in gbt.staged_predict(X):
        cur = mse(y, pred)
        assert cur <= last * (1 + 1e-12) + 1e-12
        last = cur


def test_gbt_zero_stages_predicts_base():
    gbt = GradientBoosting()
    gbt.base_value = -58.25
    gbt.stages = []
    gbt.n_features = 2
    np.testing.assert_array_equal(
        gbt.predict(np.random.rand(7, 2)), np.full(7, -58.25)
    )


def test_gbt_single_stump_stage():
    # stump predicting +2 everywhere on one side; lr 0.5 adds half of it
    stump_text = "node 0 0.5\nleaf 2.0 1\nleaf 2.0 1\n"
    gbt = GradientBoosting(GbtParams(n_stages=1, learning_rate=0.5))
    gbt.base_value = -60.0
    tree = RegressionTree.from_text(stump_text)
    tree.n_features = 1
    gbt.stages = [tree]
    gbt.n_features = 1
    assert gbt.predict(np.array([[0.2]]))[0] == -59.0


def test_gbt_round_trip_on_training_points():
    rng = np.random.default_rng(12)
    X = rng.random((50, 2))
    y = rng.normal(0, 3, 50)
    gbt = GradientBoosting(
        GbtParams(n_stages=1, learning_rate=1.0, tree=TreeParams(max_depth=1000))
    ).fit(X, y)
    np.testing.assert_allclose(gbt.predict(X), y, rtol=0, atol=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        ForestParams(n_trees=0)
    with pytest.raises(ValueError):
        GbtParams(n_stages=0)
    with pytest.raises(ValueError):
        GbtParams(learning_rate=0.0)
    with pytest.raises(ValueError):
        GbtParams(learning_rate=1.5)


def test_fit_errors_and_predict_guards():
    with pytest.raises(FitError):
        RandomForest().fit(np.empty((0, 2)), np.empty(0))
    with pytest.raises(FitError):
        GradientBoosting().fit(np.empty((0, 2)), np.empty(0))
    with pytest.raises(PredictError):
        RandomForest().predict(np.ones((1, 2)))
    f = RandomForest(ForestParams(n_trees=2)).fit(*rand_xy(13))
    with pytest.raises(PredictError):
        f.predict(np.ones((2, 5)))


def test_forest_serialization_round_trip():
    X, y = rand_xy(14)
    forest = RandomForest(ForestParams(n_trees=8, seed=5)).fit(X, y)
    again = RandomForest.from_text(forest.to_text())
    Xq = np.random.default_rng(4).random((25, 2))
    np.testing.assert_array_equal(forest.predict(Xq), again.predict(Xq))
    assert again.params == forest.params


def test_gbt_serialization_round_trip():
    X, y = rand_xy(15)
    gbt = GradientBoosting(GbtParams(n_stages=12, learning_rate=0.1)).fit(X, y)
    again = GradientBoosting.from_text(gbt.to_text())
    Xq = np.random.default_rng(5).random((25, 2))
    np.testing.assert_array_equal(gbt.predict(Xq), again.predict(Xq))
    assert again.base_value == gbt.base_value
