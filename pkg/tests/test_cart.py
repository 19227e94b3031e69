import numpy as np
import pytest

from rssikit import _tree
from rssikit._accel import USING_NUMBA
from rssikit.cart import RegressionTree, TreeParams, sdr_split
from rssikit.errors import FitError, PredictError, SplitError
from rssikit.metrics import mse


def sse(y):
    y = np.asarray(y, dtype=np.float64)
    return float(np.sum((y - y.mean()) ** 2)) if y.size else 0.0


def best_single_split_sse(x, y, min_leaf=1):
    """Exhaustive minimum SSE over a single split of one node (or no split)."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    best = sse(ys)
    for k in range(1, len(xs)):
        if xs[k - 1] == xs[k] or k < min_leaf or len(xs) - k < min_leaf:
            continue
        best = min(best, sse(ys[:k]) + sse(ys[k:]))
    return best


def brute_depth2_mse(x, y):
    """Minimum training MSE over every axis-aligned tree of depth <= 2."""
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    best = sse(ys)
    for k in range(1, len(xs)):
        if xs[k - 1] == xs[k]:
            continue
        best = min(
            best,
            best_single_split_sse(xs[:k], ys[:k]) + best_single_split_sse(xs[k:], ys[k:]),
        )
    return best / len(xs)


def separable_dataset(seed, n=20):
    """Targets with two-level group structure; the greedy split order is
    unambiguous, so a correct greedy grower is depth-2 optimal here."""
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    order = np.argsort(x)
    base = rng.uniform(-90.0, -30.0)
    big = rng.uniform(15.0, 25.0)
    g1, g2 = rng.uniform(1.5, 3.0, size=2)
    levels = np.array([base, base + g1, base + big, base + big + g2])
    y = np.empty(n)
    for rank, i in enumerate(order):
        y[i] = levels[rank * 4 // n]
    y += rng.normal(0, 0.05, n)
    return x, y


def test_sdr_hand_values():
    assert sdr_split([0, 0, 10, 10], [0, 0], [10, 10]) == pytest.approx(5.0, rel=1e-12)
    assert sdr_split([7, 7, 7, 7], [7, 7], [7, 7]) == 0.0
    assert sdr_split([1, 2, 3, 4], [1, 2], [3, 4]) == pytest.approx(
        0.618033988749895, rel=1e-12
    )


def test_sdr_errors():
    with pytest.raises(SplitError):
        sdr_split([1, 2], [], [1, 2])
    with pytest.raises(SplitError):
        sdr_split([1, 2, 3], [1], [2])


def test_single_sample_leaf():
    t = RegressionTree().fit(np.array([[3.0]]), np.array([-42.0]))
    assert t.n_nodes == 1
    assert t.predict(np.array([[0.0], [99.0]])).tolist() == [-42.0, -42.0]


def test_full_growth_zero_training_mse():
    rng = np.random.default_rng(0)
    X = rng.random((80, 2))  # almost surely distinct rows
    y = rng.normal(-60, 10, 80)
    t = RegressionTree(TreeParams(max_depth=1000, min_samples_split=2, min_samples_leaf=1))
    t.fit(X, y)
    np.testing.assert_array_equal(t.predict(X), y)


def test_root_split_matches_exhaustive_sdr_scan():
    # the grower's chosen root split must equal a brute-force SDR argmax
    rng = np.random.default_rng(1)
    X = rng.random((40, 2))
    y = rng.normal(0, 1, 40)
    stump = RegressionTree(TreeParams(max_depth=1)).fit(X, y)
    feat, thr, left, right, value, count = stump.nodes

    best = (0.0, None, None)
    for f in range(2):
        xs = np.sort(X[:, f])
        for k in range(1, 40):
            if xs[k - 1] == xs[k]:
                continue
            t = 0.5 * (xs[k - 1] + xs[k])
            mask = X[:, f] <= t
            red = sdr_split(y, y[mask], y[~mask])
            if red > best[0]:
                best = (red, f, t)
    assert feat[0] == best[1]
    assert thr[0] == pytest.approx(best[2], rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_depth2_matches_bruteforce_on_separable_data(seed):
    x, y = separable_dataset(seed)
    t = RegressionTree(TreeParams(max_depth=2, min_samples_split=2, min_samples_leaf=1))
    t.fit(x[:, None], y)
    greedy = mse(y, t.predict(x[:, None]))
    brute = brute_depth2_mse(x, y)
    assert greedy == pytest.approx(brute, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("seed", range(6))
def test_depth2_never_beats_bruteforce(seed):
    # on arbitrary data greedy can be worse than exhaustive, never better
    rng = np.random.default_rng(seed)
    x = rng.random(20)
    y = rng.normal(0, 1, 20)
    t = RegressionTree(TreeParams(max_depth=2, min_samples_split=2, min_samples_leaf=1))
    t.fit(x[:, None], y)
    greedy = mse(y, t.predict(x[:, None]))
    assert greedy >= brute_depth2_mse(x, y) - 1e-12


def test_training_mse_monotone_in_depth():
    rng = np.random.default_rng(2)
    X = rng.random((150, 2))
    y = np.sin(8 * X[:, 0]) + rng.normal(0, 0.2, 150)
    last = np.inf
    for depth in range(1, 10):
        t = RegressionTree(TreeParams(max_depth=depth)).fit(X, y)
        cur = mse(y, t.predict(X))
        assert cur <= last + 1e-12
        last = cur


def test_deterministic_rebuild():
    rng = np.random.default_rng(3)
    X = rng.random((60, 3))
    y = rng.normal(0, 1, 60)
    a = RegressionTree(TreeParams(max_depth=4)).fit(X, y)
    b = RegressionTree(TreeParams(max_depth=4)).fit(X, y)
    assert a.to_text() == b.to_text()


def test_stump_routing():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 0.0, 10.0, 10.0])
    t = RegressionTree(TreeParams(max_depth=1)).fit(X, y)
    assert t.predict(np.array([[1.4]]))[0] == 0.0
    assert t.predict(np.array([[1.6]]))[0] == 10.0
    # boundary routes left (x <= threshold)
    feat, thr, *_ = t.nodes
    assert t.predict(np.array([[thr[0]]]))[0] == 0.0


def test_min_leaf_respected():
    rng = np.random.default_rng(4)
    X = rng.random((100, 2))
    y = rng.normal(0, 1, 100)
    t = RegressionTree(TreeParams(max_depth=1000, min_samples_leaf=10)).fit(X, y)
    _, _, _, _, _, count = t.nodes
    feat = t.nodes[0]
    assert (count[feat < 0] >= 10).all()


def test_min_split_respected():
    rng = np.random.default_rng(5)
    X = rng.random((100, 1))
    y = rng.normal(0, 1, 100)
    t = RegressionTree(TreeParams(max_depth=1000, min_samples_split=25)).fit(X, y)
    feat, _, _, _, _, count = t.nodes
    assert (count[feat >= 0] >= 25).all()


def test_serialization_round_trip():
    rng = np.random.default_rng(6)
    X = rng.random((70, 2))
    y = rng.normal(-70, 8, 70)
    t = RegressionTree(TreeParams(max_depth=6)).fit(X, y)
    again = RegressionTree.from_text(t.to_text())
    again.n_features = 2
    Xq = rng.random((50, 2))
    np.testing.assert_array_equal(t.predict(Xq), again.predict(Xq))
    assert again.to_text() == t.to_text()


def test_errors():
    with pytest.raises(FitError):
        RegressionTree().fit(np.empty((0, 1)), np.empty(0))
    t = RegressionTree().fit(np.array([[1.0]]), np.array([2.0]))
    with pytest.raises(PredictError):
        t.predict(np.ones((2, 3)))
    with pytest.raises(ValueError):
        TreeParams(max_depth=0)
    with pytest.raises(ValueError):
        TreeParams(min_samples_split=1)
    with pytest.raises(ValueError):
        TreeParams(min_samples_leaf=0)


@pytest.mark.skipif(not USING_NUMBA, reason="single-path run")
def test_jit_and_numpy_growers_agree():
    rng = np.random.default_rng(7)
    for _ in range(5):
        X = rng.random((120, 3))
        y = rng.normal(0, 1, 120)
        jit_nodes = _tree._grow_jit(X, y, 8, 2, 1, _tree._default_pool(X.shape), 3)
        np_nodes = _tree._grow_np(X, y, 8, 2, 1, _tree._default_pool(X.shape), 3)
        for a, b in zip(jit_nodes, np_nodes):
            np.testing.assert_array_equal(a, b)
        Xq = rng.random((40, 3))
        np.testing.assert_array_equal(
            _tree._predict_jit(*jit_nodes[:5], Xq), _tree._predict_np(*np_nodes[:5], Xq)
        )
