import numpy as np
import pytest

from rssikit.dataset import build_dataset
from rssikit.synthfield import FieldModel, generate_walk


@pytest.fixture(scope="session")
def field():
    return FieldModel()


@pytest.fixture(scope="session")
def small_data(field):
    """600-sample synthetic dataset with the default field, seed 11."""
    samples = generate_walk(field, 600, seed=11)
    return build_dataset(samples, provenance="synthetic seed=11")


@pytest.fixture(scope="session")
def warm_kernels(small_data):
    """Trigger JIT compilation before any timing-sensitive assertions."""
    from rssikit.cart import RegressionTree, TreeParams
    from rssikit.svr import SupportVectorRegression, SvrParams

    X, y = small_data.X[:60], small_data.y[:60]
    RegressionTree(TreeParams(max_depth=3)).fit(X, y).predict(X)
    SupportVectorRegression(SvrParams(max_passes=5), seed=0).fit(X, y)
    return True


def rand_xy(seed, n=120, d=2, noise=0.3):
    """Small random regression problem with smooth structure."""
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    w = rng.normal(0, 2, d)
    y = X @ w + np.sin(5 * X[:, 0]) + rng.normal(0, noise, n)
    return X, y
