import json

import numpy as np
import pytest

from rssikit.dataset import Dataset, split
from rssikit.errors import FitError
from rssikit.evaluate import MODEL_ORDER, compare_models, latency_probe
from rssikit.models import build_model

from conftest import rand_xy


def _split_data(seed, n=240):
    X, y = rand_xy(seed, n=n)
    data = Dataset(X, y, ("lat_norm", "lon_norm"), provenance=f"test seed={seed}")
    return split(data, n // 2, seed)


@pytest.fixture(scope="module")
def report(warm_kernels):
    train, test = _split_data(0)
    configs = {
        "linear": {},
        "svr": {"c": 10.0, "epsilon": 0.2, "max_passes": 500},
        "tree": {"max_depth": 8},
        "forest": {"n_trees": 20},
        "gbt": {"n_stages": 30},
    }
    return compare_models(train, test, configs, seed=0)


def test_report_has_all_rows_in_order(report):
    assert tuple(r.name for r in report.rows) == MODEL_ORDER
    assert all(r.test_mae_db > 0 for r in report.rows)
    assert all(np.isfinite(r.test_mse_db2) for r in report.rows)


def test_report_jensen_rows(report):
    for r in report.rows:
        assert r.test_mae_db**2 <= r.test_mse_db2 + 1e-12


def test_report_formats(report):
    text = report.to_text()
    assert text.splitlines()[0].startswith("model")
    assert len(text.splitlines()) == 6

    csv = report.to_csv()
    assert csv.splitlines()[0] == (
        "model,test_mae_db,test_mse_db2,fit_seconds,predict_micros_per_sample"
    )
    bare = report.to_csv(include_timing=False)
    assert bare.splitlines()[0] == "model,test_mae_db,test_mse_db2"

    obj = json.loads(report.to_json())
    assert [m["name"] for m in obj["models"]] == list(MODEL_ORDER)


def test_metric_fields_reproducible():
    train, test = _split_data(1)
    configs = {"tree": {"max_depth": 6}, "forest": {"n_trees": 10}}
    a = compare_models(train, test, configs, seed=1)
    b = compare_models(train, test, configs, seed=1)
    for ra, rb in zip(a.rows, b.rows):
        assert ra.test_mae_db == rb.test_mae_db
        assert ra.test_mse_db2 == rb.test_mse_db2


def test_memorizing_tree_on_train_equals_zero():
    X, y = rand_xy(2, n=100)
    train = Dataset(X, y, ("a", "b"))
    report = compare_models(train, train, {"tree": {"max_depth": 1000}}, seed=0)
    row = report.rows[0]
    assert row.name == "tree"
    assert row.test_mae_db == 0.0
    assert row.test_mse_db2 == 0.0


def test_fit_error_names_model():
    X = np.ones((1, 2))
    train = Dataset(X, np.array([1.0]), ("a", "b"))
    with pytest.raises(FitError) as err:
        compare_models(train, train, {"svr": {}}, seed=0)
    assert "svr" in str(err.value)


def test_latency_probe_constant_model():
    class Constant:
        def predict(self, X):
            return np.zeros(len(X))

    micros = latency_probe(Constant(), np.zeros((500, 2)), repeats=3)
    assert micros > 0.0


def test_latency_grows_with_forest_size(warm_kernels):
    X, y = rand_xy(3, n=400)
    small = build_model("forest", seed=0, n_trees=10).fit(X, y)
    big = build_model("forest", seed=0, n_trees=300).fit(X, y)
    Xq = np.random.default_rng(0).random((1000, 2))
    t_small = latency_probe(small, Xq, repeats=5)
    t_big = latency_probe(big, Xq, repeats=5)
    assert t_big >= t_small
