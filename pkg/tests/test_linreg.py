import numpy as np
import pytest

from rssikit.errors import FitError, PredictError
from rssikit.linreg import LinearRegression
from rssikit.metrics import mse


def half_sse(X, y, coef, intercept):
    r = y - (X @ coef + intercept)
    return 0.5 * float(r @ r)


def fd_gradient(X, y, coef, intercept, h=1e-4):
    """Central-difference gradient of the half-SSE objective at (coef, b)."""
    params = np.append(coef, intercept)

    def at(p):
        return half_sse(X, y, p[:-1], p[-1])

    grad = np.empty_like(params)
    for i in range(len(params)):
        up = params.copy()
        dn = params.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (at(up) - at(dn)) / (2 * h)
    return grad


def test_recovers_exact_line():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = 2.0 * X[:, 0] + 1.0
    m = LinearRegression().fit(X, y)
    assert m.coef[0] == pytest.approx(2.0, abs=1e-9)
    assert m.intercept == pytest.approx(1.0, abs=1e-9)


def test_constant_targets():
    X = np.array([[0.0], [1.0], [2.0]])
    m = LinearRegression().fit(X, np.full(3, -55.5))
    assert m.coef[0] == pytest.approx(0.0, abs=1e-9)
    assert m.intercept == pytest.approx(-55.5, abs=1e-9)


def test_gradient_vanishes_at_fit():
    rng = np.random.default_rng(1)
    X = rng.random((100, 3))
    y = X @ np.array([3.0, -2.0, 0.5]) + rng.normal(0, 1, 100)
    m = LinearRegression().fit(X, y)
    grad = fd_gradient(X, y, m.coef, m.intercept)
    assert np.linalg.norm(grad) < 1e-6


def test_predict_hand_values():
    m = LinearRegression()
    m.coef = np.array([2.0])
    m.intercept = 1.0
    assert m.predict(np.array([[3.0]]))[0] == 7.0

    m.coef = np.array([0.0, 0.0])
    m.intercept = -4.5
    assert m.predict(np.array([[9.0, 1.0]]))[0] == -4.5


def test_predict_on_fitted_line():
    X = np.array([[0.0], [1.0]])
    m = LinearRegression().fit(X, 2.0 * X[:, 0] + 1.0)
    assert m.predict(np.array([[0.5]]))[0] == pytest.approx(2.0, abs=1e-9)


def test_residual_identities():
    rng = np.random.default_rng(2)
    X = rng.random((80, 3))
    y = X @ np.array([1.0, 2.0, -1.0]) + rng.normal(0, 0.5, 80)
    m = LinearRegression().fit(X, y)
    resid = y - m.predict(X)
    bound = 1e-8 * np.linalg.norm(y)
    assert abs(resid.sum()) < bound
    assert np.abs(resid @ X).max() < bound


def test_beats_perturbed_solutions():
    rng = np.random.default_rng(3)
    X = rng.random((60, 2))
    y = X @ np.array([2.0, -3.0]) + rng.normal(0, 0.2, 60)
    m = LinearRegression().fit(X, y)
    best = mse(y, m.predict(X))
    for _ in range(20):
        coef = m.coef + rng.normal(0, 0.05, 2)
        b = m.intercept + rng.normal(0, 0.05)
        assert mse(y, X @ coef + b) >= best - 1e-12


def test_rank_deficient_is_handled():
    rng = np.random.default_rng(4)
    x = rng.random(50)
    X = np.column_stack([x, x])  # duplicated column
    y = 3.0 * x + 1.0
    m = LinearRegression().fit(X, y)
    assert np.isfinite(m.coef).all()
    assert mse(y, m.predict(X)) == pytest.approx(0.0, abs=1e-16)


def test_errors():
    with pytest.raises(FitError):
        LinearRegression().fit(np.empty((0, 2)), np.empty(0))
    m = LinearRegression().fit(np.array([[1.0], [2.0]]), np.array([1.0, 2.0]))
    with pytest.raises(PredictError):
        m.predict(np.ones((3, 2)))
    with pytest.raises(PredictError):
        LinearRegression().predict(np.ones((1, 1)))


def test_serialization_round_trip():
    rng = np.random.default_rng(5)
    X = rng.random((30, 3))
    y = rng.normal(0, 1, 30)
    m = LinearRegression().fit(X, y)
    again = LinearRegression.from_text(m.to_text())
    np.testing.assert_array_equal(m.coef, again.coef)
    assert m.intercept == again.intercept
