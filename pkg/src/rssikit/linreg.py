"""Ordinary least-squares linear regression."""

from __future__ import annotations

import numpy as np

from .errors import FitError, PredictError


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise FitError("X must be (n, d) and y (n,) with matching n")
    if X.shape[0] == 0:
        raise FitError("empty training data")
    return X, y


class LinearRegression:
    """f(x) = coef . x + intercept, fitted by the normal equations.

    The normal matrix of the intercept-augmented design is inverted through
    its symmetric eigendecomposition (pseudo-inverse), so rank-deficient
    designs yield the minimum-norm least-squares solution instead of
    failing.  With 2-3 features a direct solve is deterministic and exact to
    machine precision.
    """

    def __init__(self):
        self.coef = None
        self.intercept = 0.0

    def fit(self, X, y):
        X, y = _check_xy(X, y)
        A = np.hstack([X, np.ones((X.shape[0], 1))])
        G = A.T @ A
        b = A.T @ y
        w = np.linalg.pinv(G, hermitian=True) @ b
        self.coef = w[:-1]
        self.intercept = float(w[-1])
        return self

    def predict(self, X):
        if self.coef is None:
            raise PredictError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.coef.shape[0]:
            raise PredictError(
                f"expected {self.coef.shape[0]} features, got {X.shape}"
            )
        return X @ self.coef + self.intercept

    # flat key-value text serialization, full float precision
    def to_text(self) -> str:
        if self.coef is None:
            raise PredictError("model is not fitted")
        lines = [f"intercept {self.intercept!r}"]
        for i, c in enumerate(self.coef):
            lines.append(f"coef{i} {float(c)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearRegression":
        model = cls()
        coefs = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, val = line.split()
            if key == "intercept":
                model.intercept = float(val)
            elif key.startswith("coef"):
                coefs[int(key[4:])] = float(val)
            else:
                raise ValueError(f"unknown key in linear model dump: {key}")
        model.coef = np.array([coefs[i] for i in range(len(coefs))], dtype=np.float64)
        return model
