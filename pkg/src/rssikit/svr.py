"""Support vector regression with the epsilon-insensitive tube loss.

Training minimizes 1/2 ||w||^2 + C * sum(slack) where slack is the amount a
prediction falls outside the tube of half-width epsilon.  The fit solves
the dual by exact pairwise coordinate steps (see _smo) until the largest
KKT violation drops below tol or the update budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _smo
from .errors import FitError, PredictError

KERNEL_KINDS = ("linear", "rbf")


@dataclass(frozen=True)
class SvrParams:
    """c > 0 trades flatness for tube violations; epsilon is the tube
    half-width in target units (dB here).  gamma None means 1/n_features.
    One pass is n pair updates, so the update budget is max_passes * n.
    """

    c: float = 10.0
    epsilon: float = 0.5
    kernel: str = "rbf"
    gamma: float | None = None
    tol: float = 1e-3
    max_passes: int = 200

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.kernel not in KERNEL_KINDS:
            raise ValueError(f"kernel must be one of {KERNEL_KINDS}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.tol <= 0 or self.max_passes < 1:
            raise ValueError("tol must be positive and max_passes >= 1")


def kernel_matrix(kind: str, gamma: float, A, B):
    """K[i, j] = k(A_i, B_j) for the linear or rbf kernel."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if kind == "linear":
        return A @ B.T
    if kind == "rbf":
        sq = (
            np.sum(A * A, axis=1)[:, None]
            + np.sum(B * B, axis=1)[None, :]
            - 2.0 * (A @ B.T)
        )
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {kind!r}")


class SupportVectorRegression:
    """Tube-loss SVR fitted by seeded pairwise coordinate optimization."""

    def __init__(self, params: SvrParams = SvrParams(), seed: int = 0):
        self.params = params
        self.seed = seed
        self.support_vectors = None
        self.dual_coefs = None
        self.bias = 0.0
        self.gamma = None
        self.converged = False
        self.n_updates = 0
        self.n_features = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise FitError("X must be (n, d) and y (n,) with matching n")
        n = X.shape[0]
        if n < 2:
            raise FitError("need at least 2 training samples")
        p = self.params
        self.n_features = X.shape[1]
        self.gamma = p.gamma if p.gamma is not None else 1.0 / X.shape[1]

        K = kernel_matrix(p.kernel, self.gamma, X, X)
        max_updates = p.max_passes * n
        pick = np.random.default_rng(self.seed).random(max_updates)
        beta, bias, converged, n_updates = _smo.solve(
            K, y, p.c, p.epsilon, p.tol, max_updates, pick
        )

        nz = beta != 0.0
        self.support_vectors = X[nz].copy()
        self.dual_coefs = beta[nz].copy()
        self.bias = float(bias)
        self.converged = bool(converged)
        self.n_updates = int(n_updates)
        # full dual vector over the training set, for diagnostics and the
        # KKT test suite; not serialized
        self._beta = beta
        return self

    def predict(self, X):
        if self.support_vectors is None:
            raise PredictError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise PredictError(f"expected {self.n_features} features, got {X.shape}")
        if self.dual_coefs.size == 0:
            return np.full(X.shape[0], self.bias)
        K = kernel_matrix(self.params.kernel, self.gamma, X, self.support_vectors)
        return K @ self.dual_coefs + self.bias

    def to_text(self) -> str:
        if self.support_vectors is None:
            raise PredictError("model is not fitted")
        p = self.params
        lines = [
            f"kernel {p.kernel} gamma {float(self.gamma)!r}",
            f"bias {self.bias!r}",
            f"converged {int(self.converged)}",
            f"n_features {self.n_features}",
        ]
        for coef, sv in zip(self.dual_coefs, self.support_vectors):
            parts = [f"sv {float(coef)!r}"] + [f"{float(v)!r}" for v in sv]
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SupportVectorRegression":
        kernel = "rbf"
        gamma = None
        bias = 0.0
        converged = False
        n_features = None
        coefs = []
        svs = []
        for ln in text.splitlines():
            row = ln.split()
            if not row:
                continue
            if row[0] == "kernel":
                kernel = row[1]
                gamma = float(row[3])
            elif row[0] == "bias":
                bias = float(row[1])
            elif row[0] == "converged":
                converged = bool(int(row[1]))
            elif row[0] == "n_features":
                n_features = int(row[1])
            elif row[0] == "sv":
                coefs.append(float(row[1]))
                svs.append([float(v) for v in row[2:]])
            else:
                raise ValueError(f"bad svr dump line: {ln!r}")
        model = cls(SvrParams(kernel=kernel, gamma=gamma))
        model.gamma = gamma
        model.bias = bias
        model.converged = converged
        model.n_features = n_features
        model.dual_coefs = np.array(coefs, dtype=np.float64)
        model.support_vectors = (
            np.array(svs, dtype=np.float64)
            if svs
            else np.empty((0, n_features or 0), dtype=np.float64)
        )
        return model
