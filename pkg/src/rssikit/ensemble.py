"""Tree ensembles: random forest (bagging + per-split feature subsets +
out-of-bag error) and gradient-boosted trees.

Forest trees are independent: tree t draws its bootstrap sample and its
per-split feature subsets from an RNG stream derived from (seed, t), so the
fitted forest is identical no matter how training is scheduled.  Boosting
is inherently sequential: each stage fits a tree to the residual of the
model so far and is added with a shrinkage factor.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cart import RegressionTree, TreeParams
from .errors import FitError, OobUnavailableError, PredictError
from .metrics import MetricPair, metric_pair


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    tree: TreeParams = field(default_factory=TreeParams)
    m_features: int | None = None  # features drawn per split; None -> ceil(d/2)
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.m_features is not None and self.m_features < 1:
            raise ValueError("m_features must be >= 1")


@dataclass(frozen=True)
class GbtParams:
    n_stages: int = 100
    learning_rate: float = 0.1
    tree: TreeParams = field(default_factory=lambda: TreeParams(max_depth=5))
    seed: int = 0  # kept for interface parity; stage fitting is deterministic

    def __post_init__(self):
        if self.n_stages < 1:
            raise ValueError("n_stages must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise FitError("X must be (n, d) and y (n,) with matching n")
    if X.shape[0] == 0:
        raise FitError("empty training data")
    return X, y


class RandomForest:
    """Average of bootstrapped SDR trees with per-split feature subsets."""

    def __init__(self, params: ForestParams = ForestParams()):
        self.params = params
        self.trees: list[RegressionTree] = []
        self.oob_indices: list[np.ndarray] = []
        self.n_features = None

    def fit(self, X, y, n_workers: int | None = None):
        """Fit the forest.  Trees may build on parallel threads (the grower
        releases the GIL); tree t draws from the stream (seed, t), so the
        result is identical for any worker count.
        """
        X, y = _check_xy(X, y)
        n, d = X.shape
        p = self.params
        m = p.m_features if p.m_features is not None else (d + 1) // 2
        if m > d:
            raise FitError(f"m_features {m} exceeds feature count {d}")
        self.n_features = d

        def build_one(t):
            rng = np.random.default_rng([p.seed, t])
            if p.bootstrap:
                bidx = rng.integers(0, n, size=n)
                Xb, yb = X[bidx], y[bidx]
                inbag = np.zeros(n, dtype=bool)
                inbag[bidx] = True
                oob = np.flatnonzero(~inbag)
            else:
                Xb, yb = X, y
                oob = np.empty(0, dtype=np.int64)
            pool = None
            if m < d:
                # row k: sorted m-subset for the k-th split attempt
                pool = np.argsort(rng.random((2 * n + 1, d)), axis=1)[:, :m]
                pool = np.sort(pool, axis=1)
            tree = RegressionTree(p.tree)
            tree.fit(Xb, yb, feature_pool=pool, n_candidate_features=m if m < d else None)
            return tree, oob

        if n_workers is None:
            n_workers = min(4, os.cpu_count() or 1)
        if n_workers > 1 and p.n_trees > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool_ex:
                results = list(pool_ex.map(build_one, range(p.n_trees)))
        else:
            results = [build_one(t) for t in range(p.n_trees)]
        self.trees = [tree for tree, _ in results]
        self.oob_indices = [oob for _, oob in results]
        return self

    def predict(self, X):
        if not self.trees:
            raise PredictError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise PredictError(f"expected {self.n_features} features, got {X.shape}")
        acc = np.zeros(X.shape[0])
        for tree in self.trees:
            acc += tree.predict(X)
        return acc / len(self.trees)

    def oob_error(self, X, y) -> MetricPair:
        """MAE/MSE of out-of-bag predictions.

        Each training sample is predicted by only the trees whose bootstrap
        excluded it; samples never excluded are skipped.  The returned n is
        the number of covered samples.
        """
        if not self.trees:
            raise PredictError("model is not fitted")
        if not self.params.bootstrap:
            raise OobUnavailableError("OOB error needs bootstrap sampling")
        X, y = _check_xy(X, y)
        n = X.shape[0]
        sums = np.zeros(n)
        counts = np.zeros(n)
        for tree, oob in zip(self.trees, self.oob_indices):
            if oob.size == 0:
                continue
            sums[oob] += tree.predict(X[oob])
            counts[oob] += 1.0
        covered = counts > 0
        if not covered.any():
            raise OobUnavailableError("no sample was ever out of bag")
        pred = sums[covered] / counts[covered]
        return metric_pair(y[covered], pred)

    def to_text(self) -> str:
        if not self.trees:
            raise PredictError("model is not fitted")
        p = self.params
        lines = [
            f"n_trees {p.n_trees}",
            f"max_depth {p.tree.max_depth}",
            f"min_samples_split {p.tree.min_samples_split}",
            f"min_samples_leaf {p.tree.min_samples_leaf}",
            f"m_features {p.m_features if p.m_features is not None else ''}".rstrip(),
            f"bootstrap {int(p.bootstrap)}",
            f"seed {p.seed}",
            f"n_features {self.n_features}",
        ]
        for t, tree in enumerate(self.trees):
            lines.append(f"tree {t}")
            lines.append(tree.to_text().rstrip("\n"))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RandomForest":
        header: dict[str, str] = {}
        tree_blocks: list[list[str]] = []
        for ln in text.splitlines():
            if not ln.strip():
                continue
            key = ln.split()[0]
            if key == "tree":
                tree_blocks.append([])
            elif tree_blocks:
                tree_blocks[-1].append(ln)
            else:
                parts = ln.split(None, 1)
                header[parts[0]] = parts[1] if len(parts) > 1 else ""
        tp = TreeParams(
            max_depth=int(header["max_depth"]),
            min_samples_split=int(header["min_samples_split"]),
            min_samples_leaf=int(header["min_samples_leaf"]),
        )
        params = ForestParams(
            n_trees=int(header["n_trees"]),
            tree=tp,
            m_features=int(header["m_features"]) if header.get("m_features") else None,
            bootstrap=bool(int(header["bootstrap"])),
            seed=int(header["seed"]),
        )
        model = cls(params)
        model.n_features = int(header["n_features"])
        for block in tree_blocks:
            tree = RegressionTree.from_text("\n".join(block), tp)
            tree.n_features = model.n_features
            model.trees.append(tree)
        model.oob_indices = [np.empty(0, dtype=np.int64) for _ in model.trees]
        return model


class GradientBoosting:
    """Sum of shrunken residual-fitted trees on top of the target mean."""

    def __init__(self, params: GbtParams = GbtParams()):
        self.params = params
        self.base_value = 0.0
        self.stages: list[RegressionTree] = []
        self.n_features = None

    def fit(self, X, y):
        X, y = _check_xy(X, y)
        p = self.params
        self.n_features = X.shape[1]
        self.base_value = float(np.mean(y))
        self.stages = []
        current = np.full(X.shape[0], self.base_value)
        for _ in range(p.n_stages):
            tree = RegressionTree(p.tree).fit(X, y - current)
            current += p.learning_rate * tree.predict(X)
            self.stages.append(tree)
        return self

    def predict(self, X):
        if self.n_features is None:
            raise PredictError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise PredictError(f"expected {self.n_features} features, got {X.shape}")
        acc = np.full(X.shape[0], self.base_value)
        for tree in self.stages:
            acc += self.params.learning_rate * tree.predict(X)
        return acc

    def staged_predict(self, X):
        """Yield predictions after the base value and after every stage."""
        X = np.asarray(X, dtype=np.float64)
        acc = np.full(X.shape[0], self.base_value)
        yield acc.copy()
        for tree in self.stages:
            acc += self.params.learning_rate * tree.predict(X)
            yield acc.copy()

    def to_text(self) -> str:
        if self.n_features is None:
            raise PredictError("model is not fitted")
        p = self.params
        lines = [
            f"n_stages {p.n_stages}",
            f"learning_rate {p.learning_rate!r}",
            f"max_depth {p.tree.max_depth}",
            f"min_samples_split {p.tree.min_samples_split}",
            f"min_samples_leaf {p.tree.min_samples_leaf}",
            f"base {self.base_value!r}",
            f"n_features {self.n_features}",
        ]
        for t, tree in enumerate(self.stages):
            lines.append(f"tree {t}")
            lines.append(tree.to_text().rstrip("\n"))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GradientBoosting":
        header: dict[str, str] = {}
        tree_blocks: list[list[str]] = []
        for ln in text.splitlines():
            if not ln.strip():
                continue
            key = ln.split()[0]
            if key == "tree":
                tree_blocks.append([])
            elif tree_blocks:
                tree_blocks[-1].append(ln)
            else:
                parts = ln.split(None, 1)
                header[parts[0]] = parts[1]
        tp = TreeParams(
            max_depth=int(header["max_depth"]),
            min_samples_split=int(header["min_samples_split"]),
            min_samples_leaf=int(header["min_samples_leaf"]),
        )
        params = GbtParams(
            n_stages=int(header["n_stages"]),
            learning_rate=float(header["learning_rate"]),
            tree=tp,
        )
        model = cls(params)
        model.base_value = float(header["base"])
        model.n_features = int(header["n_features"])
        for block in tree_blocks:
            tree = RegressionTree.from_text("\n".join(block), tp)
            tree.n_features = model.n_features
            model.stages.append(tree)
        return model
