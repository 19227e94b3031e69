"""Regression trees grown by standard-deviation-reduction splitting.

Growing is greedy and top-down with no backtracking: every node evaluates
midpoint thresholds between consecutive distinct sorted values on each
candidate feature and takes the split with the largest drop in population
standard deviation.  A node becomes a leaf when the depth limit is hit, it
holds fewer samples than min_samples_split, no candidate satisfies
min_samples_leaf on both sides, or no split reduces the standard deviation.
Leaves predict the mean target of their training samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _tree
from .errors import FitError, PredictError, SplitError


@dataclass(frozen=True)
class TreeParams:
    """Stopping rules; split and leaf minimums are enforced independently."""

    max_depth: int = 1000
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")


def sdr_split(targets_parent, targets_left, targets_right) -> float:
    """Standard-deviation reduction of one split (population sd).

    Reference implementation used by tests and debugging; the grower
    computes the same quantity inside its scan kernel.
    """
    p = np.asarray(targets_parent, dtype=np.float64)
    l = np.asarray(targets_left, dtype=np.float64)
    r = np.asarray(targets_right, dtype=np.float64)
    if l.size == 0 or r.size == 0:
        raise SplitError("both sides of a split must be non-empty")
    if l.size + r.size != p.size:
        raise SplitError("left and right must partition the parent")
    return float(np.std(p) - (l.size * np.std(l) + r.size * np.std(r)) / p.size)


class RegressionTree:
    """CART-style binary regression tree with SDR splitting."""

    def __init__(self, params: TreeParams = TreeParams()):
        self.params = params
        self.nodes = None
        self.n_features = None

    def fit(self, X, y, feature_pool=None, n_candidate_features=None):
        """Grow the tree.  feature_pool/n_candidate_features restrict each
        split to a pre-drawn feature subset (used by ensembles); by default
        every split considers all features.
        """
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise FitError("X must be (n, d) and y (n,) with matching n")
        if X.shape[0] == 0:
            raise FitError("empty training data")
        self.n_features = X.shape[1]
        self.nodes = _tree.grow(
            X,
            y,
            self.params.max_depth,
            self.params.min_samples_split,
            self.params.min_samples_leaf,
            feature_pool,
            n_candidate_features,
        )
        return self

    def predict(self, X):
        if self.nodes is None:
            raise PredictError("model is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise PredictError(f"expected {self.n_features} features, got {X.shape}")
        return _tree.predict(self.nodes, X)

    @property
    def n_nodes(self) -> int:
        return 0 if self.nodes is None else len(self.nodes[0])

    # preorder text dump, one line per node (iterative: trees can run
    # deeper than the interpreter recursion limit)
    def to_text(self) -> str:
        if self.nodes is None:
            raise PredictError("model is not fitted")
        feature, threshold, left, right, value, count = self.nodes
        lines = []
        stack = [0]
        while stack:
            i = stack.pop()
            if feature[i] < 0:
                lines.append(f"leaf {float(value[i])!r} {int(count[i])}")
            else:
                lines.append(f"node {int(feature[i])} {float(threshold[i])!r}")
                stack.append(right[i])
                stack.append(left[i])
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, params: TreeParams = TreeParams()) -> "RegressionTree":
        feature, threshold, left, right, value, count = [], [], [], [], [], []
        pending = []  # (parent index, side) slots awaiting a child, LIFO
        for ln in text.splitlines():
            row = ln.split()
            if not row:
                continue
            me = len(feature)
            if row[0] == "leaf":
                feature.append(-1)
                threshold.append(0.0)
                value.append(float(row[1]))
                count.append(int(row[2]))
            elif row[0] == "node":
                feature.append(int(row[1]))
                threshold.append(float(row[2]))
                value.append(0.0)
                count.append(0)
            else:
                raise ValueError(f"bad tree dump line: {ln!r}")
            left.append(-1)
            right.append(-1)
            if pending:
                parent, side = pending.pop()
                if side == 0:
                    left[parent] = me
                else:
                    right[parent] = me
            if row[0] == "node":
                pending.append((me, 1))
                pending.append((me, 0))
        if not feature or pending:
            raise ValueError("incomplete tree dump")
        tree = cls(params)
        tree.nodes = (
            np.array(feature, np.int32),
            np.array(threshold, np.float64),
            np.array(left, np.int32),
            np.array(right, np.int32),
            np.array(value, np.float64),
            np.array(count, np.int32),
        )
        tree.n_features = int(max(max(feature) + 1, 1))
        return tree
