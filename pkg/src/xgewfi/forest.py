"""Random forest of CART trees with impurity-based feature importances.

Regression trees split on variance, classification trees on Gini. Every
tree owns a random stream derived from ``(seed, tree_index)`` that
drives both its bootstrap sample and the candidate features at each
node, so training order does not affect the result.
"""
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _cart
from .dataset import Kind
from .errors import ConfigError, DataError, DegenerateTargetError, NoSplitError, ShapeError
from .rng import substream


class MaxFeatures(str, enum.Enum):
    SQRT = "sqrt"
    THIRD = "third"
    ALL = "all"

    def count(self, p):
        if self is MaxFeatures.SQRT:
            return max(1, int(math.isqrt(p)))
        if self is MaxFeatures.THIRD:
            return max(1, -(-p // 3))  # rounded up
        return p


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    max_features: Optional[MaxFeatures] = None  # None: sqrt for classification, third for regression
    bootstrap: bool = True
    seed: int = 1

    def validate(self):
        if self.n_trees < 1:
            raise ConfigError("n_trees must be at least 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError("max_depth must be positive or None")
        if self.min_samples_split < 2:
            raise ConfigError("min_samples_split must be at least 2")

    def features_for(self, kind):
        if self.max_features is not None:
            return MaxFeatures(self.max_features)
        return MaxFeatures.SQRT if kind is Kind.CLASSIFICATION else MaxFeatures.THIRD


@dataclass(frozen=True)
class TreeNode:
    """Read-only view of one node. ``feature`` is None for leaves."""

    feature: Optional[int]
    threshold: Optional[float]
    left: Optional[int]
    right: Optional[int]
    value: float
    n_samples: int
    impurity: float

    @property
    def is_leaf(self):
        return self.feature is None


@dataclass(frozen=True, eq=False)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    impurity: np.ndarray

    @classmethod
    def leaf(cls, value, n_samples=1, impurity=0.0):
        return cls(np.array([-1]), np.zeros(1), np.array([-1]), np.array([-1]),
                   np.array([float(value)]), np.array([n_samples]), np.array([impurity]))

    @property
    def n_nodes(self):
        return self.feature.size

    def node(self, i):
        if self.left[i] < 0:
            return TreeNode(None, None, None, None, float(self.value[i]),
                            int(self.n_samples[i]), float(self.impurity[i]))
        return TreeNode(int(self.feature[i]), float(self.threshold[i]), int(self.left[i]),
                        int(self.right[i]), float(self.value[i]), int(self.n_samples[i]),
                        float(self.impurity[i]))

    def nodes(self):
        return [self.node(i) for i in range(self.n_nodes)]

    def predict(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _cart.predict_tree(X, self.feature, self.threshold, self.left,
                                  self.right, self.value)

    def importances(self, n_features):
        """Unnormalised impurity decrease per feature."""
        out = np.zeros(n_features)
        i = np.flatnonzero(self.left >= 0)
        l, r = self.left[i], self.right[i]
        weighted = self.n_samples * self.impurity
        gain = (weighted[i] - weighted[l] - weighted[r]) / self.n_samples[0]
        np.add.at(out, self.feature[i], np.maximum(gain, 0.0))
        return out


@dataclass(frozen=True, eq=False)
class Forest:
    trees: tuple
    kind: Kind
    n_features: int
    n_classes: int  # 0 for regression

    def predict_many(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"expected rows of width {self.n_features}, got shape {X.shape}")
        votes = np.stack([t.predict(X) for t in self.trees])
        if self.kind is Kind.REGRESSION:
            return votes.mean(axis=0)
        labels = votes.astype(np.int64)
        counts = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        for row in labels:
            counts[np.arange(X.shape[0]), row] += 1
        # argmax returns the first maximum: ties go to the lowest class
        return counts.argmax(axis=1).astype(np.float64)

    def predict(self, row):
        row = np.asarray(row, dtype=np.float64)
        if row.ndim != 1 or row.size != self.n_features:
            raise ShapeError(f"expected a row of width {self.n_features}, got shape {row.shape}")
        return float(self.predict_many(row[None, :])[0])


def train(ds, cfg=None):
    cfg = cfg or ForestConfig()
    cfg.validate()
    if ds.missing.any():
        raise DataError("the forest needs a dataset without missing feature cells")
    n, p = ds.values.shape
    if n < 2:
        raise DataError("need at least two rows to train a forest")
    y = np.ascontiguousarray(ds.target, dtype=np.float64)
    if np.all(y == y[0]):
        raise DegenerateTargetError("target is constant; no split can reduce impurity")
    X = np.ascontiguousarray(ds.values)
    n_classes = int(y.max()) + 1 if ds.kind is Kind.CLASSIFICATION else 0
    m = cfg.features_for(ds.kind).count(p)
    max_depth = -1 if cfg.max_depth is None else cfg.max_depth
    trees = []
    for t in range(cfg.n_trees):
        rng = substream(cfg.seed, "tree", t)
        if cfg.bootstrap:
            sample = rng.integers(0, n, size=n)
        else:
            sample = np.arange(n)
        keys = rng.random((2 * n + 1, p))
        arrays = _cart.build_tree(X, y, sample.astype(np.int64), n_classes, max_depth,
                                  cfg.min_samples_split, m, keys)
        trees.append(Tree(*arrays))
    return Forest(tuple(trees), ds.kind, p, n_classes)


def feature_importances(forest):
    """Mean decrease in impurity, normalised to sum to one.

    Each tree's vector is normalised before averaging; trees without any
    split contribute nothing.
    """
    per_tree = []
    for tree in forest.trees:
        imp = tree.importances(forest.n_features)
        s = imp.sum()
        if s > 0:
            per_tree.append(imp / s)
    if not per_tree:
        raise NoSplitError("no tree in the forest has a split")
    avg = np.mean(per_tree, axis=0)
    return avg / avg.sum()
