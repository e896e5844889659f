"""Reproducible synthetic regression / classification tables.

Both generators draw every number from one PCG64 stream keyed on
``random_state``, so equal configs give bitwise-equal datasets.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import Dataset, Kind
from .errors import ConfigError
from .rng import substream


@dataclass(frozen=True)
class GenConfig:
    n_samples: int = 25000
    n_features: int = 5
    n_informative: Optional[int] = None
    n_classes: int = 2
    shuffle: bool = True
    random_state: int = 1
    noise: float = 0.0

    @property
    def informative(self):
        if self.n_informative is None:
            return max(1, self.n_features - 2)
        return self.n_informative

    def validate(self, kind):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be positive")
        if self.n_features < 1:
            raise ConfigError("n_features must be positive")
        if self.informative < 1 or self.informative > self.n_features:
            raise ConfigError(
                f"n_informative={self.informative} must lie in [1, n_features={self.n_features}]"
            )
        if self.noise < 0:
            raise ConfigError("noise must be non-negative")
        if not 0 <= self.random_state < 2**64:
            raise ConfigError("random_state must be an unsigned 64-bit integer")
        if Kind(kind) is Kind.CLASSIFICATION:
            if self.n_classes < 2:
                raise ConfigError("n_classes must be at least 2")
            if self.n_classes > 2 ** min(self.informative, 62):
                raise ConfigError(
                    f"{self.n_classes} classes need more than {self.informative} "
                    "informative dimensions"
                )


def _names(p):
    return tuple(f"x{i}" for i in range(p))


def make_regression(cfg):
    """Sparse linear target over standard-normal features.

    ``n_informative`` randomly chosen columns get coefficients drawn from
    U[1, 100]; the rest get zero.
    """
    cfg.validate(Kind.REGRESSION)
    rng = substream(cfg.random_state, "make_regression")
    n, p = cfg.n_samples, cfg.n_features
    X = rng.standard_normal((n, p))
    coef = np.zeros(p)
    cols = rng.choice(p, size=cfg.informative, replace=False)
    coef[cols] = rng.uniform(1.0, 100.0, size=cfg.informative)
    y = X @ coef
    if cfg.noise > 0:
        y = y + cfg.noise * rng.standard_normal(n)
    if cfg.shuffle:
        order = rng.permutation(n)
        X, y = X[order], y[order]
    return Dataset.from_arrays(X, y, Kind.REGRESSION, _names(p))


def _hypercube_vertices(rng, n_classes, dim):
    """Distinct random vertices of the cube [-1, 1]^dim (side 2)."""
    seen = set()
    out = []
    while len(out) < n_classes:
        v = tuple(rng.integers(0, 2, size=dim).tolist())
        if v not in seen:
            seen.add(v)
            out.append(v)
    return 2.0 * np.array(out, dtype=np.float64) - 1.0


def make_classification(cfg):
    """One unit-variance Gaussian cluster per class.

    Class centroids sit on distinct vertices of a side-2 hypercube spanned
    by the informative columns; other columns are pure noise. Class sizes
    differ by at most one.
    """
    cfg.validate(Kind.CLASSIFICATION)
    rng = substream(cfg.random_state, "make_classification")
    n, p, c = cfg.n_samples, cfg.n_features, cfg.n_classes
    k = cfg.informative
    cols = np.sort(rng.choice(p, size=k, replace=False))
    centroids = _hypercube_vertices(rng, c, k)
    counts = np.full(c, n // c)
    counts[: n % c] += 1
    y = np.repeat(np.arange(c), counts).astype(np.float64)
    X = rng.standard_normal((n, p))
    X[:, cols] += centroids[y.astype(np.int64)]
    if cfg.shuffle:
        order = rng.permutation(n)
        X, y = X[order], y[order]
    return Dataset.from_arrays(X, y, Kind.CLASSIFICATION, _names(p))


def generate(cfg, kind):
    if Kind.parse(kind) is Kind.REGRESSION:
        return make_regression(cfg)
    return make_classification(cfg)
