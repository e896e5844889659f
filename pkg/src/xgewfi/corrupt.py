"""Outlier and missingness injection for clean datasets.

Positions are drawn per feature from streams keyed on ``(seed, purpose,
feature)`` and depend only on the row count, so :func:`inject_missing`
can recompute the outlier positions and keep the two sets disjoint.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .rng import substream


@dataclass(frozen=True)
class CorruptConfig:
    outlier_rate: float = 0.05
    missing_rate: float = 0.30
    outlier_magnitude: float = 6.0
    seed: int = 1

    def validate(self):
        for name in ("outlier_rate", "missing_rate"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise ConfigError(f"{name}={r} must lie in [0, 1]")
        if self.outlier_rate + self.missing_rate >= 1.0:
            raise ConfigError("outlier_rate + missing_rate must be below 1")
        if not self.outlier_magnitude > 0:
            raise ConfigError("outlier_magnitude must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class CorruptionRecord:
    """Ground-truth positions, one row-index array per feature."""

    outlier_rows: tuple
    missing_rows: tuple

    def outlier_mask(self, shape):
        return _mask(shape, self.outlier_rows)

    def missing_mask(self, shape):
        return _mask(shape, self.missing_rows)


def _mask(shape, rows_per_feature):
    m = np.zeros(shape, dtype=bool)
    for f, rows in enumerate(rows_per_feature):
        m[rows, f] = True
    return m


def cell_count(rate, n_rows):
    # guard against 0.29 * 100 == 28.999999999999996
    return int(math.floor(rate * n_rows + 1e-9))


def outlier_plan(n_rows, n_features, cfg):
    """Rows and signs of the outliers for each feature."""
    n_out = cell_count(cfg.outlier_rate, n_rows)
    plan = []
    for f in range(n_features):
        rng = substream(cfg.seed, "outliers", f)
        rows = np.sort(rng.choice(n_rows, size=n_out, replace=False))
        signs = np.where(rng.random(n_out) < 0.5, -1.0, 1.0)
        plan.append((rows, signs))
    return plan


def inject_outliers(ds, cfg):
    """Replace ``floor(rate * n)`` cells per feature with ``mean +- magnitude * std``."""
    cfg.validate()
    if cfg.outlier_rate == 0:
        return ds
    values = ds.values.copy()
    for f, (rows, signs) in enumerate(outlier_plan(ds.n_samples, ds.n_features, cfg)):
        if ds.missing[rows, f].any():
            raise DataError(f"outlier position already missing in feature {ds.feature_names[f]!r}")
        observed = ds.values[~ds.missing[:, f], f]
        mu = observed.mean()
        sigma = observed.std()
        values[rows, f] = mu + signs * cfg.outlier_magnitude * sigma
    return ds.replace(values=values)


def missing_plan(ds, cfg):
    n_miss = cell_count(cfg.missing_rate, ds.n_samples)
    outliers = outlier_plan(ds.n_samples, ds.n_features, cfg) if cfg.outlier_rate > 0 else None
    plan = []
    for f in range(ds.n_features):
        allowed = ~ds.missing[:, f]
        if outliers is not None:
            allowed[outliers[f][0]] = False
        pool = np.flatnonzero(allowed)
        if n_miss > pool.size:
            raise DataError(
                f"cannot mask {n_miss} cells of feature {ds.feature_names[f]!r}: "
                f"only {pool.size} eligible"
            )
        rng = substream(cfg.seed, "missing", f)
        plan.append(np.sort(rng.choice(pool, size=n_miss, replace=False)))
    return plan


def inject_missing(ds, cfg):
    """Mask ``floor(rate * n)`` non-outlier cells per feature, uniformly (MCAR)."""
    cfg.validate()
    if cfg.missing_rate == 0:
        return ds
    missing = ds.missing.copy()
    for f, rows in enumerate(missing_plan(ds, cfg)):
        missing[rows, f] = True
    return ds.replace(missing=missing)


def corrupt(ds, cfg):
    """Outliers then missingness; also returns where they went."""
    cfg.validate()
    out = inject_outliers(ds, cfg)
    out = inject_missing(out, cfg)
    if cfg.outlier_rate > 0:
        o_rows = tuple(r for r, _ in outlier_plan(ds.n_samples, ds.n_features, cfg))
    else:
        o_rows = tuple(np.empty(0, dtype=np.int64) for _ in range(ds.n_features))
    m_rows = tuple(np.flatnonzero(out.missing[:, f] & ~ds.missing[:, f])
                   for f in range(ds.n_features))
    return out, CorruptionRecord(o_rows, m_rows)
