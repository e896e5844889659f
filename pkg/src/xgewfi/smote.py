"""SMOTE-style oversampling by interpolation between nearest neighbours.

Classification grows each class below the majority size; regression grows
the whole table and interpolates the target with the same weight.
"""
from dataclasses import dataclass

import numpy as np

from .corrupt import cell_count
from .dataset import Kind
from . import _knn
from .errors import ClassTooSmallError, ConfigError, DataError
from .rng import substream

@dataclass(frozen=True)
class AugmentConfig:
    k: int = 5
    target_ratio: float = 2.0
    seed: int = 1

    def validate(self):
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if not self.target_ratio >= 1.0:
            raise ConfigError(f"target_ratio={self.target_ratio} must be >= 1")


@dataclass(frozen=True)
class PoolSummary:
    label: object  # class index, or None for the regression pool
    original: int
    generated: int
    start: int  # first appended row produced from this pool


@dataclass(frozen=True)
class AugmentSummary:
    n_original: int
    n_generated: int
    pools: tuple
    k: int
    target_ratio: float

    @property
    def generated_rows(self):
        return np.arange(self.n_original, self.n_original + self.n_generated)

    def to_json(self):
        return {
            "k": self.k,
            "target_ratio": self.target_ratio,
            "n_original": self.n_original,
            "n_generated": self.n_generated,
            "generated_rows": (
                [[self.n_original, self.n_original + self.n_generated]]
                if self.n_generated else []
            ),
            "pools": [
                {
                    "class": p.label,
                    "original": p.original,
                    "generated": p.generated,
                    "rows": [p.start, p.start + p.generated],
                }
                for p in self.pools
            ],
        }


def _interpolate(base, other, u):
    lo = np.minimum(base, other)
    hi = np.maximum(base, other)
    return np.clip(base + u * (other - base), lo, hi)


def _plan(ds, cfg):
    """(label, pool rows, number of rows to add) for every pool."""
    if ds.kind is Kind.REGRESSION:
        n = ds.n_samples
        return [(None, np.arange(n), cell_count(cfg.target_ratio, n) - n)]
    labels, counts = np.unique(ds.target.astype(np.int64), return_counts=True)
    majority = counts.max()
    plan = []
    for label, size in zip(labels, counts):
        goal = min(cell_count(cfg.target_ratio, int(size)), int(majority))
        plan.append((int(label), np.flatnonzero(ds.target == label), max(goal - int(size), 0)))
    return plan


def augment(ds, cfg=None):
    cfg = cfg or AugmentConfig()
    cfg.validate()
    if ds.missing.any():
        raise DataError("augmentation requires a dataset without missing cells")
    new_x, new_y, pools = [], [], []
    offset = ds.n_samples
    for label, members, n_new in _plan(ds, cfg):
        if n_new > 0 and members.size < cfg.k + 1:
            raise ClassTooSmallError(label, int(members.size), cfg.k + 1)
        pools.append(PoolSummary(label, int(members.size), int(n_new), offset))
        if n_new == 0:
            continue
        offset += n_new
        rng = substream(cfg.seed, "smote", "all" if label is None else label)
        bases = rng.integers(0, members.size, size=n_new)
        picks = rng.integers(0, cfg.k, size=n_new)
        u = rng.random(n_new)
        pool = ds.values[members]
        used = np.unique(bases)
        nbrs = np.empty((members.size, cfg.k), dtype=np.int64)
        nbrs[used] = _knn.k_nearest(np.ascontiguousarray(pool), used, cfg.k)
        partner = nbrs[bases, picks]
        new_x.append(_interpolate(pool[bases], pool[partner], u[:, None]))
        if label is None:
            t = ds.target[members]
            new_y.append(_interpolate(t[bases], t[partner], u))
        else:
            new_y.append(np.full(n_new, float(label)))
    n_gen = offset - ds.n_samples
    summary = AugmentSummary(ds.n_samples, n_gen, tuple(pools), cfg.k, cfg.target_ratio)
    if n_gen == 0:
        return ds, summary
    values = np.vstack([ds.values] + new_x)
    target = np.concatenate([ds.target] + new_y)
    return ds.replace(values=values, missing=np.zeros(values.shape, bool), target=target), summary
