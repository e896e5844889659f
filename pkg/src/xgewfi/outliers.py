"""Interquartile-range outlier fences and the detect-then-null step."""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFeatureError, EmptySampleError

WHISKER = 1.5


def quantile_sorted(xs, q):
    """Linear interpolation between order statistics at ``q * (n - 1)``."""
    n = len(xs)
    pos = q * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    if frac == 0.0:
        return float(xs[lo])
    return float(xs[lo] + frac * (xs[hi] - xs[lo]))


@dataclass(frozen=True)
class IqrFences:
    q1: float
    median: float
    q3: float
    iqr: float
    lower: float
    upper: float

    def outside(self, values):
        values = np.asarray(values)
        return (values < self.lower) | (values > self.upper)


def compute_fences(values):
    xs = np.sort(np.asarray(values, dtype=np.float64))
    if xs.size == 0:
        raise EmptySampleError("cannot compute IQR fences of an empty sample")
    q1 = quantile_sorted(xs, 0.25)
    q3 = quantile_sorted(xs, 0.75)
    iqr = q3 - q1
    return IqrFences(
        q1=q1,
        median=quantile_sorted(xs, 0.5),
        q3=q3,
        iqr=iqr,
        lower=q1 - WHISKER * iqr,
        upper=q3 + WHISKER * iqr,
    )


@dataclass(frozen=True)
class FeatureOutliers:
    feature: str
    fences: IqrFences
    rows: np.ndarray = field(repr=False)

    @property
    def n_nulled(self):
        return int(self.rows.size)


@dataclass(frozen=True)
class OutlierSummary:
    features: tuple

    @property
    def counts(self):
        return [f.n_nulled for f in self.features]

    @property
    def fences(self):
        return [f.fences for f in self.features]

    def to_json(self):
        return [
            {
                "feature": f.feature,
                "q1": f.fences.q1,
                "median": f.fences.median,
                "q3": f.fences.q3,
                "iqr": f.fences.iqr,
                "lower": f.fences.lower,
                "upper": f.fences.upper,
                "nulled": f.n_nulled,
            }
            for f in self.features
        ]


def feature_fences(ds):
    """Fences of every feature, computed over observed cells only."""
    out = []
    for f in range(ds.n_features):
        observed = ds.observed(f)
        if observed.size == 0:
            raise EmptyFeatureError(ds.feature_names[f], "outlier detection")
        out.append(compute_fences(observed))
    return out


def apply_fences(ds, fences):
    """Mask every observed cell strictly outside its feature's fences."""
    missing = ds.missing.copy()
    per_feature = []
    for f, fence in enumerate(fences):
        hit = fence.outside(ds.values[:, f]) & ~ds.missing[:, f]
        missing[:, f] |= hit
        per_feature.append(FeatureOutliers(ds.feature_names[f], fence, np.flatnonzero(hit)))
    return ds.replace(missing=missing), OutlierSummary(tuple(per_feature))


def null_outliers(ds):
    return apply_fences(ds, feature_fences(ds))
