"""Importance-weighted aggregation of per-feature KS errors (xGEWFI)."""
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ShapeError

SUM_TOL = 1e-9


@dataclass(frozen=True)
class FeatureScore:
    feature_index: int
    importance: float
    ks_error: float
    weighted_error: float


@dataclass(frozen=True)
class GlobalScores:
    ks_global: float
    xgewfi: float


def check_importances(weights):
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ShapeError("importances must be a non-empty vector")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DataError("importances must be finite and non-negative")
    if abs(w.sum() - 1.0) > SUM_TOL:
        raise DataError(f"importances sum to {w.sum()!r}, expected 1")
    return w


def _error(ks):
    return float(getattr(ks, "d_statistic", ks))


def score(importances, ks_errors, normalized=True):
    """Per-feature weighted errors plus the two global sums.

    ``ks_errors`` holds :class:`~xgewfi.ks.KsResult` objects or plain D
    values. With ``normalized=False`` the weights are used as given, which
    allows replaying weights rounded for display that do not sum to one.
    """
    if normalized:
        w = check_importances(importances)
    else:
        w = np.asarray(importances, dtype=np.float64)
    errors = [_error(k) for k in ks_errors]
    if len(errors) != w.size:
        raise ShapeError(f"{w.size} importances but {len(errors)} KS errors")
    scores = [
        FeatureScore(i, float(w[i]), e, float(w[i]) * e)
        for i, e in enumerate(errors)
    ]
    ks_global = float(sum(errors))
    xgewfi = float(sum(s.weighted_error for s in scores))
    return scores, GlobalScores(ks_global, xgewfi)


def rank_features(scores):
    """Feature indices by decreasing weighted error; ties keep the lower index."""
    return [s.feature_index for s in
            sorted(scores, key=lambda s: (-s.weighted_error, s.feature_index))]
