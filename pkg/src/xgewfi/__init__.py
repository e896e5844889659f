"""Importance-weighted evaluation of data imputation and augmentation."""
__version__ = "0.1.0"

from .dataset import ColumnView, Dataset, Kind, column_view, load_csv, save_csv  # noqa: E402
from .ks import KsResult, ks_two_sample  # noqa: E402
from .metric import FeatureScore, GlobalScores, rank_features, score  # noqa: E402

__all__ = [
    "ColumnView",
    "Dataset",
    "FeatureScore",
    "GlobalScores",
    "Kind",
    "KsResult",
    "column_view",
    "ks_two_sample",
    "load_csv",
    "rank_features",
    "save_csv",
    "score",
]
