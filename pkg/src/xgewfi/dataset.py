"""Tabular data model shared by every stage, plus CSV I/O.

Missing cells are tracked in a boolean mask next to the values; the
values array holds ``0.0`` at masked positions so nothing downstream can
pick up a NaN by accident.
"""
import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CsvParseError,
    DataError,
    FeatureIndexError,
    MissingTargetError,
    NonNumericCellError,
    ShapeError,
)


class Kind(str, enum.Enum):
    REGRESSION = "regression"
    CLASSIFICATION = "classification"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DataError(f"unknown dataset kind {value!r}") from None


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable numeric table with a per-cell missingness mask.

    ``values`` and ``missing`` are ``(n_samples, n_features)`` arrays;
    ``target`` has one entry per row and is never missing.
    """

    values: np.ndarray
    missing: np.ndarray
    target: np.ndarray
    kind: Kind
    feature_names: tuple
    target_name: str = "target"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ShapeError(f"values must be 2-D, got shape {values.shape}")
        missing = np.asarray(self.missing, dtype=bool)
        if missing.shape != values.shape:
            raise ShapeError(
                f"mask shape {missing.shape} differs from values shape {values.shape}"
            )
        target = np.asarray(self.target, dtype=np.float64)
        if target.shape != (values.shape[0],):
            raise ShapeError(
                f"target length {target.shape} does not match {values.shape[0]} rows"
            )
        kind = Kind.parse(self.kind)
        names = tuple(str(n) for n in self.feature_names)
        if len(names) != values.shape[1]:
            raise ShapeError(
                f"{len(names)} feature names for {values.shape[1]} columns"
            )
        if any(not n for n in names):
            raise DataError("feature names must be non-empty")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate feature names: {dupes}")
        # masked cells carry no value; observed cells must be finite
        values = np.where(missing, 0.0, values)
        if not np.all(np.isfinite(values)):
            raise DataError("observed cells must be finite")
        if not np.all(np.isfinite(target)):
            raise DataError("target values must be finite")
        if kind is Kind.CLASSIFICATION:
            if np.any(target < 0) or np.any(target != np.floor(target)):
                raise DataError(
                    "classification targets must be non-negative integers"
                )
        object.__setattr__(self, "values", _frozen(values, np.float64))
        object.__setattr__(self, "missing", _frozen(missing, bool))
        object.__setattr__(self, "target", _frozen(target, np.float64))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "feature_names", names)

    @classmethod
    def from_arrays(cls, values, target, kind, feature_names=None, missing=None,
                    target_name="target"):
        values = np.asarray(values, dtype=np.float64)
        if missing is None:
            missing = np.zeros(values.shape, dtype=bool)
        if feature_names is None:
            feature_names = [f"x{i}" for i in range(values.shape[1])]
        return cls(values, missing, target, kind, tuple(feature_names), target_name)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def n_features(self):
        return self.values.shape[1]

    @property
    def classes(self):
        """Sorted distinct class labels (classification only)."""
        return np.unique(self.target).astype(np.int64)

    def replace(self, values=None, missing=None, target=None):
        """Return a new dataset with some arrays swapped out."""
        return Dataset(
            self.values if values is None else values,
            self.missing if missing is None else missing,
            self.target if target is None else target,
            self.kind,
            self.feature_names,
            self.target_name,
        )

    def column_view(self, feature_index):
        return column_view(self, feature_index)

    def observed(self, feature_index):
        """Observed values of one feature, in row order."""
        return column_view(self, feature_index).present_values


@dataclass(frozen=True)
class ColumnView:
    feature_index: int
    present_values: np.ndarray
    row_indices: np.ndarray = field(repr=False)


def column_view(ds, feature_index):
    if not 0 <= feature_index < ds.n_features:
        raise FeatureIndexError(
            f"feature index {feature_index} out of range [0, {ds.n_features})"
        )
    rows = np.flatnonzero(~ds.missing[:, feature_index])
    return ColumnView(int(feature_index), ds.values[rows, feature_index], rows)


def _parse_cell(text, row, col):
    try:
        v = float(text)
    except ValueError:
        raise NonNumericCellError(f"non-numeric cell {text!r}", row, col) from None
    if not math.isfinite(v):
        raise NonNumericCellError(f"non-finite cell {text!r}", row, col)
    return v


def load_csv(path, kind):
    """Read a CSV whose last column is the target.

    Empty fields become missing cells. Row numbers in error messages are
    1-based file lines, the header being row 1.
    """
    kind = Kind.parse(kind)
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, strict=True)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty file", 1) from None
        except csv.Error as exc:
            raise CsvParseError(str(exc), 1) from None
        if len(header) < 2:
            raise CsvParseError("need at least one feature and a target column", 1)
        header = [h.strip() for h in header]
        if len(set(header)) != len(header) or any(not h for h in header):
            raise CsvParseError(f"header names must be unique and non-empty: {header}", 1)
        width = len(header)
        rows, mask, target = [], [], []
        line = 1
        while True:
            try:
                rec = next(reader)
            except StopIteration:
                break
            except csv.Error as exc:
                raise CsvParseError(str(exc), reader.line_num) from None
            line = reader.line_num
            if not rec:
                continue
            if len(rec) != width:
                raise CsvParseError(
                    f"expected {width} fields, got {len(rec)}", line, len(rec) + 1
                )
            vals = []
            miss = []
            for j, cell in enumerate(rec[:-1], start=1):
                cell = cell.strip()
                if cell == "":
                    vals.append(0.0)
                    miss.append(True)
                else:
                    vals.append(_parse_cell(cell, line, j))
                    miss.append(False)
            t = rec[-1].strip()
            if t == "":
                raise MissingTargetError("missing target value", line, width)
            target.append(_parse_cell(t, line, width))
            rows.append(vals)
            mask.append(miss)
    n_feat = width - 1
    values = np.array(rows, dtype=np.float64).reshape(len(rows), n_feat)
    missing = np.array(mask, dtype=bool).reshape(len(rows), n_feat)
    return Dataset(values, missing, np.array(target), kind, tuple(header[:-1]), header[-1])


def _fmt(v):
    return format(float(v), ".17g")


def save_csv(ds, path):
    """Write ``ds`` so that :func:`load_csv` restores it bit for bit."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(ds.feature_names) + [ds.target_name])
        for i in range(ds.n_samples):
            row = ["" if m else _fmt(v) for v, m in zip(ds.values[i], ds.missing[i])]
            row.append(_fmt(ds.target[i]))
            w.writerow(row)
