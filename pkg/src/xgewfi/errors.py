"""Exception hierarchy.

Every error carries enough context to map it onto a CLI exit code:
``ConfigError`` -> 1, ``DataError`` -> 2, ``OSError`` -> 3.
"""


class XgewfiError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(XgewfiError, ValueError):
    pass


class DataError(XgewfiError, ValueError):
    pass


class CsvParseError(DataError):
    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        suffix = f" ({', '.join(loc)})" if loc else ""
        super().__init__(message + suffix)
        self.row = row
        self.column = column


class NonNumericCellError(CsvParseError):
    pass


class MissingTargetError(CsvParseError):
    pass


class FeatureIndexError(DataError, IndexError):
    pass


class EmptyFeatureError(DataError):
    """A feature has no observed cell left to work with."""

    def __init__(self, feature, stage=""):
        where = f" during {stage}" if stage else ""
        super().__init__(f"feature {feature!r} has no observed values{where}")
        self.feature = feature


class EmptySampleError(DataError):
    pass


class ShapeError(DataError):
    pass


class ClassTooSmallError(DataError):
    def __init__(self, label, size, needed):
        super().__init__(
            f"class {label} has {size} rows; SMOTE needs at least {needed}"
        )
        self.label = label
        self.size = size
        self.needed = needed


class DegenerateTargetError(DataError):
    pass


class NoSplitError(DataError):
    pass


class StageError(XgewfiError):
    """Wraps an error raised inside a pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
