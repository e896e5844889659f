import numpy as np
import pytest

from xgewfi.dataset import Dataset, Kind

ACCEPTANCE = []


def record_criterion(name, passed, detail=""):
    ACCEPTANCE.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def make_ds(values, target=None, kind=Kind.REGRESSION, missing=None):
    values = np.asarray(values, dtype=np.float64)
    if target is None:
        target = np.arange(values.shape[0], dtype=np.float64)
    if missing is None:
        missing = np.isnan(values)
    return Dataset.from_arrays(np.nan_to_num(values), target, kind, missing=missing)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
