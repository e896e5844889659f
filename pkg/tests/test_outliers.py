import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xgewfi.errors import EmptyFeatureError, EmptySampleError
from xgewfi.outliers import apply_fences, compute_fences, feature_fences, null_outliers

from conftest import make_ds


def order_statistic(values, k):
    """k-th smallest value found by counting, without sorting."""
    for v in values:
        below = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        if below <= k < below + equal:
            return v
    raise AssertionError("unreachable")


def oracle_quantile(values, q):
    pos = q * (len(values) - 1)
    lo = int(pos)
    frac = pos - lo
    a = order_statistic(values, lo)
    if frac == 0:
        return a
    b = order_statistic(values, min(lo + 1, len(values) - 1))
    return a + frac * (b - a)


def test_worked_example():
    f = compute_fences([1, 2, 3, 4, 5, 6, 7, 8, 9, 100])
    assert (f.q1, f.q3, f.iqr, f.lower, f.upper) == (3.25, 7.75, 4.5, -3.5, 14.5)


def test_worked_example_matches_oracle():
    v = [1, 2, 3, 4, 5, 6, 7, 8, 9, 100]
    assert oracle_quantile(v, 0.25) == 3.25
    assert oracle_quantile(v, 0.75) == 7.75


def test_constant_vector():
    f = compute_fences([5, 5, 5, 5])
    assert f.iqr == 0 and f.lower == f.upper == 5


def test_single_element():
    f = compute_fences([7])
    assert f.q1 == f.q3 == 7 and (f.lower, f.upper) == (7, 7)


def test_empty_rejected():
    with pytest.raises(EmptySampleError):
        compute_fences([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40))
def test_fence_invariants(values):
    f = compute_fences(values)
    assert f.iqr >= 0
    assert f.lower == f.q1 - 1.5 * f.iqr
    assert f.upper == f.q3 + 1.5 * f.iqr
    assert f.lower <= f.upper
    assert abs(f.q1 - oracle_quantile(values, 0.25)) <= 1e-9 * max(1.0, abs(f.q1))
    assert abs(f.q3 - oracle_quantile(values, 0.75)) <= 1e-9 * max(1.0, abs(f.q3))


def test_null_outliers_nulls_only_the_extreme_value():
    col = [1, 2, 3, 4, 5, 6, 7, 8, 9, 100]
    ds = make_ds(np.array(col, float)[:, None])
    out, summary = null_outliers(ds)
    assert np.flatnonzero(out.missing[:, 0]).tolist() == [9]
    assert summary.counts == [1]
    assert summary.features[0].fences.upper == 14.5


def test_nothing_outside_means_unchanged(rng):
    ds = make_ds(rng.uniform(0, 1, size=(40, 3)))
    out, summary = null_outliers(ds)
    assert not out.missing.any()
    assert summary.counts == [0, 0, 0]


def test_value_on_fence_is_kept():
    f = compute_fences([0, 1, 2, 3, 4, 5, 6, 7, 8])
    assert (f.lower, f.upper) == (-4.0, 12.0)
    ds = make_ds(np.array([-4.0, 12.0, -4.5, 12.5, 3.0])[:, None])
    out, summary = apply_fences(ds, [f])
    assert out.missing[:, 0].tolist() == [False, False, True, True, False]
    assert summary.counts == [2]


def test_fences_ignore_missing_and_keep_them_missing():
    vals = np.array([[1.0], [2.0], [np.nan], [3.0], [50.0]])
    ds = make_ds(vals)
    out, summary = null_outliers(ds)
    assert out.missing[2, 0]
    assert summary.features[0].fences.q1 == compute_fences([1, 2, 3, 50]).q1
    assert summary.counts == [1]


def test_all_missing_feature_is_an_error():
    ds = make_ds([[1.0, np.nan], [2.0, np.nan]])
    with pytest.raises(EmptyFeatureError, match="x1"):
        null_outliers(ds)


def test_reapplying_original_fences_is_identity(rng):
    v = rng.standard_normal((300, 3))
    v[:5] *= 20
    ds = make_ds(v)
    fences = feature_fences(ds)
    once, _ = apply_fences(ds, fences)
    twice, s2 = apply_fences(once, fences)
    assert np.array_equal(once.missing, twice.missing)
    assert s2.counts == [0, 0, 0]


def test_per_feature_independence(rng):
    v = rng.standard_normal((200, 3)) * [1, 5, 10]
    v[rng.integers(0, 200, 6), 0] = 30
    ds = make_ds(v)
    out, _ = null_outliers(ds)
    perm = v.copy()
    perm[:, 1] = rng.permutation(perm[:, 1])
    perm[:, 2] = rng.permutation(perm[:, 2])
    out2, _ = null_outliers(make_ds(perm))
    assert np.array_equal(out.missing[:, 0], out2.missing[:, 0])
