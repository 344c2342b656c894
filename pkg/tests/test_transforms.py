import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hurstkit as hk
from hurstkit import (
    CorruptionKind,
    FilterKind,
    TimeSeries,
    apply_filter,
    corrupt,
    filter_linear_detrend,
    filter_log,
    filter_poly_detrend,
)


@pytest.fixture()
def base():
    rng = np.random.default_rng(17)
    return TimeSeries(rng.standard_normal(5000) * 2.3 + 1.0)


ALL_KINDS = [CorruptionKind.ar1(), CorruptionKind.sine(), CorruptionKind.linear_trend()]


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.name)
def test_corruption_std_matches_exactly(base, kind):
    out = corrupt(base, kind, seed=99)
    residual = out.values - base.values
    assert residual.std() == pytest.approx(base.stats.std, rel=1e-9)


def test_corrupt_rejects_constant_series():
    with pytest.raises(hk.DegenerateSeries):
        corrupt(TimeSeries([3.0] * 100), CorruptionKind.sine())


def test_sine_corruption_zero_crossings(base):
    out = corrupt(base, CorruptionKind.sine(cycles=10), seed=0)
    residual = out.values - base.values
    signs = np.sign(residual)
    signs = signs[signs != 0]
    crossings = int(np.sum(signs[1:] != signs[:-1]))
    assert abs(crossings - 20) <= 1


def test_sine_and_trend_ignore_seed(base):
    for kind in (CorruptionKind.sine(), CorruptionKind.linear_trend()):
        a = corrupt(base, kind, seed=1).values
        b = corrupt(base, kind, seed=2).values
        assert np.array_equal(a, b)


def test_ar1_corruption_seed_deterministic(base):
    a = corrupt(base, CorruptionKind.ar1(), seed=5).values
    b = corrupt(base, CorruptionKind.ar1(), seed=5).values
    c = corrupt(base, CorruptionKind.ar1(), seed=6).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_trend_corruption_cancelled_by_detrend(base):
    # the added ramp is affine in t, so detrending the corrupted series
    # equals detrending the original
    corrupted = corrupt(base, CorruptionKind.linear_trend(), seed=0)
    got = filter_linear_detrend(corrupted).values
    want = filter_linear_detrend(base).values
    np.testing.assert_allclose(got, want, atol=1e-9)


# --- log filter -----------------------------------------------------------


def test_log_all_ones():
    out = filter_log(TimeSeries([1.0] * 8))
    assert np.all(out.values == 0.0)


def test_log_exponentials():
    out = filter_log(TimeSeries([math.e, math.e**2, math.e**3]))
    np.testing.assert_allclose(out.values, [1.0, 2.0, 3.0], rtol=1e-12)


def test_log_rejects_zero_with_index():
    with pytest.raises(hk.NonPositiveData, match="index 2"):
        filter_log(TimeSeries([1.0, 2.0, 0.0, 3.0]))


def test_log_rejects_negative():
    with pytest.raises(hk.NonPositiveData):
        filter_log(TimeSeries([1.0, -0.5]))


# --- linear detrend -------------------------------------------------------


def test_linear_detrend_kills_exact_line():
    t = np.arange(500, dtype=float)
    out = filter_linear_detrend(TimeSeries(3.0 * t + 7.0))
    assert np.max(np.abs(out.values)) < 1e-9


def test_linear_detrend_idempotent():
    rng = np.random.default_rng(23)
    series = TimeSeries(rng.standard_normal(400) + 0.01 * np.arange(400))
    once = filter_linear_detrend(series)
    twice = filter_linear_detrend(once)
    np.testing.assert_allclose(twice.values, once.values, atol=1e-9)


def test_linear_detrend_output_mean_and_slope_vanish():
    rng = np.random.default_rng(29)
    out = filter_linear_detrend(TimeSeries(rng.standard_normal(1000) * 5))
    y = out.values
    t = np.arange(1000, dtype=float)
    t -= t.mean()
    assert abs(y.mean()) < 1e-10
    # OLS normal equation: slope = <t, y> / <t, t>
    assert abs(float(t @ y) / float(t @ t)) < 1e-10


def test_linear_detrend_too_short():
    with pytest.raises(hk.SeriesTooShort):
        filter_linear_detrend(TimeSeries([1.0]))


# --- polynomial detrend ---------------------------------------------------


def test_poly_detrend_annihilates_degree_ten_polynomial():
    n = 4000
    u = 2.0 * np.arange(n) / (n - 1) - 1.0
    coeffs = np.array([0.5, -1.0, 2.0, 0.3, -0.7, 1.1, 0.2, -0.4, 0.9, -0.2, 0.6])
    values = np.polynomial.polynomial.polyval(u, coeffs)
    out = filter_poly_detrend(TimeSeries(values), degree=10)
    assert np.max(np.abs(out.values)) < 1e-6 * np.max(np.abs(values))


def test_poly_degree_one_matches_linear_detrend():
    rng = np.random.default_rng(31)
    series = TimeSeries(rng.standard_normal(800) + 0.02 * np.arange(800))
    a = filter_poly_detrend(series, degree=1).values
    b = filter_linear_detrend(series).values
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_poly_residual_orthogonal_to_basis():
    rng = np.random.default_rng(37)
    n = 3000
    series = TimeSeries(rng.standard_normal(n))
    resid = filter_poly_detrend(series, degree=10).values
    u = 2.0 * np.arange(n) / (n - 1) - 1.0
    basis = np.polynomial.chebyshev.chebvander(u, 10)
    for col in basis.T:
        cos = abs(float(col @ resid)) / (np.linalg.norm(col) * np.linalg.norm(resid))
        assert cos < 1e-6


def test_poly_residual_mean_vanishes():
    rng = np.random.default_rng(41)
    resid = filter_poly_detrend(TimeSeries(rng.standard_normal(2000)), degree=10).values
    assert abs(resid.mean()) < 1e-10


def test_poly_too_short():
    with pytest.raises(hk.SeriesTooShort):
        filter_poly_detrend(TimeSeries(np.arange(11.0)), degree=10)


def test_apply_filter_dispatch(base):
    np.testing.assert_array_equal(
        apply_filter(base, FilterKind.linear_detrend()).values,
        filter_linear_detrend(base).values,
    )
    np.testing.assert_array_equal(
        apply_filter(base, FilterKind.poly_detrend(4)).values,
        filter_poly_detrend(base, degree=4).values,
    )


def test_kind_validation():
    with pytest.raises(ValueError):
        CorruptionKind(name="bogus")
    with pytest.raises(ValueError):
        FilterKind(name="bogus")
    with pytest.raises(ValueError):
        CorruptionKind.sine(cycles=0)
    with pytest.raises(ValueError):
        FilterKind.poly_detrend(degree=0)


@given(st.lists(st.floats(-100.0, 100.0), min_size=32, max_size=200), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_std_match_property(values, seed):
    series = TimeSeries(values)
    if series.stats.std == 0.0:
        return
    for kind in ALL_KINDS:
        out = corrupt(series, kind, seed=seed)
        residual = out.values - series.values
        assert residual.std() == pytest.approx(series.stats.std, rel=1e-9)
