import math

import numpy as np
import pytest
from scipy import special, stats

from ltah.normal import erf, erfc, norm_cdf, norm_ppf, norm_sf, two_sided_p


GRID = np.concatenate([
    np.linspace(-8.0, 8.0, 4001),
    np.array([-37.0, -30.0, -25.0, -12.5, 12.5, 25.0, 30.0, 37.0]),
    np.array([0.0, 1e-300, -1e-300, 0.46875, -0.46875, 4.0, -4.0]),
])


def test_erf_against_scipy():
    np.testing.assert_allclose(erf(GRID), special.erf(GRID),
                               rtol=1e-13, atol=1e-300)


def test_erfc_against_scipy():
    np.testing.assert_allclose(erfc(GRID), special.erfc(GRID),
                               rtol=1e-12, atol=0.0)


def test_erfc_deep_tail_relative_accuracy():
    z = np.array([5.0, 8.0, 12.0, 20.0, 26.0])
    np.testing.assert_allclose(erfc(z), special.erfc(z), rtol=1e-12)
    assert erfc(np.array([27.0]))[0] == 0.0  # underflow region


def test_cdf_sf_against_scipy():
    np.testing.assert_allclose(norm_cdf(GRID), special.ndtr(GRID),
                               rtol=1e-12, atol=0.0)
    np.testing.assert_allclose(norm_sf(GRID), special.ndtr(-GRID),
                               rtol=1e-12, atol=0.0)


def test_cdf_sf_symmetry():
    np.testing.assert_array_equal(norm_sf(GRID), norm_cdf(-GRID))


def test_two_sided_p_matches_definition():
    z = np.array([0.0, 0.5, -0.5, 1.0, -1.959964, 3.2, -7.0, 10.0])
    expect = 2.0 * special.ndtr(-np.abs(z))
    np.testing.assert_allclose(two_sided_p(z), expect, rtol=1e-12)


def test_two_sided_p_edge_values():
    assert two_sided_p(np.array([0.0]))[0] == 1.0
    assert two_sided_p(np.array([np.inf]))[0] == 0.0
    assert two_sided_p(np.array([-np.inf]))[0] == 0.0
    assert np.isnan(two_sided_p(np.array([np.nan]))[0])
    assert float(two_sided_p(1.959963984540054)) == pytest.approx(
        0.05, rel=1e-9)


def test_scalar_two_sided_p():
    assert two_sided_p(0.0) == 1.0
    assert isinstance(two_sided_p(1.0), float)


def test_ppf_against_scipy():
    p = np.concatenate([
        np.linspace(1e-6, 1.0 - 1e-6, 2001),
        np.array([1e-12, 1e-9, 0.5, 0.975, 1.0 - 1e-12]),
    ])
    ours = np.array([norm_ppf(v) for v in p])
    np.testing.assert_allclose(ours, stats.norm.ppf(p),
                               rtol=1e-12, atol=1e-12)


def test_ppf_round_trip():
    for p in (1e-10, 1e-5, 0.025, 0.5, 0.8, 0.975, 1.0 - 1e-8):
        z = norm_ppf(p)
        assert float(norm_cdf(z)) == pytest.approx(p, rel=1e-10, abs=1e-14)


def test_ppf_central_symmetry():
    for p in (0.01, 0.05, 0.2, 0.4):
        assert norm_ppf(p) == pytest.approx(-norm_ppf(1.0 - p), rel=1e-13)
    assert norm_ppf(0.5) == 0.0


def test_ppf_rejects_boundaries():
    for bad in (0.0, 1.0, -0.1, 1.1, math.nan):
        with pytest.raises(ValueError):
            norm_ppf(bad)


def test_erf_vectorized_shapes_and_dtypes():
    out = erf(np.array([[0.1, -0.2], [3.0, -5.0]]))
    assert out.shape == (2, 2)
    assert out.dtype == np.float64
    assert float(erf(0.5)) == pytest.approx(special.erf(0.5), rel=1e-14)
