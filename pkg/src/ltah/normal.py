"""Standard normal distribution routines.

Self-contained double-precision implementations so that quantiles and
p-values are deterministic and identical on every platform: the quantile
uses Wichura's PPND16 rational approximation and the distribution
function uses Cody's rational Chebyshev approximations for erf/erfc.
Absolute accuracy is near machine precision over the full double range.
"""

from __future__ import annotations

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)
_RSQRTPI = 5.6418958354775628695e-1  # 1/sqrt(pi)

# Cody coefficients, region |x| <= 0.46875 (erf)
_ERF_A = (
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
)
_ERF_B = (
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
)

# Cody coefficients, region 0.46875 < x <= 4 (erfc)
_ERF_C = (
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
)
_ERF_D = (
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
)

# Cody coefficients, region x > 4 (erfc, scaled)
_ERF_P = (
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
)
_ERF_Q = (
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
)


def _erf_small(y2):
    # erf(y)/y for y*y = y2, valid for |y| <= 0.46875
    num = _ERF_A[4] * y2
    den = y2
    for i in range(3):
        num = (num + _ERF_A[i]) * y2
        den = (den + _ERF_B[i]) * y2
    return (num + _ERF_A[3]) / (den + _ERF_B[3])


def _erfc_mid(y):
    # erfc(y) for 0.46875 < y <= 4
    num = _ERF_C[8] * y
    den = y
    for i in range(7):
        num = (num + _ERF_C[i]) * y
        den = (den + _ERF_D[i]) * y
    res = (num + _ERF_C[7]) / (den + _ERF_D[7])
    # split the exponent to preserve accuracy in exp(-y*y)
    z = np.floor(y * 16.0) / 16.0
    dely = (y - z) * (y + z)
    return np.exp(-z * z) * np.exp(-dely) * res


def _erfc_large(y):
    # erfc(y) for y > 4
    z = 1.0 / (y * y)
    num = _ERF_P[5] * z
    den = z
    for i in range(4):
        num = (num + _ERF_P[i]) * z
        den = (den + _ERF_Q[i]) * z
    res = z * (num + _ERF_P[4]) / (den + _ERF_Q[4])
    res = (_RSQRTPI - res) / y
    zz = np.floor(y * 16.0) / 16.0
    dely = (y - zz) * (y + zz)
    with np.errstate(under="ignore"):
        return np.exp(-zz * zz) * np.exp(-dely) * res


def erfc(x):
    """Complementary error function, elementwise on arrays."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    y = np.abs(x)
    out = np.empty_like(y)

    small = y <= 0.46875
    mid = (y > 0.46875) & (y <= 4.0)
    large = y > 4.0

    if np.any(small):
        ys = y[small]
        out[small] = 1.0 - ys * _erf_small(ys * ys)
    if np.any(mid):
        out[mid] = _erfc_mid(y[mid])
    if np.any(large):
        yl = y[large]
        res = np.where(yl < 26.6, _erfc_large(np.minimum(yl, 26.6)), 0.0)
        out[large] = res
    out = np.where(np.isnan(x), np.nan, out)
    neg = x < 0.0
    out[neg] = 2.0 - out[neg]
    return float(out[0]) if scalar else out


def erf(x):
    """Error function, elementwise on arrays."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    y = np.abs(x)
    out = np.empty_like(y)
    small = y <= 0.46875
    if np.any(small):
        xs = x[small]
        out[small] = xs * _erf_small(xs * xs)
    rest = ~small
    if np.any(rest):
        out[rest] = np.sign(x[rest]) * (1.0 - erfc(y[rest]))
    out = np.where(np.isnan(x), np.nan, out)
    return float(out[0]) if scalar else out


def norm_cdf(x):
    """Standard normal distribution function Phi(x)."""
    x = np.asarray(x, dtype=np.float64)
    res = 0.5 * erfc(-x / _SQRT2)
    return float(res) if np.ndim(res) == 0 else res


def norm_sf(x):
    """Upper tail probability 1 - Phi(x), accurate in the far tail."""
    x = np.asarray(x, dtype=np.float64)
    res = 0.5 * erfc(x / _SQRT2)
    return float(res) if np.ndim(res) == 0 else res


def two_sided_p(z):
    """Two-sided normal p-value 2*(1 - Phi(|z|)); NaN passes through."""
    z = np.asarray(z, dtype=np.float64)
    res = erfc(np.abs(z) / _SQRT2)
    return float(res) if np.ndim(res) == 0 else res


def norm_ppf(p: float) -> float:
    """Standard normal quantile function (PPND16 algorithm).

    Accepts a scalar probability in the open interval (0, 1).
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {p}")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r +
                     3.3430575583588128105e4) * r +
                    6.7265770927008700853e4) * r +
                   4.5921953931549871457e4) * r +
                  1.3731693765509461125e4) * r +
                 1.9715909503065514427e3) * r +
                1.3314166789178437745e2) * r +
               3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r +
                     2.8729085735721942674e4) * r +
                    3.9307895800092710610e4) * r +
                   2.1213794301586595867e4) * r +
                  5.3941960214247511077e3) * r +
                 6.8718700749205790830e2) * r +
                4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    r = p if q < 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        num = (((((((7.74545014278341407640e-4 * r +
                     2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r +
                   1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r +
                 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r +
               1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r +
                     5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r +
                 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0)
    else:
        r -= 5.0
        num = (((((((2.01033439929228813265e-7 * r +
                     2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r +
                 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r +
               6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r +
                     1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r +
                 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0)
    x = num / den
    return -x if q < 0.0 else x
