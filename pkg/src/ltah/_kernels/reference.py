"""Pure-NumPy kernels: single-arm window statistics and log-rank sums.

These are the fallback implementations of the hot per-replicate loops;
the compiled module ``_fast`` mirrors them exactly. Both operate on
canonically sorted arrays (time ascending) and communicate through a
small status code instead of exceptions so they can run inside tight
simulation loops.

Status codes
------------
0   everything computable
1   window reaches past the largest observed time; all outputs NaN
2   no estimated event mass in the window; survival/integral outputs
    are valid but the average-hazard variances are NaN
"""

from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_NO_SUPPORT = 1
STATUS_ZERO_MASS = 2

_NAN_STATS = (np.nan,) * 7


def _boundary(tau, u, s_post, r_at):
    """Survival and integrated survival at tau, given the event grid.

    ``s_post`` holds the post-jump Kaplan-Meier values at the distinct
    event times ``u`` and ``r_at`` the running integral of the curve up
    to each ``u``. Right continuity: at an event time the post-jump
    value applies, while the integral is unaffected by the jump itself.
    """
    idx = int(np.searchsorted(u, tau, side="right")) - 1
    if idx < 0:
        return 1.0, tau * 1.0
    s = s_post[idx]
    r = r_at[idx] + s * (tau - u[idx])
    return float(s), float(r)


def arm_window_stats(times, events, tau1, tau2):
    """Window statistics for one arm.

    Returns ``(status, s1, s2, r1, r2, vq, vu, vr)`` where ``s``/``r``
    are the Kaplan-Meier survival and its running integral at the two
    window ends, ``vq`` and ``vu`` are the plug-in variances of the
    root-n scaled log-scale and plain-scale average-hazard statistics,
    and ``vr`` is the same for the windowed mean-survival statistic.
    Divide each by the arm size to get the variance of the estimate.
    """
    n = times.shape[0]
    if tau2 > times[-1]:
        return (STATUS_NO_SUPPORT, *_NAN_STATS)

    mask = events != 0
    u, d = np.unique(times[mask], return_counts=True)
    y = (n - np.searchsorted(times, u, side="left")).astype(np.float64)
    d = d.astype(np.float64)

    keep = u <= tau2
    u, d, y = u[keep], d[keep], y[keep]

    if u.shape[0] == 0:
        # no events at or before tau2: flat survival, zero event mass
        return (STATUS_ZERO_MASS, 1.0, 1.0, float(tau1), float(tau2),
                np.nan, np.nan, 0.0)

    s_post = np.cumprod(1.0 - d / y)
    s_pre = np.concatenate(([1.0], s_post[:-1]))
    widths = np.diff(u, prepend=0.0)
    r_at = np.cumsum(s_pre * widths)

    s1, r1 = _boundary(tau1, u, s_post, r_at)
    s2, r2 = _boundary(tau2, u, s_post, r_at)
    f = s1 - s2
    r = r2 - r1

    # variance measure n * d / Y^2 comes from dH(u) / G(u) with
    # G evaluated as the closed at-risk proportion Y/n
    mass = n * d / (y * y)

    early = u <= tau1
    # for u <= tau1 the integral bracket collapses to the window value
    # itself, which keeps those weights exactly zero below
    b_r = np.where(early, r, r2 - r_at)
    vr = float(np.sum(b_r * b_r * mass))

    if f <= 0.0:
        return (STATUS_ZERO_MASS, s1, s2, r1, r2, np.nan, np.nan, vr)

    b_s = np.where(early, s2 - s1, s2)
    w_q = b_s / f + b_r / r
    w_u = (b_s * r + f * b_r) / (r * r)
    vq = float(np.sum(w_q * w_q * mass))
    vu = float(np.sum(w_u * w_u * mass))
    return (STATUS_OK, s1, s2, r1, r2, vq, vu, vr)


def window_weights(times, events, tau1, tau2):
    """Per-event-time variance weights, exposed for direct inspection.

    Returns ``(u, w_log, w_plain, mass)`` over distinct event times
    ``u <= tau2``. Events at or before ``tau1`` carry exactly zero
    weight on both scales.
    """
    n = times.shape[0]
    if tau2 > times[-1]:
        raise ValueError("window reaches past the largest observed time")
    mask = events != 0
    u, d = np.unique(times[mask], return_counts=True)
    y = (n - np.searchsorted(times, u, side="left")).astype(np.float64)
    d = d.astype(np.float64)
    keep = u <= tau2
    u, d, y = u[keep], d[keep], y[keep]
    s_post = np.cumprod(1.0 - d / y)
    s_pre = np.concatenate(([1.0], s_post[:-1]))
    r_at = np.cumsum(s_pre * np.diff(u, prepend=0.0))
    s1, r1 = _boundary(tau1, u, s_post, r_at)
    s2, r2 = _boundary(tau2, u, s_post, r_at)
    f = s1 - s2
    r = r2 - r1
    if f <= 0.0:
        raise ValueError("no event mass in the window")
    early = u <= tau1
    b_r = np.where(early, r, r2 - r_at)
    b_s = np.where(early, s2 - s1, s2)
    w_q = b_s / f + b_r / r
    w_u = (b_s * r + f * b_r) / (r * r)
    mass = n * d / (y * y)
    return u, w_q, w_u, mass


def logrank_stats(times1, events1, times0, events0):
    """Unweighted two-sample log-rank sums.

    Returns ``(status, o_minus_e, var)``: the observed-minus-expected
    event count for arm 1 and its hypergeometric variance, pooled over
    distinct event times. Times with a single subject at risk carry no
    variance. status 1 means no events in either arm.
    """
    n1 = times1.shape[0]
    n0 = times0.shape[0]
    et = np.concatenate((times1[events1 != 0], times0[events0 != 0]))
    if et.shape[0] == 0:
        return (1, np.nan, np.nan)
    u = np.unique(et)

    d1 = np.zeros(u.shape[0])
    idx = np.searchsorted(u, times1[events1 != 0])
    np.add.at(d1, idx, 1.0)
    d0 = np.zeros(u.shape[0])
    idx = np.searchsorted(u, times0[events0 != 0])
    np.add.at(d0, idx, 1.0)

    y1 = (n1 - np.searchsorted(times1, u, side="left")).astype(np.float64)
    y0 = (n0 - np.searchsorted(times0, u, side="left")).astype(np.float64)
    y = y1 + y0
    d = d1 + d0

    p1 = y1 / y
    o_minus_e = float(np.sum(d1 - d * p1))
    multi = y > 1.0
    var = float(np.sum(np.where(
        multi, d * p1 * (1.0 - p1) * (y - d) / np.maximum(y - 1.0, 1.0),
        0.0)))
    return (STATUS_OK, o_minus_e, var)
