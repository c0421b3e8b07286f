# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels mirroring ``reference``; see that module for the
contract, status codes, and formulas."""

from libc.math cimport NAN

import numpy as np

STATUS_OK = 0
STATUS_NO_SUPPORT = 1
STATUS_ZERO_MASS = 2


cdef inline Py_ssize_t _last_leq(const double[::1] u, Py_ssize_t m,
                                 double tau):
    # index of the last u[j] <= tau, or -1
    cdef Py_ssize_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if u[mid] <= tau:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def arm_window_stats(const double[::1] times, const signed char[::1] events,
                     double tau1, double tau2):
    cdef Py_ssize_t n = times.shape[0]
    if tau2 > times[n - 1]:
        return (STATUS_NO_SUPPORT, NAN, NAN, NAN, NAN, NAN, NAN, NAN)

    u_np = np.empty(n, dtype=np.float64)
    d_np = np.empty(n, dtype=np.float64)
    y_np = np.empty(n, dtype=np.float64)
    s_np = np.empty(n, dtype=np.float64)
    r_np = np.empty(n, dtype=np.float64)
    cdef double[::1] u = u_np
    cdef double[::1] d = d_np
    cdef double[::1] y = y_np
    cdef double[::1] s_post = s_np
    cdef double[::1] r_at = r_np

    cdef Py_ssize_t i = 0, m = 0, j
    cdef double tcur, ybefore
    cdef int dcnt
    while i < n:
        tcur = times[i]
        if tcur > tau2:
            break
        ybefore = n - i
        dcnt = 0
        while i < n and times[i] == tcur:
            if events[i] != 0:
                dcnt += 1
            i += 1
        if dcnt > 0:
            u[m] = tcur
            d[m] = dcnt
            y[m] = ybefore
            m += 1

    if m == 0:
        return (STATUS_ZERO_MASS, 1.0, 1.0, tau1, tau2, NAN, NAN, 0.0)

    cdef double s = 1.0, r = 0.0, tprev = 0.0
    for j in range(m):
        r += s * (u[j] - tprev)
        r_at[j] = r
        s *= 1.0 - d[j] / y[j]
        s_post[j] = s
        tprev = u[j]

    cdef Py_ssize_t idx
    cdef double s1, s2, r1, r2
    idx = _last_leq(u, m, tau1)
    if idx < 0:
        s1 = 1.0
        r1 = tau1 * 1.0
    else:
        s1 = s_post[idx]
        r1 = r_at[idx] + s1 * (tau1 - u[idx])
    idx = _last_leq(u, m, tau2)
    if idx < 0:
        s2 = 1.0
        r2 = tau2 * 1.0
    else:
        s2 = s_post[idx]
        r2 = r_at[idx] + s2 * (tau2 - u[idx])

    cdef double f = s1 - s2
    cdef double rr = r2 - r1
    cdef double nn = n
    cdef double vr = 0.0, vq = 0.0, vu = 0.0
    cdef double mass, b_r, b_s, w_q, w_u
    cdef bint have_mass = f > 0.0

    for j in range(m):
        mass = nn * d[j] / (y[j] * y[j])
        if u[j] <= tau1:
            b_r = rr
            b_s = s2 - s1
        else:
            b_r = r2 - r_at[j]
            b_s = s2
        vr += b_r * b_r * mass
        if have_mass:
            w_q = b_s / f + b_r / rr
            w_u = (b_s * rr + f * b_r) / (rr * rr)
            vq += w_q * w_q * mass
            vu += w_u * w_u * mass

    if not have_mass:
        return (STATUS_ZERO_MASS, s1, s2, r1, r2, NAN, NAN, vr)
    return (STATUS_OK, s1, s2, r1, r2, vq, vu, vr)


def logrank_stats(const double[::1] times1, const signed char[::1] events1,
                  const double[::1] times0, const signed char[::1] events0):
    cdef Py_ssize_t n1 = times1.shape[0], n0 = times0.shape[0]
    cdef Py_ssize_t i1 = 0, i0 = 0
    cdef double o_minus_e = 0.0, var = 0.0
    cdef double u, y1, y0, yy, dd, p1
    cdef int d1c, d0c, any_event = 0

    while i1 < n1 or i0 < n0:
        if i1 < n1 and (i0 >= n0 or times1[i1] <= times0[i0]):
            u = times1[i1]
        else:
            u = times0[i0]
        y1 = n1 - i1
        y0 = n0 - i0
        d1c = 0
        d0c = 0
        while i1 < n1 and times1[i1] == u:
            if events1[i1] != 0:
                d1c += 1
            i1 += 1
        while i0 < n0 and times0[i0] == u:
            if events0[i0] != 0:
                d0c += 1
            i0 += 1
        dd = d1c + d0c
        if dd > 0.0:
            any_event = 1
            yy = y1 + y0
            p1 = y1 / yy
            o_minus_e += d1c - dd * p1
            if yy > 1.0:
                var += dd * p1 * (1.0 - p1) * (yy - dd) / (yy - 1.0)

    if not any_event:
        return (1, NAN, NAN)
    return (STATUS_OK, o_minus_e, var)
