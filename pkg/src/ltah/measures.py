"""Windowed average-hazard and mean-survival measures for one arm.

The central quantity is the average hazard over a window (tau1, tau2]:

    eta = {F(tau2) - F(tau1)} / {R(tau2) - R(tau1)}

with ``F = 1 - S`` the cumulative incidence and ``R(t)`` the area under
the survival curve up to ``t``. It is the ratio of event mass to
person-time in the window; with tau1 = 0 it reduces to the ordinary
average hazard on [0, tau2], and for a constant hazard it equals that
hazard whatever the window. Plug-in estimation replaces S by the
Kaplan-Meier curve.

Two variance estimates are provided for the estimator: ``var_log`` for
log(eta_hat), used for ratio-scale intervals, and ``var_plain`` for
eta_hat itself, used for difference-scale intervals. Both are sums over
observed event times u <= tau2 of a squared influence weight times
n d(u) / Y(u)^2, divided by the arm size; events at u <= tau1 receive
exactly zero weight. The analogous sum with the integrated-survival
bracket alone gives the variance of the windowed mean survival time,
used by the restricted-mean contrasts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ArmSample
from .errors import TooFewAtRisk, WindowBeyondSupport, ZeroEventMass
from .normal import norm_ppf

__all__ = [
    "WindowSpec",
    "AhEstimate",
    "RmstEstimate",
    "lt_ah_point",
    "var_log_scale",
    "var_plain_scale",
    "group_ci",
    "rmst_estimate",
    "landmark_subset",
    "variance_weights",
]


@dataclass(frozen=True)
class WindowSpec:
    """Evaluation window 0 <= tau1 < tau2."""

    tau1: float
    tau2: float

    def __post_init__(self):
        if not (np.isfinite(self.tau1) and np.isfinite(self.tau2)):
            raise ValueError("window ends must be finite")
        if not 0.0 <= self.tau1 < self.tau2:
            raise ValueError(
                f"need 0 <= tau1 < tau2, got [{self.tau1}, {self.tau2}]")

    @property
    def is_standard(self) -> bool:
        """True when tau1 == 0, i.e. the un-truncated measure."""
        return self.tau1 == 0.0


@dataclass(frozen=True)
class AhEstimate:
    """Average-hazard estimate for one arm over one window.

    ``var_log`` is the estimated variance of log(eta_hat) and
    ``var_plain`` the estimated variance of eta_hat; both already
    include the 1/n factor. ``f_diff`` and ``r_diff`` are the window's
    event mass (numerator) and person-time (denominator).
    """

    eta_hat: float
    var_log: float
    var_plain: float
    f_diff: float
    r_diff: float
    n: int
    window: WindowSpec


@dataclass(frozen=True)
class RmstEstimate:
    """Windowed mean survival time for one arm.

    ``value`` is the Kaplan-Meier area over (tau1, tau2]; with tau1 = 0
    this is the ordinary restricted mean survival time. ``var`` is the
    estimated variance of ``value`` (1/n factor included).
    """

    value: float
    var: float
    n: int
    window: WindowSpec


def _arm_window_stats(sample: ArmSample, window: WindowSpec):
    """Run the window kernel and translate status codes to errors."""
    status, s1, s2, r1, r2, vq, vu, vr = _kernels.arm_window_stats(
        sample.times, sample.events, window.tau1, window.tau2)
    if status == _kernels.STATUS_NO_SUPPORT:
        raise WindowBeyondSupport(
            f"tau2={window.tau2} exceeds the largest observed time "
            f"{sample.max_time} in arm {sample.arm}")
    return status, s1, s2, r1, r2, vq, vu, vr


def lt_ah_point(sample: ArmSample, window: WindowSpec) -> AhEstimate:
    """Average-hazard estimate with both variance scales for one arm.

    Raises ``WindowBeyondSupport`` if tau2 exceeds the largest observed
    time and ``ZeroEventMass`` if the Kaplan-Meier curve puts no event
    mass inside the window.
    """
    status, s1, s2, r1, r2, vq, vu, _ = _arm_window_stats(sample, window)
    if status == _kernels.STATUS_ZERO_MASS:
        raise ZeroEventMass(
            f"no event mass in ({window.tau1}, {window.tau2}] "
            f"for arm {sample.arm}")
    f = s1 - s2
    r = r2 - r1
    return AhEstimate(
        eta_hat=f / r,
        var_log=vq / sample.n,
        var_plain=vu / sample.n,
        f_diff=f,
        r_diff=r,
        n=sample.n,
        window=window,
    )


def var_log_scale(sample: ArmSample, window: WindowSpec) -> float:
    """Estimated variance of log(eta_hat)."""
    return lt_ah_point(sample, window).var_log


def var_plain_scale(sample: ArmSample, window: WindowSpec) -> float:
    """Estimated variance of eta_hat."""
    return lt_ah_point(sample, window).var_plain


def group_ci(estimate: AhEstimate, alpha: float = 0.05):
    """Two-sided (1 - alpha) confidence interval for one arm's average
    hazard, built on the log scale:

        exp{ log(eta_hat) +- z_{1-alpha/2} * sqrt(var_log) }

    so the interval respects the positive range of the measure.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    q = norm_ppf(1.0 - alpha / 2.0)
    half = q * np.sqrt(estimate.var_log)
    log_eta = np.log(estimate.eta_hat)
    return (float(np.exp(log_eta - half)), float(np.exp(log_eta + half)))


def rmst_estimate(sample: ArmSample, window: WindowSpec) -> RmstEstimate:
    """Windowed mean survival time with its variance for one arm."""
    status, s1, s2, r1, r2, vq, vu, vr = _arm_window_stats(sample, window)
    return RmstEstimate(
        value=r2 - r1,
        var=vr / sample.n,
        n=sample.n,
        window=window,
    )


def landmark_subset(sample: ArmSample, tau1: float) -> ArmSample:
    """Residual-time sample among subjects still under observation
    past ``tau1``: keeps ``X > tau1`` and shifts times by ``-tau1``.

    The average hazard of the shifted sample over [0, tau2 - tau1]
    equals the windowed average hazard of the full sample over
    (tau1, tau2]: the risk sets agree at every time past tau1, and the
    restriction to the sub-sample rescales the at-risk proportion and
    the sample-size divisor by the same factor.
    """
    tau1 = float(tau1)
    if tau1 < 0.0:
        raise ValueError(f"tau1 must be >= 0, got {tau1}")
    keep = sample.times > tau1
    if int(np.sum(keep)) < 2:
        raise TooFewAtRisk(
            f"only {int(np.sum(keep))} subjects past {tau1} in arm "
            f"{sample.arm}")
    return ArmSample(sample.times[keep] - tau1, sample.events[keep],
                     sample.arm)


def variance_weights(sample: ArmSample, window: WindowSpec):
    """Influence weights behind the two variance scales.

    Returns ``(u, w_log, w_plain, mass)`` over the distinct event times
    ``u <= tau2``; the variance estimates are ``sum(w^2 * mass) / n``.
    Weights at ``u <= tau1`` are exactly zero on both scales: those
    events shift the curve inside and outside the window by amounts
    that cancel in the windowed functionals.
    """
    status, s1, s2, *_ = _arm_window_stats(sample, window)
    if status == _kernels.STATUS_ZERO_MASS and s1 <= s2:
        raise ZeroEventMass(
            f"no event mass in ({window.tau1}, {window.tau2}] "
            f"for arm {sample.arm}")
    return _kernels.window_weights(sample.times, sample.events,
                                   window.tau1, window.tau2)
