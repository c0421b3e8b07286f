"""Two-arm contrasts: ratio and difference tests with confidence
intervals, plus the log-rank comparator.

All contrasts take the treatment arm first and the control arm second,
use normal-theory intervals, and satisfy the coherency property that a
(1 - alpha) interval excludes the null value exactly when the two-sided
p-value is below alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .core import ArmSample
from .errors import NoEvents
from .measures import AhEstimate, RmstEstimate, WindowSpec, lt_ah_point, \
    rmst_estimate
from .normal import norm_ppf, two_sided_p

__all__ = [
    "Measure",
    "Contrast",
    "ContrastResult",
    "lt_ah_ratio",
    "lt_ah_difference",
    "rmst_difference",
    "rmst_ratio",
    "logrank_test",
]


class Measure(str, Enum):
    LT_AH = "lt-ah"
    AH = "ah"
    LT_RMST = "lt-rmst"
    RMST = "rmst"
    LOGRANK = "logrank"


class Contrast(str, Enum):
    RATIO = "ratio"
    DIFFERENCE = "difference"
    SCORE = "score"


@dataclass(frozen=True)
class ContrastResult:
    """Outcome of one two-arm comparison.

    ``estimate`` and the interval are on the contrast's own scale
    (ratio or difference); the log-rank row carries only the test.
    ``per_arm`` holds the underlying (treatment, control) summaries
    when the contrast is built from per-arm measures.
    """

    measure: Measure
    contrast: Contrast
    estimate: float | None
    ci_lower: float | None
    ci_upper: float | None
    z: float
    p_two_sided: float
    alpha: float
    window: WindowSpec | None
    per_arm: tuple | None = None

    @property
    def null_value(self) -> float:
        return 1.0 if self.contrast is Contrast.RATIO else 0.0

    def ci_excludes_null(self) -> bool:
        if self.ci_lower is None:
            raise ValueError("no interval for this contrast")
        null = self.null_value
        return null < self.ci_lower or null > self.ci_upper


def _check_arms(arm1: ArmSample, arm0: ArmSample):
    if arm1.arm != 1 or arm0.arm != 0:
        raise ValueError("pass the treatment arm (label 1) first and the "
                         "control arm (label 0) second")


def _ah_measure(window: WindowSpec) -> Measure:
    return Measure.AH if window.is_standard else Measure.LT_AH


def _rm_measure(window: WindowSpec) -> Measure:
    return Measure.RMST if window.is_standard else Measure.LT_RMST


def lt_ah_ratio(arm1: ArmSample, arm0: ArmSample, window: WindowSpec,
                alpha: float = 0.05) -> ContrastResult:
    """Ratio of windowed average hazards, treatment over control.

    Inference is on the log scale: the z statistic is
    log(theta_hat) / sqrt(var_log_1 + var_log_0) and the interval is
    exp{log(theta_hat) +- z_{1-alpha/2} * se}. With tau1 = 0 this is
    the ordinary average hazard ratio over [0, tau2].
    """
    _check_arms(arm1, arm0)
    e1 = lt_ah_point(arm1, window)
    e0 = lt_ah_point(arm0, window)
    log_theta = float(np.log(e1.eta_hat) - np.log(e0.eta_hat))
    se = float(np.sqrt(e1.var_log + e0.var_log))
    return _wald_result(_ah_measure(window), Contrast.RATIO, log_theta, se,
                        alpha, window, (e1, e0), log_scale=True)


def lt_ah_difference(arm1: ArmSample, arm0: ArmSample, window: WindowSpec,
                     alpha: float = 0.05) -> ContrastResult:
    """Difference of windowed average hazards, treatment minus control,
    with plain-scale normal inference."""
    _check_arms(arm1, arm0)
    e1 = lt_ah_point(arm1, window)
    e0 = lt_ah_point(arm0, window)
    diff = e1.eta_hat - e0.eta_hat
    se = float(np.sqrt(e1.var_plain + e0.var_plain))
    return _wald_result(_ah_measure(window), Contrast.DIFFERENCE, diff, se,
                        alpha, window, (e1, e0), log_scale=False)


def rmst_difference(arm1: ArmSample, arm0: ArmSample, window: WindowSpec,
                    alpha: float = 0.05) -> ContrastResult:
    """Difference of windowed mean survival times, treatment minus
    control. With tau1 = 0 this is the usual restricted-mean contrast;
    a positive tau1 restricts attention to survival time accrued inside
    the window."""
    _check_arms(arm1, arm0)
    e1 = rmst_estimate(arm1, window)
    e0 = rmst_estimate(arm0, window)
    diff = e1.value - e0.value
    se = float(np.sqrt(e1.var + e0.var))
    return _wald_result(_rm_measure(window), Contrast.DIFFERENCE, diff, se,
                        alpha, window, (e1, e0), log_scale=False)


def rmst_ratio(arm1: ArmSample, arm0: ArmSample, window: WindowSpec,
               alpha: float = 0.05) -> ContrastResult:
    """Ratio of windowed mean survival times with log-scale inference,
    mirroring the average-hazard ratio construction."""
    _check_arms(arm1, arm0)
    e1 = rmst_estimate(arm1, window)
    e0 = rmst_estimate(arm0, window)
    log_theta = float(np.log(e1.value) - np.log(e0.value))
    se = float(np.sqrt(e1.var / e1.value ** 2 + e0.var / e0.value ** 2))
    return _wald_result(_rm_measure(window), Contrast.RATIO, log_theta, se,
                        alpha, window, (e1, e0), log_scale=True)


def _wald_result(measure, contrast, center, se, alpha, window, per_arm,
                 log_scale):
    """Assemble a normal-theory result from a center and its SE.

    ``center`` is on the log scale when ``log_scale`` is set; the
    degenerate se = 0 case yields a point interval with z of 0 or
    +-inf so decisions stay coherent with the interval.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    q = norm_ppf(1.0 - alpha / 2.0)
    if se > 0.0:
        z = center / se
    elif center == 0.0:
        z = 0.0
    else:
        z = float(np.inf) if center > 0 else float(-np.inf)
    p = two_sided_p(z)
    lo = center - q * se
    hi = center + q * se
    if log_scale:
        est, lo, hi = float(np.exp(center)), float(np.exp(lo)), \
            float(np.exp(hi))
    else:
        est = center
    return ContrastResult(
        measure=measure,
        contrast=contrast,
        estimate=est,
        ci_lower=float(lo),
        ci_upper=float(hi),
        z=float(z),
        p_two_sided=float(p),
        alpha=float(alpha),
        window=window,
        per_arm=per_arm,
    )


def logrank_test(arm1: ArmSample, arm0: ArmSample,
                 alpha: float = 0.05) -> ContrastResult:
    """Unweighted two-sample log-rank test.

    The statistic is the observed-minus-expected event count in the
    treatment arm over the pooled distinct event times, standardized by
    the hypergeometric variance; times with a single subject at risk
    contribute no variance. Raises ``NoEvents`` when neither arm has an
    observed event.
    """
    _check_arms(arm1, arm0)
    status, o_minus_e, var = _kernels.logrank_stats(
        arm1.times, arm1.events, arm0.times, arm0.events)
    if status != _kernels.STATUS_OK:
        raise NoEvents("log-rank test needs at least one observed event")
    if var > 0.0:
        z = o_minus_e / float(np.sqrt(var))
    else:
        # no variance implies no information; o_minus_e is then 0 too
        z = 0.0
    return ContrastResult(
        measure=Measure.LOGRANK,
        contrast=Contrast.SCORE,
        estimate=None,
        ci_lower=None,
        ci_upper=None,
        z=float(z),
        p_two_sided=float(two_sided_p(z)),
        alpha=float(alpha),
        window=None,
        per_arm=None,
    )
