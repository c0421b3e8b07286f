"""Core survival-data containers and curve estimators.

Conventions used throughout the package:

* Observed data per subject are ``(observed_time, event)`` with
  ``event = 1`` for an observed failure and ``0`` for right censoring.
* At tied times, events are handled before censorings; this is automatic
  because every risk set is counted as ``{i : X_i >= u}``.
* Survival and cumulative-hazard step functions are right-continuous
  (value at a jump point is the post-jump value); the at-risk proportion
  is left-continuous, so its value at a drop point is the pre-drop value.
* Estimated curves are undefined beyond the largest observed time, and
  evaluation past that point raises rather than extrapolating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowBeyondSupport

__all__ = [
    "Subject",
    "ArmSample",
    "StepFunction",
    "km_estimate",
    "nelson_aalen",
    "at_risk_proportion",
    "cuminc_at",
    "rmst",
]


@dataclass(frozen=True)
class Subject:
    """A single observation: follow-up time, event indicator, arm label."""

    observed_time: float
    event: int
    arm: int

    def __post_init__(self):
        if not (np.isfinite(self.observed_time) and self.observed_time >= 0.0):
            raise ValueError(f"observed_time must be finite and >= 0, "
                             f"got {self.observed_time}")
        if self.event not in (0, 1):
            raise ValueError(f"event must be 0 or 1, got {self.event}")
        if self.arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {self.arm}")


class ArmSample:
    """Right-censored observations for one trial arm.

    Data are stored canonically sorted (time ascending, events before
    censorings at ties) in read-only arrays, so two samples holding the
    same observations compare and compute identically regardless of the
    order in which subjects were supplied.

    Parameters
    ----------
    times : array-like of float
        Observed times, all finite and nonnegative.
    events : array-like of {0, 1}
        Event indicators aligned with ``times``.
    arm : {0, 1}
        Arm label; 1 is treatment, 0 is control.
    """

    __slots__ = ("times", "events", "arm")

    def __init__(self, times, events, arm):
        t = np.asarray(times, dtype=np.float64)
        e = np.asarray(events)
        if t.ndim != 1 or e.shape != t.shape:
            raise ValueError("times and events must be 1-d and equal length")
        if t.shape[0] < 2:
            raise ValueError("an arm needs at least 2 subjects")
        if not np.all(np.isfinite(t)) or np.any(t < 0.0):
            raise ValueError("times must be finite and >= 0")
        if not np.all(np.isin(e, (0, 1))):
            raise ValueError("event indicators must be 0 or 1")
        e = e.astype(np.int8)
        if not np.any(e == 1):
            raise ValueError("an arm needs at least 1 event")
        if arm not in (0, 1):
            raise ValueError(f"arm must be 0 or 1, got {arm}")
        order = np.lexsort((-e, t))
        t = np.ascontiguousarray(t[order])
        e = np.ascontiguousarray(e[order])
        t.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "events", e)
        object.__setattr__(self, "arm", int(arm))

    def __setattr__(self, name, value):
        raise AttributeError("ArmSample is immutable")

    @property
    def n(self) -> int:
        return self.times.shape[0]

    @property
    def n_events(self) -> int:
        return int(np.sum(self.events == 1))

    @property
    def max_time(self) -> float:
        return float(self.times[-1])

    @classmethod
    def from_subjects(cls, subjects, arm) -> "ArmSample":
        picked = [s for s in subjects if s.arm == arm]
        return cls(
            [s.observed_time for s in picked],
            [s.event for s in picked],
            arm,
        )

    def __repr__(self):
        return (f"ArmSample(n={self.n}, events={self.n_events}, "
                f"arm={self.arm})")


class StepFunction:
    """Piecewise-constant function with explicit continuity convention.

    ``closed='right'`` gives a right-continuous function: the value at a
    knot is the post-jump value (survival- and hazard-type curves).
    ``closed='left'`` gives a left-continuous function: the value at a
    knot is the pre-jump value (at-risk-type curves, where the count at
    an observed time still includes the subjects leaving at that time).

    Parameters
    ----------
    knots : array-like of float
        Strictly increasing jump locations, all >= 0.
    values : array-like of float
        Function value on the piece starting (closed) or ending (left
        convention) at each knot.
    initial_value : float
        Value before the first knot.
    closed : {'right', 'left'}
    domain_end : float, optional
        Largest argument for which the function is a valid estimate;
        defaults to the last knot. Plain evaluation is not restricted,
        but integrators check it.
    """

    __slots__ = ("knots", "values", "initial_value", "closed", "domain_end")

    def __init__(self, knots, values, initial_value, closed="right",
                 domain_end=None):
        k = np.asarray(knots, dtype=np.float64)
        v = np.asarray(values, dtype=np.float64)
        if k.ndim != 1 or v.shape != k.shape or k.shape[0] == 0:
            raise ValueError("knots and values must be 1-d, equal length, "
                             "nonempty")
        if np.any(np.diff(k) <= 0.0):
            raise ValueError("knots must be strictly increasing")
        if k[0] < 0.0:
            raise ValueError("knots must be >= 0")
        if closed not in ("right", "left"):
            raise ValueError("closed must be 'right' or 'left'")
        k = k.copy()
        v = v.copy()
        k.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "initial_value", float(initial_value))
        object.__setattr__(self, "closed", closed)
        object.__setattr__(self, "domain_end",
                           float(k[-1]) if domain_end is None
                           else float(domain_end))

    def __setattr__(self, name, value):
        raise AttributeError("StepFunction is immutable")

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=np.float64)
        side = "right" if self.closed == "right" else "left"
        idx = np.searchsorted(self.knots, t_arr, side=side)
        out = np.where(idx == 0, self.initial_value,
                       self.values[np.maximum(idx, 1) - 1])
        if t_arr.ndim == 0:
            return float(out)
        return out

    def __repr__(self):
        return (f"StepFunction({self.knots.shape[0]} knots, "
                f"closed='{self.closed}')")


def _event_table(sample: ArmSample):
    """Distinct event times with event counts and at-risk counts."""
    t = sample.times
    event_times = t[sample.events == 1]
    u, d = np.unique(event_times, return_counts=True)
    at_risk = sample.n - np.searchsorted(t, u, side="left")
    return u, d.astype(np.int64), at_risk.astype(np.int64)


def km_estimate(sample: ArmSample) -> StepFunction:
    """Kaplan-Meier survival curve.

    The product-limit estimate

        S(t) = prod_{u <= t} (1 - d(u) / Y(u))

    over distinct event times ``u``, with ``d(u)`` events at ``u`` and
    ``Y(u) = #{i : X_i >= u}`` at risk. With no censoring it coincides
    with the empirical survival function, and ``S(0) = 1`` whenever all
    observed times are positive. The estimate is undefined past the
    largest observed time (``domain_end``).
    """
    u, d, y = _event_table(sample)
    values = np.cumprod(1.0 - d / y)
    return StepFunction(u, values, 1.0, closed="right",
                        domain_end=sample.max_time)


def nelson_aalen(sample: ArmSample) -> StepFunction:
    """Nelson-Aalen cumulative hazard H(t) = sum_{u <= t} d(u) / Y(u)."""
    u, d, y = _event_table(sample)
    values = np.cumsum(d / y)
    return StepFunction(u, values, 0.0, closed="right",
                        domain_end=sample.max_time)


def at_risk_proportion(sample: ArmSample) -> StepFunction:
    """Left-continuous at-risk proportion G(t) = #{i : X_i >= t} / n.

    At every observed time the returned function evaluates to the count
    including the subjects who leave at that instant, divided by ``n``;
    it is defined for all t >= 0 and reaches 0 past the last observation.
    """
    t = sample.times
    u = np.unique(t)
    remaining = sample.n - np.searchsorted(t, u, side="right")
    return StepFunction(u, remaining / sample.n, 1.0, closed="left",
                        domain_end=np.inf)


def cuminc_at(survival: StepFunction, t: float) -> float:
    """Cumulative incidence 1 - S(t) read off a survival curve."""
    t = float(t)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t > survival.domain_end:
        raise WindowBeyondSupport(
            f"t={t} exceeds the curve support (max {survival.domain_end})")
    return 1.0 - float(survival(t))


def rmst(survival: StepFunction, t: float) -> float:
    """Restricted mean survival time: the exact area under the step
    curve on [0, t], summed rectangle by rectangle.
    """
    t = float(t)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t > survival.domain_end:
        raise WindowBeyondSupport(
            f"t={t} exceeds the curve support (max {survival.domain_end})")
    k = survival.knots
    idx = int(np.searchsorted(k, t, side="right"))
    pts = np.concatenate(([0.0], k[:idx], [t]))
    heights = np.concatenate(([survival.initial_value],
                              survival.values[:idx]))
    return float(np.sum(heights * np.diff(pts)))
