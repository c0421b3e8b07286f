"""Kernel backend selection.

The compiled kernels are used when available; set ``LTAH_PURE_PYTHON=1``
to force the NumPy fallback, or call :func:`use_backend` at runtime.
Consumers look the functions up through this module on every call, so
the backend can be switched for benchmarking or testing.
"""

from __future__ import annotations

import os

from . import reference

STATUS_OK = reference.STATUS_OK
STATUS_NO_SUPPORT = reference.STATUS_NO_SUPPORT
STATUS_ZERO_MASS = reference.STATUS_ZERO_MASS

_BACKENDS = {"reference": reference}

try:
    if not os.environ.get("LTAH_PURE_PYTHON"):
        from . import _fast

        _BACKENDS["fast"] = _fast
except ImportError:  # extension not built
    pass

_active = "fast" if "fast" in _BACKENDS else "reference"

arm_window_stats = _BACKENDS[_active].arm_window_stats
logrank_stats = _BACKENDS[_active].logrank_stats
window_weights = reference.window_weights


def backend_name() -> str:
    """Name of the kernel backend in use ('fast' or 'reference')."""
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def use_backend(name: str) -> str:
    """Switch the kernel backend; returns the previously active name."""
    global _active, arm_window_stats, logrank_stats
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; "
                         f"available: {available_backends()}")
    previous = _active
    _active = name
    arm_window_stats = _BACKENDS[name].arm_window_stats
    logrank_stats = _BACKENDS[name].logrank_stats
    return previous
