"""Time the compiled kernels against the NumPy reference backend.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from ltah import _kernels
from ltah.measures import WindowSpec
from ltah.simulate import ScenarioConfig, event_pattern, replicate_matrix


def make_arm(rng, n):
    t = rng.exponential(10.0, n)
    c = np.minimum(rng.exponential(25.0, n), 10.0)
    x = np.minimum(t, c)
    order = np.argsort(x, kind="stable")
    return (np.ascontiguousarray(x[order]),
            np.ascontiguousarray((t <= c).astype(np.int8)[order]))


def best_of(fn, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel(name, call, loops):
    out = {}
    for backend in _kernels.available_backends():
        prev = _kernels.use_backend(backend)
        try:
            call()  # warm up
            out[backend] = best_of(lambda: [call() for _ in range(loops)]) \
                / loops
        finally:
            _kernels.use_backend(prev)
    return out


def report(label, per_call):
    ref = per_call.get("reference")
    fast = per_call.get("fast")
    line = f"{label:38s}"
    for backend in ("reference", "fast"):
        if backend in per_call:
            line += f"  {backend} {per_call[backend] * 1e6:9.1f} us"
    if ref is not None and fast is not None and fast > 0:
        line += f"  speedup {ref / fast:5.1f}x"
    print(line)


def main():
    rng = np.random.default_rng(0)
    print(f"backends: {_kernels.available_backends()} "
          f"(active: {_kernels.backend_name()})")

    for n in (100, 1000, 10000):
        x, e = make_arm(rng, n)
        loops = max(1, 20000 // n)
        times = bench_kernel(
            f"arm_window_stats n={n}",
            lambda: _kernels.arm_window_stats(x, e, 2.0, 10.0), loops)
        report(f"arm_window_stats       n={n:>6}", times)

    for n in (100, 1000, 10000):
        x1, e1 = make_arm(rng, n)
        x0, e0 = make_arm(rng, n)
        loops = max(1, 20000 // n)
        times = bench_kernel(
            f"logrank n={n}",
            lambda: _kernels.logrank_stats(x1, e1, x0, e0), loops)
        report(f"logrank_stats          n={n:>6}", times)

    config = ScenarioConfig(
        event_dist=event_pattern("ph"),
        censor_dist=None,
        admin_time=10.0,
        n_per_arm=200,
        replicates=500,
        window=WindowSpec(2.0, 10.0),
        seed=0)
    per_call = {}
    for backend in _kernels.available_backends():
        prev = _kernels.use_backend(backend)
        try:
            replicate_matrix(config, workers=1)  # warm up
            per_call[backend] = best_of(
                lambda: replicate_matrix(config, workers=1), repeats=3) \
                / config.replicates
        finally:
            _kernels.use_backend(prev)
    report("replicate (n=200, full pipeline)", per_call)


if __name__ == "__main__":
    main()
