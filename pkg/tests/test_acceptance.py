"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (echoed again in the terminal
summary).  The Monte Carlo studies run at full scale with frozen seeds,
so every number below is deterministic; replicate matrices are cached
at module level and shared between criteria.
"""
import math
import os

import numpy as np
import pytest
from click.testing import CliRunner

from ltah import simulate as sim
from ltah.cli import main as cli_main
from ltah.core import ArmSample, cuminc_at, km_estimate, rmst
from ltah.inference import lt_ah_difference, lt_ah_ratio
from ltah.measures import (WindowSpec, landmark_subset, lt_ah_point,
                           var_log_scale, var_plain_scale, variance_weights)
from oracles import make_dataset, valid_window, var_oracle
from _accept import report

WORKERS = min(4, os.cpu_count() or 1)
WIN = WindowSpec(2.0, 10.0)
CENSORINGS = ("none", "light", "moderate")

_CACHE = {}


def _scenario(event, censor, n, b, seed):
    key = (event, censor, n, b, seed)
    if key not in _CACHE:
        cfg = sim.ScenarioConfig(
            event_dist=sim.event_pattern(event),
            censor_dist=sim.censor_pattern(censor),
            admin_time=10.0, n_per_arm=n, replicates=b,
            window=WIN, seed=seed)
        rows = sim.replicate_matrix(cfg, workers=WORKERS)
        _CACHE[key] = (cfg, rows, sim.summarize_replicates(cfg, rows))
    return _CACHE[key]


def _finish(num, title, failures, ok_detail):
    ok = not failures
    report(num, title, ok, ok_detail if ok else "; ".join(failures))
    assert ok, "; ".join(failures)


def _random_case(rng, max_n=None):
    while True:
        x, e = make_dataset(rng, n=max_n and int(rng.integers(6, max_n + 1)))
        win = valid_window(x, e, rng)
        if win is not None:
            return ArmSample(x, e, 0), WindowSpec(*win)


def _paired(rng):
    while True:
        x1, e1 = make_dataset(rng)
        x0, e0 = make_dataset(rng)
        tau2 = min(float(x1[-1]), float(x0[-1]))
        win = valid_window(x1, e1, rng)
        if win is None or win[1] > tau2:
            continue
        tau1, t2 = win
        ev0 = x0[e0 == 1]
        if not np.any((ev0 > tau1) & (ev0 <= t2)):
            continue
        return (ArmSample(x1, e1, 1), ArmSample(x0, e0, 0),
                WindowSpec(tau1, t2))


def test_criterion_1_exact_identities():
    rng = np.random.default_rng(101)
    failures = []

    # (a) tau1 = 0 reduction and landmark equivalence, 1000 datasets
    worst = 0.0
    for _ in range(1000):
        sample, win = _random_case(rng)
        std = lt_ah_point(sample, WindowSpec(0.0, win.tau2))
        surv = km_estimate(sample)
        f2 = cuminc_at(surv, win.tau2)
        r2 = rmst(surv, win.tau2)
        worst = max(worst, abs(std.eta_hat - f2 / r2) / (f2 / r2))
        if win.tau1 > 0.0:
            full = lt_ah_point(sample, win)
            sub = lt_ah_point(landmark_subset(sample, win.tau1),
                              WindowSpec(0.0, win.tau2 - win.tau1))
            for got, ref in ((full.eta_hat, sub.eta_hat),
                             (full.var_log, sub.var_log),
                             (full.var_plain, sub.var_plain)):
                worst = max(worst, abs(got - ref) / abs(ref))
    if worst > 1e-12:
        failures.append(f"reduction/landmark rel err {worst:.2e}")

    # (b) weights at u <= tau1 are identically zero
    zero_checked = 0
    for _ in range(400):
        sample, win = _random_case(rng)
        u, w_log, w_plain, _ = variance_weights(sample, win)
        early = u <= win.tau1
        zero_checked += int(early.sum())
        if np.any(w_log[early] != 0.0) or np.any(w_plain[early] != 0.0):
            failures.append("nonzero weight before tau1")
            break

    # (c) brute-force variance oracle, n <= 50
    worst_var = 0.0
    for _ in range(300):
        sample, win = _random_case(rng, max_n=50)
        for fn, scale in ((var_log_scale, "log"),
                          (var_plain_scale, "plain")):
            got = fn(sample, win)
            ref = var_oracle(sample.times, sample.events,
                             win.tau1, win.tau2, scale)
            worst_var = max(worst_var, abs(got - ref) / ref)
    if worst_var > 1e-10:
        failures.append(f"variance oracle rel err {worst_var:.2e}")

    # (d) CI / test coherency across alpha levels, 1000 paired datasets
    mismatches = 0
    for _ in range(1000):
        a1, a0, win = _paired(rng)
        for alpha in (0.01, 0.05, 0.10):
            for contrast in (lt_ah_ratio, lt_ah_difference):
                res = contrast(a1, a0, win, alpha=alpha)
                if res.ci_excludes_null() != (res.p_two_sided < alpha):
                    mismatches += 1
    if mismatches:
        failures.append(f"{mismatches} CI/test coherency mismatches")

    _finish(1, "exact identities and coherency", failures,
            f"max rel err {max(worst, worst_var):.1e}; "
            f"{zero_checked} pre-window weights all zero; "
            "CI/test coherent at alpha 0.01/0.05/0.10")


def test_criterion_2_bias_coverage_length():
    printed = {
        ("ph", "none"): (0.076, 0.712),
        ("ph", "light"): (0.078, 0.737),
        ("ph", "moderate"): (0.088, 0.840),
        ("no-diff", "none"): (0.082, 0.865),
        ("no-diff", "light"): (0.085, 0.894),
        ("no-diff", "moderate"): (0.094, 1.015),
    }
    failures = []
    worst_bias = worst_al = 0.0
    covs = []
    for event, seed in (("ph", 211), ("no-diff", 212)):
        for cen in CENSORINGS:
            cfg, _, summ = _scenario(event, cen, 100, 5000, seed)
            d = summ.metrics["lt_ah_diff"]
            r = summ.metrics["lt_ah_ratio"]
            tag = f"{event}/{cen}"
            if event == "ph":
                if abs(d.true_value - (-0.02)) > 1e-12 or \
                        abs(r.true_value - 0.8) > 1e-12:
                    failures.append(f"{tag}: wrong true values")
            else:
                if d.true_value != 0.0 or r.true_value != 1.0:
                    failures.append(f"{tag}: null true values not exact")
            if abs(d.mean_bias) >= 0.002:
                failures.append(f"{tag}: |bias| {abs(d.mean_bias):.4f}")
            worst_bias = max(worst_bias, abs(d.mean_bias))
            for m, label in ((d, "diff"), (r, "ratio")):
                covs.append(m.coverage)
                if not 0.94 <= m.coverage <= 0.96:
                    failures.append(
                        f"{tag} {label}: coverage {m.coverage:.4f}")
            ald, alr = printed[(event, cen)]
            for m, target, label in ((d, ald, "diff"), (r, alr, "ratio")):
                rel = m.mean_ci_length / target - 1.0
                worst_al = max(worst_al, abs(rel))
                if abs(rel) > 0.10:
                    failures.append(
                        f"{tag} {label}: CI length off {rel:+.3f}")
    # ratio estimates are biased upward under heavier censoring but
    # only modestly so at n = 100
    _, _, summ = _scenario("ph", "moderate", 100, 5000, 211)
    rbias = summ.metrics["lt_ah_ratio"].mean_bias
    if not 0.0 < rbias < 0.06:
        failures.append(f"ph/moderate ratio bias {rbias:.4f}")
    _finish(2, "bias, coverage, and CI length", failures,
            f"|bias| <= {worst_bias:.4f}; coverage "
            f"{min(covs):.3f}-{max(covs):.3f}; CI lengths within "
            f"{100 * worst_al:.1f}% of targets")


def test_criterion_3_size_and_power():
    tests = ("logrank", "ah_diff", "lt_ah_diff", "rmst_diff",
             "lt_rmst_diff")
    failures = []
    sizes = []
    for cen in CENSORINGS:
        _, _, summ = _scenario("no-diff", cen, 200, 5000, 311)
        for m in tests:
            rate = summ.metrics[m].rejection_rate
            sizes.append(rate)
            if not 0.044 <= rate <= 0.056:
                failures.append(f"null/{cen} {m}: size {rate:.4f}")
        agree = abs(summ.metrics["lt_ah_ratio"].rejection_rate
                    - summ.metrics["lt_ah_diff"].rejection_rate)
        if agree > 0.01:
            failures.append(f"null/{cen}: ratio/diff disagree {agree:.4f}")
    targets = {"logrank": 0.403, "ah_diff": 0.402, "lt_ah_diff": 0.308,
               "rmst_diff": 0.355, "lt_rmst_diff": 0.370}
    worst_power = 0.0
    _, _, summ = _scenario("ph", "none", 200, 5000, 312)
    for m, target in targets.items():
        delta = summ.metrics[m].rejection_rate - target
        worst_power = max(worst_power, abs(delta))
        if abs(delta) > 0.02:
            failures.append(f"ph/none {m}: power off {delta:+.4f}")
    agree = abs(summ.metrics["lt_ah_ratio"].rejection_rate
                - summ.metrics["lt_ah_diff"].rejection_rate)
    if agree > 0.01:
        failures.append(f"ph/none: ratio/diff disagree {agree:.4f}")
    _finish(3, "size and power", failures,
            f"sizes {min(sizes):.4f}-{max(sizes):.4f}; powers within "
            f"{worst_power:.4f} of targets")


def test_criterion_4_delayed_orderings():
    failures = []
    margins = []
    for k, seed in ((1, 411), (2, 412), (3, 413)):
        rej = {}
        for cen in CENSORINGS:
            _, _, summ = _scenario(f"delayed-{k}", cen, 200, 5000, seed)
            rej[cen] = {m: summ.metrics[m].rejection_rate
                        for m in ("lt_ah_diff", "ah_diff",
                                  "lt_rmst_diff", "rmst_diff")}
        for cen in CENSORINGS:
            r = rej[cen]
            checks = [("lt_ah_diff", "ah_diff"),
                      ("lt_rmst_diff", "rmst_diff")]
            if k == 1:
                checks.append(("lt_ah_diff", "lt_rmst_diff"))
            if k == 3:
                checks.append(("lt_rmst_diff", "lt_ah_diff"))
            for hi, lo in checks:
                margins.append(r[hi] - r[lo])
                if r[hi] <= r[lo]:
                    failures.append(
                        f"delayed-{k}/{cen}: {hi} {r[hi]:.4f} "
                        f"<= {lo} {r[lo]:.4f}")
        for m in ("ah_diff", "lt_ah_diff"):
            seq = [rej[cen][m] for cen in CENSORINGS]
            margins += [seq[0] - seq[1], seq[1] - seq[2]]
            if not seq[0] > seq[1] > seq[2]:
                failures.append(
                    f"delayed-{k} {m}: not decreasing in censoring "
                    f"{[round(v, 4) for v in seq]}")
    _finish(4, "delayed-effect power orderings", failures,
            f"24 orderings hold, smallest margin {min(margins):.4f}")


SIM_TOML = """
[[scenario]]
name = "ph-full"
event_dist = "ph"
admin_time = 10.0
n_per_arm = 200
replicates = 5000
seed = 555
[scenario.window]
tau1 = 2.0
tau2 = 10.0
"""


def test_criterion_5_cli_thread_determinism(tmp_path):
    cfg = tmp_path / "sim.toml"
    cfg.write_text(SIM_TOML)
    runner = CliRunner()
    blobs = {}
    for threads in (1, max(2, os.cpu_count() or 2)):
        out = tmp_path / f"t{threads}"
        res = runner.invoke(cli_main, [
            "simulate", "--config", str(cfg), "--out", str(out),
            "--threads", str(threads)])
        assert res.exit_code == 0, res.stderr
        blobs[threads] = (out / "ph-full.csv").read_bytes()
    vals = list(blobs.values())
    failures = []
    if vals[0] != vals[1]:
        failures.append("summary files differ across thread counts")
    _finish(5, "thread-count determinism (CLI)", failures,
            f"{len(vals[0])}-byte summaries byte-identical at "
            f"threads {sorted(blobs)}")


def test_criterion_6_se_calibration():
    cfg, rows, _ = _scenario("ph", "none", 200, 5000, 312)
    n = cfg.n_per_arm
    failures = []
    ratios = {}
    for arm in (1, 0):
        base = sim._block_col("lt", arm, 0)
        ok = rows[:, base] == 0.0
        eta = rows[ok, base + 1]
        vq = rows[ok, base + 2]
        mean_se = float(np.mean(np.sqrt(vq / n)))
        sd = float(np.std(np.log(eta), ddof=1))
        ratios[arm] = mean_se / sd
        if abs(ratios[arm] - 1.0) > 0.05:
            failures.append(f"arm {arm}: mean SE / MC SD = "
                            f"{ratios[arm]:.4f}")
    _finish(6, "SE calibration vs replicate SD", failures,
            f"mean-SE/SD ratios arm1 {ratios[1]:.3f}, "
            f"arm0 {ratios[0]:.3f}")
