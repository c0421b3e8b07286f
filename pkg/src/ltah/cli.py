"""Command-line interface.

Three subcommands: ``analyze`` runs the windowed average-hazard and
restricted-mean analyses on a dataset file, ``simulate`` executes the
scenarios in a TOML file, and ``km-export`` dumps the Kaplan-Meier
curves with at-risk counts for plotting.

Dataset files are CSV with the exact header ``time,status,arm``; one
subject per row, ``status`` 1 for an event and 0 for censoring, ``arm``
1 for treatment and 0 for control.

Exit codes: 0 on success, 2 for input problems (unreadable, malformed
or invalid data/config/arguments), 3 when the data are valid but the
requested quantity is not estimable (window past follow-up, no events
in the window). Diagnostics go to stderr; results go to stdout.
"""

from __future__ import annotations

import csv
import io
import math
import os
import sys
import tempfile
from contextlib import contextmanager

import click
import numpy as np

from .config import load_scenarios
from .core import ArmSample, km_estimate
from .errors import ConfigError, DatasetError, EstimabilityError
from .inference import logrank_test, lt_ah_difference, lt_ah_ratio, \
    rmst_difference, rmst_ratio
from .measures import WindowSpec, group_ci, lt_ah_point, rmst_estimate
from .normal import norm_ppf
from .simulate import METRICS, monte_carlo

EXIT_INPUT = 2
EXIT_ESTIMABILITY = 3


@contextmanager
def _exit_codes():
    try:
        yield
    except (DatasetError, ConfigError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except EstimabilityError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ESTIMABILITY)


def read_dataset(path):
    """Read a two-arm dataset file; returns (treatment, control).

    Raises ``DatasetError`` with the offending line number on any
    malformed row, and if either arm ends up empty, too small, or
    event-free.
    """
    times = {0: [], 1: []}
    events = {0: [], 1: []}
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["time", "status", "arm"]:
            raise DatasetError(
                f"{path}:1: header must be exactly 'time,status,arm', "
                f"got {','.join(header) if header else '<empty>'!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DatasetError(
                    f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                t = float(row[0])
            except ValueError:
                raise DatasetError(
                    f"{path}:{lineno}: time {row[0]!r} is not a number"
                ) from None
            if not (math.isfinite(t) and t >= 0.0):
                raise DatasetError(
                    f"{path}:{lineno}: time must be finite and >= 0, "
                    f"got {row[0]}")
            if row[1].strip() not in ("0", "1"):
                raise DatasetError(
                    f"{path}:{lineno}: status must be 0 or 1, got {row[1]!r}")
            if row[2].strip() not in ("0", "1"):
                raise DatasetError(
                    f"{path}:{lineno}: arm must be 0 or 1, got {row[2]!r}")
            arm = int(row[2])
            times[arm].append(t)
            events[arm].append(int(row[1]))
    for arm in (1, 0):
        if not times[arm]:
            raise DatasetError(f"{path}: no subjects in arm {arm}")
    samples = {}
    for arm in (1, 0):
        try:
            samples[arm] = ArmSample(times[arm], events[arm], arm)
        except ValueError as exc:
            raise DatasetError(f"{path}: arm {arm}: {exc}") from None
    return samples[1], samples[0]


@click.group()
def main():
    """Long-term average hazard analysis for right-censored data."""


# ---------------------------------------------------------------------------
# analyze


def _window(tau1, tau2):
    try:
        return WindowSpec(tau1, tau2)
    except ValueError as exc:
        raise DatasetError(str(exc)) from None


def _analysis_rows(arm1, arm0, window, alpha):
    """The four measure rows of the analysis table."""
    q = norm_ppf(1.0 - alpha / 2.0)
    std = _window(0.0, window.tau2)
    rows = []
    for label, win in (("LT-AH", window), ("AH", std)):
        e1 = lt_ah_point(arm1, win)
        e0 = lt_ah_point(arm0, win)
        rows.append({
            "measure": label,
            "window": win,
            "kind": "ah",
            "arm1": (e1.eta_hat, *group_ci(e1, alpha)),
            "arm0": (e0.eta_hat, *group_ci(e0, alpha)),
            "diff": lt_ah_difference(arm1, arm0, win, alpha),
            "ratio": lt_ah_ratio(arm1, arm0, win, alpha),
        })
    for label, win in (("LT-RMST", window), ("RMST", std)):
        e1 = rmst_estimate(arm1, win)
        e0 = rmst_estimate(arm0, win)

        def plain_ci(e):
            half = q * math.sqrt(e.var)
            return (e.value, e.value - half, e.value + half)

        rows.append({
            "measure": label,
            "window": win,
            "kind": "rmst",
            "arm1": plain_ci(e1),
            "arm0": plain_ci(e0),
            "diff": rmst_difference(arm1, arm0, win, alpha),
            "ratio": rmst_ratio(arm1, arm0, win, alpha),
        })
    return rows


def _fmt_p(p):
    return "<0.001" if p < 0.0005 else f"{p:.3f}"


def _fmt_window(win):
    return f"[{win.tau1:g}, {win.tau2:g}]"


def _render_table(rows, alpha, out):
    level = f"{1.0 - alpha:g}"
    header = ["measure", "window", f"treatment ({level} CI)",
              f"control ({level} CI)", f"difference ({level} CI; p)",
              f"ratio ({level} CI; p)"]
    lines = [header]
    for row in rows:
        dec = 3 if row["kind"] == "ah" else 1
        e1, lo1, hi1 = row["arm1"]
        e0, lo0, hi0 = row["arm0"]
        d = row["diff"]
        r = row["ratio"]
        lines.append([
            row["measure"],
            _fmt_window(row["window"]),
            f"{e1:.{dec}f} ({lo1:.{dec}f} to {hi1:.{dec}f})",
            f"{e0:.{dec}f} ({lo0:.{dec}f} to {hi0:.{dec}f})",
            f"{d.estimate:.{dec}f} ({d.ci_lower:.{dec}f} to "
            f"{d.ci_upper:.{dec}f}; p={_fmt_p(d.p_two_sided)})",
            f"{r.estimate:.{dec}f} ({r.ci_lower:.{dec}f} to "
            f"{r.ci_upper:.{dec}f}; p={_fmt_p(r.p_two_sided)})",
        ])
    widths = [max(len(line[c]) for line in lines)
              for c in range(len(header))]
    for line in lines:
        out.write("  ".join(cell.ljust(w)
                            for cell, w in zip(line, widths)).rstrip())
        out.write("\n")


_ANALYZE_CSV_HEADER = [
    "measure", "tau1", "tau2",
    "arm1_estimate", "arm1_ci_lower", "arm1_ci_upper",
    "arm0_estimate", "arm0_ci_lower", "arm0_ci_upper",
    "diff_estimate", "diff_ci_lower", "diff_ci_upper", "diff_z", "diff_p",
    "ratio_estimate", "ratio_ci_lower", "ratio_ci_upper", "ratio_z",
    "ratio_p",
]


def _g17(v):
    return f"{v:.17g}"


def _render_csv(rows, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_ANALYZE_CSV_HEADER)
    for row in rows:
        d = row["diff"]
        r = row["ratio"]
        writer.writerow(
            [row["measure"],
             _g17(row["window"].tau1), _g17(row["window"].tau2)]
            + [_g17(v) for v in row["arm1"]]
            + [_g17(v) for v in row["arm0"]]
            + [_g17(v) for v in (d.estimate, d.ci_lower, d.ci_upper, d.z,
                                 d.p_two_sided)]
            + [_g17(v) for v in (r.estimate, r.ci_lower, r.ci_upper, r.z,
                                 r.p_two_sided)])


@main.command()
@click.option("--data", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Dataset CSV (header: time,status,arm).")
@click.option("--tau1", required=True, type=float,
              help="Lower window end.")
@click.option("--tau2", required=True, type=float,
              help="Upper window end (horizon).")
@click.option("--alpha", default=0.05, show_default=True, type=float,
              help="Two-sided level for intervals and tests.")
@click.option("--format", "fmt", default="table", show_default=True,
              type=click.Choice(["table", "csv"]),
              help="Human table or full-precision CSV.")
def analyze(data, tau1, tau2, alpha, fmt):
    """Windowed average-hazard and restricted-mean analysis.

    Reports each measure over the requested window and over the
    standard [0, tau2] window: per-arm estimates with confidence
    intervals, and between-arm difference and ratio with tests, plus
    the log-rank test.
    """
    with _exit_codes():
        if not 0.0 < alpha < 1.0:
            raise DatasetError(f"alpha must be in (0, 1), got {alpha}")
        window = _window(tau1, tau2)
        arm1, arm0 = read_dataset(data)
        rows = _analysis_rows(arm1, arm0, window, alpha)
        lr = logrank_test(arm1, arm0, alpha)
        buf = io.StringIO()
        if fmt == "table":
            _render_table(rows, alpha, buf)
            buf.write(f"log-rank: z={lr.z:.3f}, p={_fmt_p(lr.p_two_sided)}\n")
        else:
            _render_csv(rows, buf)
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["logrank", "", "", "", "", "", "", "", "", "",
                             "", "", _g17(lr.z), _g17(lr.p_two_sided), "",
                             "", "", "", ""])
        sys.stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# km-export


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@main.command("km-export")
@click.option("--data", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Dataset CSV (header: time,status,arm).")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output CSV path.")
def km_export(data, out):
    """Export Kaplan-Meier curves and at-risk counts.

    The output has columns arm,kind,time,value: 'survival' rows are the
    step-curve knots (full precision, starting at time 0), 'at_risk'
    rows give the number still at risk at each integer time.
    """
    with _exit_codes():
        arm1, arm0 = read_dataset(data)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["arm", "kind", "time", "value"])
        for sample in (arm0, arm1):
            km = km_estimate(sample)
            writer.writerow([sample.arm, "survival", _g17(0.0), _g17(1.0)])
            for knot, value in zip(km.knots, km.values):
                writer.writerow([sample.arm, "survival", _g17(knot),
                                 _g17(value)])
            for t in range(int(math.floor(sample.max_time)) + 1):
                at_risk = sample.n - int(
                    np.searchsorted(sample.times, float(t), side="left"))
                writer.writerow([sample.arm, "at_risk", _g17(float(t)),
                                 str(at_risk)])
        _atomic_write(out, buf.getvalue())
        click.echo(f"wrote {out}", err=True)


# ---------------------------------------------------------------------------
# simulate


_SUMMARY_HEADER = [
    "scenario", "metric", "true_value", "mean_bias",
    "coverage", "coverage_mcse", "mean_ci_length",
    "rejection_rate", "rejection_mcse", "defined_count", "undefined_count",
    "n_per_arm", "replicates", "tau1", "tau2", "alpha", "seed",
]


def _opt(v):
    return "" if v is None else _g17(v)


def summary_csv_text(name, summary) -> str:
    """Render one scenario summary as deterministic CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_SUMMARY_HEADER)
    for metric in METRICS:
        m = summary.metrics[metric]
        writer.writerow([
            name, metric, _opt(m.true_value), _opt(m.mean_bias),
            _opt(m.coverage), _opt(m.coverage_mcse),
            _opt(m.mean_ci_length),
            _g17(m.rejection_rate), _g17(m.rejection_mcse),
            str(m.defined_count), str(m.undefined_count),
            str(summary.n_per_arm), str(summary.replicates),
            _g17(summary.window.tau1), _g17(summary.window.tau2),
            _g17(summary.alpha), str(summary.seed),
        ])
    return buf.getvalue()


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="TOML scenario file.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Directory for per-scenario summary CSVs.")
@click.option("--threads", default=1, show_default=True, type=int,
              help="Worker processes; results are identical for any "
                   "value.")
def simulate(config_path, out_dir, threads):
    """Run the Monte-Carlo scenarios in a config file.

    Writes one summary CSV per scenario (named after it) into the
    output directory; writes are atomic and results are independent of
    the thread count.
    """
    with _exit_codes():
        if threads < 1:
            raise ConfigError(f"threads must be >= 1, got {threads}")
        scenarios = load_scenarios(config_path)
        os.makedirs(out_dir, exist_ok=True)
        for name, cfg in scenarios:
            click.echo(
                f"running {name}: {cfg.replicates} replicates, "
                f"n={cfg.n_per_arm}/arm", err=True)
            summary = monte_carlo(cfg, workers=threads)
            path = os.path.join(out_dir, f"{name}.csv")
            _atomic_write(path, summary_csv_text(name, summary))
            click.echo(f"wrote {path}", err=True)


if __name__ == "__main__":
    main()
