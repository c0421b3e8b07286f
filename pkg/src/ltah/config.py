"""Scenario configuration files.

Scenarios are described in TOML as an array of ``[[scenario]]`` tables
whose keys mirror ``ScenarioConfig`` field names:

    [[scenario]]
    name = "ph-none-n200"          # optional; defaults to scenario-<k>
    event_dist = "ph"              # preset, or explicit tables (below)
    censor_dist = "none"           # preset, table, or omitted
    admin_time = 10.0
    n_per_arm = 200
    replicates = 5000
    alpha = 0.05                   # optional, default 0.05
    seed = 20260819
    [scenario.window]
    tau1 = 2.0
    tau2 = 10.0

Event presets: no-diff, ph, delayed-1, delayed-2, delayed-3.
Censoring presets: none, light, moderate.

Explicit distributions use a ``kind`` key:

    [scenario.event_dist.arm0]
    kind = "weibull"
    shape = 1.0
    scale = 10.0
    [scenario.event_dist.arm1]
    kind = "piecewise_exponential"
    breakpoints = [2.0]
    rates = [0.1, 0.075]

``kind = "degenerate"`` (censoring only) means administrative
censoring alone, same as the "none" preset.
"""

from __future__ import annotations

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError
from .measures import WindowSpec
from .simulate import Degenerate, PiecewiseExponential, ScenarioConfig, \
    Weibull, censor_pattern, event_pattern

__all__ = ["load_scenarios"]


def _dist_from_table(table: dict, where: str):
    kind = table.get("kind")
    if kind == "weibull":
        extra = set(table) - {"kind", "shape", "scale"}
        if extra or "shape" not in table or "scale" not in table:
            raise ConfigError(f"{where}: weibull needs exactly "
                              f"'shape' and 'scale'")
        return Weibull(float(table["shape"]), float(table["scale"]))
    if kind == "piecewise_exponential":
        extra = set(table) - {"kind", "breakpoints", "rates"}
        if extra or "breakpoints" not in table or "rates" not in table:
            raise ConfigError(f"{where}: piecewise_exponential needs "
                              f"exactly 'breakpoints' and 'rates'")
        return PiecewiseExponential(tuple(table["breakpoints"]),
                                    tuple(table["rates"]))
    if kind == "degenerate":
        return Degenerate()
    raise ConfigError(f"{where}: unknown distribution kind {kind!r}")


def _event_dist(value, where: str):
    if isinstance(value, str):
        try:
            return event_pattern(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    if isinstance(value, dict):
        if set(value) != {"arm0", "arm1"}:
            raise ConfigError(f"{where}: event_dist tables must be "
                              f"'arm0' and 'arm1'")
        return (_dist_from_table(value["arm0"], f"{where}.arm0"),
                _dist_from_table(value["arm1"], f"{where}.arm1"))
    raise ConfigError(f"{where}: event_dist must be a preset name or "
                      f"arm0/arm1 tables")


def _censor_dist(value, where: str):
    if value is None:
        return None
    if isinstance(value, str):
        try:
            return censor_pattern(value)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    if isinstance(value, dict):
        return _dist_from_table(value, where)
    raise ConfigError(f"{where}: censor_dist must be a preset name or a "
                      f"distribution table")


def _scenario_from_table(table: dict, position: int):
    where = f"scenario {position}"
    name = table.get("name", f"scenario-{position}")
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{where}: name must be a nonempty string")
    required = {"event_dist", "admin_time", "n_per_arm", "replicates",
                "window", "seed"}
    missing = required - set(table)
    if missing:
        raise ConfigError(f"{where}: missing fields {sorted(missing)}")
    known = required | {"name", "censor_dist", "alpha"}
    extra = set(table) - known
    if extra:
        raise ConfigError(f"{where}: unknown fields {sorted(extra)}")
    win = table["window"]
    if not isinstance(win, dict) or set(win) != {"tau1", "tau2"}:
        raise ConfigError(f"{where}: window must have exactly tau1, tau2")
    try:
        config = ScenarioConfig(
            event_dist=_event_dist(table["event_dist"], where),
            censor_dist=_censor_dist(table.get("censor_dist"), where),
            admin_time=float(table["admin_time"]),
            n_per_arm=table["n_per_arm"],
            replicates=table["replicates"],
            window=WindowSpec(float(win["tau1"]), float(win["tau2"])),
            alpha=float(table.get("alpha", 0.05)),
            seed=table["seed"],
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return name, config


def load_scenarios(path):
    """Parse a scenario file into a list of (name, ScenarioConfig).

    Raises ``ConfigError`` on any structural or value problem,
    including duplicate scenario names.
    """
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from None
    if set(data) != {"scenario"} or not isinstance(data["scenario"], list):
        raise ConfigError(f"{path}: expected one or more [[scenario]] "
                          f"tables and nothing else")
    scenarios = [
        _scenario_from_table(tab, k + 1)
        for k, tab in enumerate(data["scenario"])
    ]
    names = [name for name, _ in scenarios]
    if len(set(names)) != len(names):
        raise ConfigError(f"{path}: duplicate scenario names")
    return scenarios
