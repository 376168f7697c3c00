"""TOML experiment configs: loading, schema, full-list validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ImportError:  # 3.10 floor
    import tomli as tomllib

EXPERIMENTS = (
    "sweep-frequency",
    "bandwidth-scan",
    "power-scaling",
    "magnus-check",
    "stroboscopic-trace",
)
ENGINES = ("integrable", "ed", "both")


class ConfigError(ValueError):
    """Structurally unusable config (wrong types, missing tables)."""


@dataclass
class ExperimentConfig:
    experiment: str = ""
    engine: str = "integrable"
    boundary: str = "periodic"
    out: str | None = None
    workers: int = 0  # 0 = available parallelism
    h_z: float = 0.0
    J0: float = 0.0
    h0: float = 0.0
    N: int = 0
    omega: float | None = None
    omega_min: float | None = None
    omega_max: float | None = None
    omega_count: int | None = None
    omega_values: list[float] | None = None
    N_values: list[int] | None = None
    T_values: list[float] | None = None
    n: int | None = None
    n_max: int | None = None
    order: int | None = None
    raw: dict = field(default_factory=dict)


_MISSING = object()


def _get(table: dict, key: str, kind, default=None):
    value = table.get(key, _MISSING)
    if value is _MISSING:
        return default
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(f"config key {key!r} should be {kind.__name__}, got {value!r}")
    return value


def _get_list(table: dict, key: str, kind):
    value = table.get(key)
    if value is None:
        return None
    ok = isinstance(value, list) and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    if not ok:
        raise ConfigError(f"config key {key!r} should be a list of numbers")
    return [kind(v) for v in value]


def load_config(path) -> ExperimentConfig:
    """Parse a TOML experiment file; schema violations go through validate()."""
    text = Path(path).read_bytes()
    data = tomllib.loads(text.decode("utf-8"))
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table")
    params = data.get("params", {})
    grid = data.get("grid", {})
    time = data.get("time", {})
    magnus = data.get("magnus", {})
    for name, table in (("params", params), ("grid", grid),
                        ("time", time), ("magnus", magnus)):
        if not isinstance(table, dict):
            raise ConfigError(f"[{name}] must be a table")
    return ExperimentConfig(
        experiment=_get(data, "experiment", str, ""),
        engine=_get(data, "engine", str, "integrable"),
        boundary=_get(data, "boundary", str, "periodic"),
        out=_get(data, "out", str),
        workers=_get(data, "workers", int, 0),
        h_z=_get(params, "h_z", float, 0.0),
        J0=_get(params, "J0", float, 0.0),
        h0=_get(params, "h0", float, 0.0),
        N=_get(params, "N", int, 0),
        omega=_get(params, "omega", float),
        omega_min=_get(grid, "omega_min", float),
        omega_max=_get(grid, "omega_max", float),
        omega_count=_get(grid, "omega_count", int),
        omega_values=_get_list(grid, "omega_values", float),
        N_values=_get_list(grid, "N_values", int),
        T_values=_get_list(grid, "T_values", float),
        n=_get(time, "n", int),
        n_max=_get(time, "n_max", int),
        order=_get(magnus, "order", int),
        raw=data,
    )


def _needs_fixed_omega(cfg: ExperimentConfig) -> bool:
    if cfg.experiment in ("bandwidth-scan", "stroboscopic-trace"):
        return True
    return cfg.experiment == "power-scaling" and not cfg.omega_values


def validate(cfg: ExperimentConfig) -> list[str]:
    """Every violation, not just the first."""
    v: list[str] = []
    if cfg.experiment not in EXPERIMENTS:
        v.append(f"unknown experiment {cfg.experiment!r}")
    if cfg.engine not in ENGINES:
        v.append(f"unknown engine {cfg.engine!r}")
    if cfg.boundary not in ("open", "periodic"):
        v.append(f"unknown boundary {cfg.boundary!r}")
    if cfg.h_z <= 0:
        v.append("params.h_z must be positive")
    if cfg.N < 2:
        v.append("params.N must be >= 2")
    if cfg.workers < 0:
        v.append("workers must be >= 0")

    integrable = cfg.engine in ("integrable", "both")
    if integrable and cfg.h0 != 0.0:
        v.append("engine=integrable requires h0 = 0")
    if integrable and cfg.N % 2:
        v.append("engine=integrable requires even N")
    if integrable and cfg.boundary != "periodic":
        v.append("engine=integrable is translation invariant; boundary must be periodic")
    if cfg.engine in ("ed", "both") and cfg.boundary == "periodic" and cfg.N < 3:
        v.append("periodic ED chains need N >= 3")

    if _needs_fixed_omega(cfg) and (cfg.omega is None or cfg.omega <= 0):
        v.append("params.omega must be set and positive for this experiment")

    if cfg.experiment == "sweep-frequency":
        has_range = any(x is not None
                        for x in (cfg.omega_min, cfg.omega_max, cfg.omega_count))
        if has_range and cfg.omega_values:
            v.append("give either an omega range or omega_values, not both")
        elif cfg.omega_values is not None:
            if not cfg.omega_values:
                v.append("omega_values must not be empty")
            elif any(w <= 0 for w in cfg.omega_values):
                v.append("omega_values must be positive")
        elif has_range:
            if None in (cfg.omega_min, cfg.omega_max, cfg.omega_count):
                v.append("omega range needs omega_min, omega_max and omega_count")
            elif cfg.omega_min <= 0 or cfg.omega_max <= cfg.omega_min:
                v.append("omega range must satisfy 0 < omega_min < omega_max")
            elif cfg.omega_count < 2:
                v.append("omega_count must be >= 2")
        else:
            v.append("sweep-frequency needs an omega grid")
        if cfg.n is None or cfg.n < 1:
            v.append("time.n must be >= 1")

    if cfg.experiment in ("bandwidth-scan", "power-scaling"):
        if not cfg.N_values:
            v.append(f"{cfg.experiment} needs grid.N_values")
        elif any(sz < 2 for sz in cfg.N_values):
            v.append("N_values entries must be >= 2")
        if cfg.experiment == "power-scaling":
            if cfg.N_values and len(cfg.N_values) < 3:
                v.append("power-scaling needs at least 3 N values for the fit")
            if cfg.n_max is None or cfg.n_max < 1:
                v.append("time.n_max must be >= 1")
            if cfg.omega_values is not None and any(w <= 0 for w in cfg.omega_values):
                v.append("omega_values must be positive")

    if cfg.experiment == "magnus-check":
        if cfg.engine != "ed":
            v.append("magnus-check compares against the ED engine; set engine = 'ed'")
        if not cfg.T_values:
            v.append("magnus-check needs grid.T_values")
        elif any(t <= 0 for t in cfg.T_values):
            v.append("T_values must be positive")
        if cfg.order is None or cfg.order not in (0, 1, 2, 3):
            v.append("magnus.order must be 0..3")

    if cfg.experiment == "stroboscopic-trace":
        if cfg.n_max is None or cfg.n_max < 1:
            v.append("time.n_max must be >= 1")

    return v
