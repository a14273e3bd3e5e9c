"""Flat ``key = value`` configuration files for sweeps.

Syntax: one assignment per line, ``#`` starts a comment (full-line or
trailing), dotted keys express nesting, comma-separated values are lists.
Unknown keys are rejected so typos fail loudly. Example::

    epsilon_grid = 0.0, 0.05, 0.1      # coupling values
    alpha_grid = 0.8, 1.0
    series_length = 20000
    lags.default.target = 0, 1
    lags.default.future = 1
    lags.default.source = 0
"""

import math
from importlib import resources

from .dynamics import RosslerParams
from .errors import ConfigError
from .estimator import EstimatorConfig
from .infoflow import LagSpec
from .sweep import SweepConfig

__all__ = ["parse_config_text", "load_config", "load_preset", "preset_names"]

_SCALAR_KEYS = {
    "series_length": int,
    "seed": int,
    "surrogate.kind": str,
    "surrogate.count": int,
    "estimator.n_min": int,
    "estimator.n_max": int,
    "estimator.log_base": float,
    "estimator.degenerate_policy": str,
    "dynamics.dt": float,
    "dynamics.transient": float,
    "dynamics.a": float,
    "dynamics.b": float,
    "dynamics.c": float,
    "dynamics.omega1": float,
    "dynamics.omega2": float,
}
_LIST_KEYS = {"epsilon_grid", "alpha_grid", "quantities", "directions"}


def _parse_lines(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', "
                              f"got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if not key or not val:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    return values


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v.strip()) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad float list {text!r}") from None


def _ints(text: str) -> tuple:
    try:
        return tuple(int(v.strip()) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


def _strings(text: str) -> tuple:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _directions(text: str) -> tuple:
    out = []
    for token in _strings(text):
        if "->" not in token:
            raise ConfigError(f"direction {token!r} must look like 'x1->y1'")
        src, _, tgt = token.partition("->")
        out.append((tgt.strip(), src.strip()))
    return tuple(out)


def parse_config_text(text: str, seed_override: int = None) -> SweepConfig:
    """Build a SweepConfig from config-file text."""
    values = _parse_lines(text)
    lag_groups = {}
    plain = {}
    for key, val in values.items():
        if key.startswith("lags."):
            parts = key.split(".")
            if len(parts) != 3 or parts[2] not in ("target", "future", "source"):
                raise ConfigError(f"bad lag key {key!r}; expected "
                                  "lags.<name>.{target|future|source}")
            lag_groups.setdefault(parts[1], {})[parts[2]] = val
        elif key in _SCALAR_KEYS or key in _LIST_KEYS:
            plain[key] = val
        else:
            raise ConfigError(f"unknown configuration key {key!r}")

    if not lag_groups:
        lag_groups["default"] = {"target": "0, 1", "future": "1", "source": "0"}
    lag_specs = {}
    for name, group in lag_groups.items():
        if "target" not in group or "source" not in group:
            raise ConfigError(f"lag spec {name!r} needs target and source lags")
        future = int(group.get("future", "1"))
        lag_specs[name] = LagSpec(target_lags=_ints(group["target"]),
                                  future_step=future,
                                  source_lags=_ints(group["source"]))

    def scalar(key, default):
        if key not in plain:
            return default
        try:
            return _SCALAR_KEYS[key](plain[key])
        except ValueError:
            raise ConfigError(f"bad value for {key}: {plain[key]!r}") from None

    estimator = EstimatorConfig(
        alpha=1.0,
        n_min=scalar("estimator.n_min", 5),
        n_max=scalar("estimator.n_max", 50),
        log_base=scalar("estimator.log_base", math.e),
        degenerate_policy=scalar("estimator.degenerate_policy", "jitter"),
    )
    rossler = RosslerParams(
        a=scalar("dynamics.a", 0.15),
        b=scalar("dynamics.b", 0.2),
        c=scalar("dynamics.c", 10.0),
        omega1=scalar("dynamics.omega1", 1.015),
        omega2=scalar("dynamics.omega2", 0.985),
    )
    seed = scalar("seed", 0)
    if seed_override is not None:
        seed = int(seed_override)
    return SweepConfig(
        epsilon_grid=_floats(plain.get("epsilon_grid", "0.0")),
        alpha_grid=_floats(plain.get("alpha_grid", "1.0")),
        lag_specs=lag_specs,
        series_length=scalar("series_length", 20000),
        quantities=_strings(plain.get("quantities", "effective")),
        directions=_directions(plain.get("directions", "x1->y1, y1->x1")),
        estimator=estimator,
        surrogate_kind=scalar("surrogate.kind", "shuffle"),
        surrogate_count=scalar("surrogate.count", 19),
        seed=seed,
        dt=scalar("dynamics.dt", 0.1),
        t_transient=scalar("dynamics.transient", 1000.0),
        rossler=rossler,
    )


def load_config(path, seed_override: int = None) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), seed_override)


def preset_names() -> list:
    root = resources.files("rtekit").joinpath("presets")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_preset(name: str, seed_override: int = None) -> SweepConfig:
    """Load a packaged preset by name ("desk" or "paper")."""
    res = resources.files("rtekit").joinpath("presets", f"{name}.cfg")
    try:
        text = res.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {preset_names()}") from None
    return parse_config_text(text, seed_override)
