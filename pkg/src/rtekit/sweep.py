"""Sweep orchestration: coupling/order grids over the coupled Rossler pair.

A sweep integrates one trajectory per coupling value, extracts the
requested component series, and evaluates every configured
(quantity, direction, order) cell on it. Cells are deterministic under
the master seed: each cell's seed derives from the master seed and the
cell's grid indices, independent of evaluation order, so serial and
parallel runs produce identical output files.

Configuration files are flat ``key = value`` text with ``#`` comments and
dotted keys for nesting; see the shipped presets for the full key set.
Failed cells are recorded as rows with nan value/std and n_effective 0 -
the grid never has silent gaps.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import RosslerParams, Trajectory, integrate_coupled
from .errors import ConfigError, DomainError, RtekitError
from .estimator import EstimatorConfig
from .infoflow import (LagSpec, rte, rte_balance, rte_balance_effective,
                       rte_effective)

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "run_sweep",
    "emit_csv",
    "parse_csv",
    "emit_plot",
]

_CSV_HEADER = "epsilon,alpha,quantity,direction,value,std,n_effective,seed"
_QUANTITIES = ("rte", "balance", "effective", "balance_effective")
_COMPONENTS = ("x1", "x2", "x3", "y1", "y2", "y3")
_GROUPS = {"X": slice(0, 3), "Y": slice(3, 6)}


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    alpha: float
    quantity: str
    direction: str
    value: float
    std: float
    n_effective: int
    seed: int

    def key(self):
        return (self.quantity, self.direction, self.epsilon, self.alpha)

    @property
    def failed(self) -> bool:
        return math.isnan(self.value)


@dataclass
class SweepResult:
    """Grid of transfer-entropy statistics indexed by (epsilon, alpha)."""

    rows: list = field(default_factory=list)

    def sorted_rows(self):
        return sorted(self.rows, key=lambda r: (r.quantity, r.direction,
                                                r.epsilon, r.alpha))

    @property
    def n_failed(self) -> int:
        return sum(1 for r in self.rows if r.failed)


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs; see presets/desk.cfg for the file syntax."""

    epsilon_grid: tuple
    alpha_grid: tuple
    lag_specs: dict
    series_length: int = 20000
    quantities: tuple = ("effective",)
    directions: tuple = (("y1", "x1"), ("x1", "y1"))
    estimator: EstimatorConfig = None
    surrogate_kind: str = "shuffle"
    surrogate_count: int = 19
    seed: int = 0
    dt: float = 0.1
    t_transient: float = 1000.0
    rossler: RosslerParams = field(default_factory=RosslerParams)

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_grid)
        alp = tuple(float(a) for a in self.alpha_grid)
        if not eps or not alp:
            raise ConfigError("epsilon_grid and alpha_grid must be nonempty")
        if list(eps) != sorted(eps) or list(alp) != sorted(alp):
            raise ConfigError("grids must be sorted ascending")
        object.__setattr__(self, "epsilon_grid", eps)
        object.__setattr__(self, "alpha_grid", alp)
        if not self.lag_specs:
            raise ConfigError("at least one named lag spec is required")
        for q in self.quantities:
            if q not in _QUANTITIES:
                raise ConfigError(f"unknown quantity {q!r}; "
                                  f"expected one of {_QUANTITIES}")
        for tgt, src in self.directions:
            for sel in (tgt, src):
                if sel not in _COMPONENTS and sel not in _GROUPS:
                    raise ConfigError(f"unknown component selector {sel!r}")
        est = self.estimator
        if est is None:
            est = EstimatorConfig(alpha=1.0)
        object.__setattr__(self, "estimator", est)
        max_lag = max(spec.max_lag + spec.future_step
                      for spec in self.lag_specs.values())
        if self.series_length <= 10 * (max_lag + est.n_max):
            raise ConfigError(
                f"series_length={self.series_length} must exceed "
                f"10*(max lag + n_max) = {10 * (max_lag + est.n_max)}")

    def quantity_label(self, quantity: str, spec_name: str) -> str:
        return quantity if spec_name == "default" else f"{quantity}:{spec_name}"


def _extract(traj: Trajectory, sel: str) -> np.ndarray:
    if sel in _GROUPS:
        return traj.states[:, _GROUPS[sel]]
    return traj.component(sel)


def _cell_seed(master: int, i_eps: int, i_alpha: int, i_q: int,
               i_dir: int, i_spec: int) -> int:
    ss = np.random.SeedSequence((int(master), i_eps, i_alpha, i_q, i_dir, i_spec))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _evaluate_cell(quantity, target, source, spec, cfg, config, seed):
    if quantity == "rte":
        return rte(target, source, spec, cfg)
    if quantity == "balance":
        return rte_balance(target, source, spec, cfg)
    if quantity == "effective":
        return rte_effective(target, source, spec, cfg,
                             config.surrogate_kind, config.surrogate_count,
                             seed)
    return rte_balance_effective(target, source, spec, cfg,
                                 config.surrogate_kind,
                                 config.surrogate_count, seed)


def _sweep_one_epsilon(config: SweepConfig, i_eps: int, skip_keys) -> list:
    eps = config.epsilon_grid[i_eps]
    rows = []
    cells = []
    for i_spec, (spec_name, spec) in enumerate(sorted(config.lag_specs.items())):
        for i_q, quantity in enumerate(config.quantities):
            label = config.quantity_label(quantity, spec_name)
            for i_dir, (tgt, src) in enumerate(config.directions):
                direction = f"{src}->{tgt}"
                for i_alpha, alpha in enumerate(config.alpha_grid):
                    seed = _cell_seed(config.seed, i_eps, i_alpha, i_q,
                                      i_dir, i_spec)
                    if (label, direction, eps, alpha) in skip_keys:
                        continue
                    cells.append((label, direction, tgt, src, spec,
                                  alpha, seed, quantity))
    if not cells:
        return rows
    t_window = config.series_length * config.dt
    params = replace(config.rossler, epsilon=eps)
    try:
        traj = integrate_coupled(params, t_transient=config.t_transient,
                                 t_window=t_window, dt=config.dt)
    except RtekitError:
        for label, direction, _tgt, _src, _spec, alpha, seed, _q in cells:
            rows.append(SweepRow(eps, alpha, label, direction,
                                 math.nan, math.nan, 0, seed))
        return rows
    for label, direction, tgt, src, spec, alpha, seed, quantity in cells:
        target = _extract(traj, tgt)
        source = _extract(traj, src)
        try:
            cfg = replace(config.estimator, alpha=alpha)
            res = _evaluate_cell(quantity, target, source, spec, cfg,
                                 config, seed)
            rows.append(SweepRow(eps, alpha, label, direction, res.value,
                                 res.std, res.n_effective, seed))
        except RtekitError:
            rows.append(SweepRow(eps, alpha, label, direction,
                                 math.nan, math.nan, 0, seed))
    return rows


def run_sweep(config: SweepConfig, skip_keys=(), workers: int = 1) -> SweepResult:
    """Evaluate every grid cell not listed in ``skip_keys``.

    ``skip_keys`` holds (quantity, direction, epsilon, alpha) tuples of
    already-completed cells (resumption). With workers > 1, coupling
    values are processed in parallel; output is identical either way.
    """
    skip = set(skip_keys)
    result = SweepResult()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = pool.map(
                lambda i: _sweep_one_epsilon(config, i, skip),
                range(len(config.epsilon_grid)))
            for chunk in chunks:
                result.rows.extend(chunk)
    else:
        for i in range(len(config.epsilon_grid)):
            result.rows.extend(_sweep_one_epsilon(config, i, skip))
    return result


# --- CSV ------------------------------------------------------------------

def _fmt(v) -> str:
    # repr() of a float is the shortest decimal that round-trips exactly.
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(result: SweepResult, path) -> None:
    """Write the sweep grid as CSV, sorted, LF-terminated, UTF-8."""
    lines = [_CSV_HEADER]
    for r in result.sorted_rows():
        lines.append(",".join([
            _fmt(r.epsilon), _fmt(r.alpha), r.quantity, r.direction,
            _fmt(r.value), _fmt(r.std), str(r.n_effective), str(r.seed)]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path) -> SweepResult:
    """Read a sweep CSV back; floats round-trip bit-exactly."""
    result = SweepResult()
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != _CSV_HEADER:
            raise ConfigError(f"unexpected CSV header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 8:
                raise ConfigError(f"malformed CSV row {line!r}")
            result.rows.append(SweepRow(
                epsilon=float(parts[0]), alpha=float(parts[1]),
                quantity=parts[2], direction=parts[3],
                value=float(parts[4]), std=float(parts[5]),
                n_effective=int(parts[6]), seed=int(parts[7])))
    return result


# --- SVG ------------------------------------------------------------------

_PALETTE = ("#1b6ca8", "#c23b22", "#2e8540", "#8e44ad", "#b7791f",
            "#166a6a", "#5d4037", "#37474f")


def _svg_coords(values, lo, hi, pix_lo, pix_hi):
    span = hi - lo
    if span == 0.0:
        span = 1.0
    return [pix_lo + (v - lo) / span * (pix_hi - pix_lo) for v in values]


def emit_plot(result: SweepResult, quantity: str, path,
              direction: str = None) -> None:
    """Render value-vs-epsilon curves, one polyline per alpha, as SVG.

    Deterministic byte output for deterministic input. If the quantity
    appears under several directions, ``direction`` must disambiguate.
    Failed (nan) cells are omitted from their curve.
    """
    rows = [r for r in result.rows if r.quantity == quantity]
    if not rows:
        raise DomainError(f"quantity {quantity!r} not present in result")
    directions = sorted({r.direction for r in rows})
    if direction is None:
        if len(directions) > 1:
            raise DomainError(
                f"quantity {quantity!r} has several directions "
                f"{directions}; pass direction=")
        direction = directions[0]
    rows = [r for r in rows if r.direction == direction]
    if not rows:
        raise DomainError(f"direction {direction!r} not present for "
                          f"quantity {quantity!r}")
    alphas = sorted({r.alpha for r in rows})
    by_alpha = {
        a: sorted([r for r in rows if r.alpha == a and not r.failed],
                  key=lambda r: r.epsilon)
        for a in alphas
    }
    xs = [r.epsilon for r in rows]
    ys = [r.value for r in rows if not r.failed] or [0.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    width, height = 640, 440
    ml, mr, mt, mb = 70, 20, 30, 55
    px0, px1 = ml, width - mr
    py0, py1 = height - mb, mt

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{px0}" y1="{py0}" x2="{px1}" y2="{py0}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{px0}" y1="{py0}" x2="{px0}" y2="{py1}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        xp = px0 + frac * (px1 - px0)
        yp = py0 + frac * (py1 - py0)
        parts.append(f'<line x1="{xp:.2f}" y1="{py0}" x2="{xp:.2f}" '
                     f'y2="{py0 + 5}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{xp:.2f}" y="{py0 + 20}" font-size="11" '
                     f'text-anchor="middle">{xv:.3g}</text>')
        parts.append(f'<line x1="{px0 - 5}" y1="{yp:.2f}" x2="{px0}" '
                     f'y2="{yp:.2f}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{px0 - 8}" y="{yp + 4:.2f}" font-size="11" '
                     f'text-anchor="end">{yv:.3g}</text>')
    parts.append(
        f'<text x="{(px0 + px1) / 2:.2f}" y="{height - 15}" font-size="13" '
        'text-anchor="middle">coupling strength epsilon (dimensionless)'
        '</text>')
    parts.append(
        f'<text x="18" y="{(py0 + py1) / 2:.2f}" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 18 '
        f'{(py0 + py1) / 2:.2f})">{quantity} [{direction}] (nats)</text>')
    for i, a in enumerate(alphas):
        color = _PALETTE[i % len(_PALETTE)]
        pts = by_alpha[a]
        coords = zip(_svg_coords([r.epsilon for r in pts], x_lo, x_hi, px0, px1),
                     _svg_coords([r.value for r in pts], y_lo, y_hi, py0, py1))
        point_str = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.5" points="{point_str}"/>')
        ly = mt + 16 * i
        parts.append(f'<rect x="{px1 - 110}" y="{ly}" width="12" height="3" '
                     f'fill="{color}"/>')
        parts.append(f'<text x="{px1 - 92}" y="{ly + 5}" font-size="11">'
                     f'alpha = {a:g}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
