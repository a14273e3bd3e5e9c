"""Command-line interface: simulate, sweep, plot, validate.

Exit codes: 0 success, 1 configuration error, 2 runtime failures present
(failed sweep cells, divergent integration, failed validation checks).
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analytic, config as cfgmod
from .dynamics import RosslerParams, integrate_coupled
from .errors import ConfigError, DomainError, RtekitError
from .estimator import EstimatorConfig
from .infoflow import LagSpec, rte
from .sweep import emit_csv, emit_plot, parse_csv, run_sweep

_TRAJ_HEADER = "t,x1,x2,x3,y1,y2,y3"


def _write_trajectory_csv(traj, path):
    t = traj.times()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_TRAJ_HEADER + "\n")
        for i in range(traj.n):
            row = [repr(float(t[i]))] + [repr(float(v)) for v in traj.states[i]]
            fh.write(",".join(row) + "\n")


def _cmd_simulate(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = RosslerParams(epsilon=args.epsilon)
    try:
        traj = integrate_coupled(params, t_transient=args.transient,
                                 t_window=args.length * args.dt, dt=args.dt)
    except RtekitError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 2
    path = out_dir / f"trajectory-eps{args.epsilon:g}.csv"
    _write_trajectory_csv(traj, path)
    print(f"wrote {traj.n} samples to {path}")
    return 0


def _cmd_sweep(args) -> int:
    if (args.config is None) == (args.preset is None):
        print("sweep needs exactly one of --config or --preset",
              file=sys.stderr)
        return 1
    if args.config is not None:
        config = cfgmod.load_config(args.config, seed_override=args.seed)
    else:
        config = cfgmod.load_preset(args.preset, seed_override=args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "sweep.csv"
    skip = []
    carried = []
    if out_path.exists():
        prior = parse_csv(out_path)
        carried = prior.rows
        skip = [r.key() for r in prior.rows]
        print(f"resuming: {len(skip)} completed cells found in {out_path}")
    result = run_sweep(config, skip_keys=skip, workers=args.threads)
    result.rows.extend(carried)
    emit_csv(result, out_path)
    n_failed = result.n_failed
    print(f"wrote {len(result.rows)} rows to {out_path} "
          f"({n_failed} failed cells)")
    return 2 if n_failed else 0


def _cmd_plot(args) -> int:
    result = parse_csv(getattr(args, "in"))
    emit_plot(result, args.quantity, args.out, direction=args.direction)
    print(f"wrote {args.out}")
    return 0


def _check(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"[{status}] {name}{suffix}")
    return bool(ok)


def _cmd_validate(args) -> int:
    ok = True

    # Gaussian closed form at the Shannon point and order 2.
    gm = analytic.GaussianModel(np.eye(1))
    h1 = analytic.gaussian_renyi_entropy(gm, 1.0)
    h2 = analytic.gaussian_renyi_entropy(gm, 2.0)
    ok &= _check("Gaussian entropy closed forms",
                 abs(h1 - 0.5 * math.log(2 * math.pi * math.e)) < 1e-12
                 and abs(h2 - 0.5 * math.log(4 * math.pi)) < 1e-12,
                 f"H1={h1:.6f} H2={h2:.6f}")

    # Log variance-ratio equivalence on a driven Gaussian autoregression.
    rng = np.random.default_rng(args.seed if args.seed is not None else 7)
    n = 50000
    y = rng.standard_normal(n)
    e = rng.standard_normal(n)
    x = np.zeros(n)
    for t in range(1, n):
        x[t] = 0.5 * x[t - 1] + 0.3 * y[t - 1] + e[t]
    f_stat = analytic.granger_f(x, y, k=1, l=1)
    ok &= _check("variance-ratio statistic near ln(1.09)",
                 abs(f_stat - math.log(1.09)) < 0.02,
                 f"F={f_stat:.5f} target={math.log(1.09):.5f}")
    spec = LagSpec(target_lags=(1,), future_step=1, source_lags=(1,))
    for alpha in (0.8, 1.0, 1.2):
        res = rte(x, y, spec, EstimatorConfig(alpha=alpha))
        tol = max(0.01, 4.0 * res.std)
        ok &= _check(f"2*RTE matches variance ratio at alpha={alpha}",
                     abs(2.0 * res.value - f_stat) < tol,
                     f"2T={2 * res.value:.5f} F={f_stat:.5f} tol={tol:.5f}")

    # Heavy-tailed closed forms: sign, monotonicity, Shannon limit.
    neg, mono, lim = True, True, True
    for k in range(1, 11):
        for l in (1, 2):
            low = (1 + k + l) / (3 + k + l)
            grid = np.linspace(low + 1e-3, 1.0, 50)
            vals = [analytic.alpha_gaussian_cond_mi(k, l, a) for a in grid]
            neg &= max(vals) <= 1e-12
            mono &= all(b - a > -1e-10 for a, b in zip(vals, vals[1:]))
            lim &= abs(analytic.alpha_gaussian_cond_mi(k, l, 1.0 - 1e-9)) < 1e-8
    ok &= _check("conditional MI non-positive on validity grid", neg)
    ok &= _check("conditional MI non-decreasing in alpha", mono)
    ok &= _check("conditional MI vanishes in the alpha->1 limit", lim)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtekit",
        description="Renyi transfer entropy experiments on coupled "
                    "Rossler oscillators")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one trajectory to CSV")
    p_sim.add_argument("--epsilon", type=float, default=0.0)
    p_sim.add_argument("--length", type=int, default=20000,
                       help="number of retained samples")
    p_sim.add_argument("--dt", type=float, default=0.1)
    p_sim.add_argument("--transient", type=float, default=1000.0)
    p_sim.add_argument("--out", default=".", help="output directory")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a configured sweep to CSV")
    p_sweep.add_argument("--config", help="configuration file path")
    p_sweep.add_argument("--preset", help="packaged preset name (desk, paper)")
    p_sweep.add_argument("--out", default=".", help="output directory")
    p_sweep.add_argument("--seed", type=int, default=None,
                         help="override the master seed")
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_plot = sub.add_parser("plot", help="render sweep CSV to SVG")
    p_plot.add_argument("--in", required=True, help="sweep CSV path")
    p_plot.add_argument("--quantity", required=True)
    p_plot.add_argument("--direction", default=None)
    p_plot.add_argument("--out", default="sweep.svg", help="output SVG path")
    p_plot.set_defaults(func=_cmd_plot)

    p_val = sub.add_parser("validate",
                           help="run the analytic-theorem checks")
    p_val.add_argument("--seed", type=int, default=None)
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except RtekitError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
