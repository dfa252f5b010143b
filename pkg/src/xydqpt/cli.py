"""Command-line surface.

Subcommands map one-to-one onto sweep kinds plus ``spectrum``,
``figure`` (canned reproductions) and ``selftest`` (oracle suites).
Exit codes: 0 success, 2 configuration problem, 3 numerical failure
(the partial CSV is kept with a trailing status column).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from .sweeps import (
    ConfigError,
    NAMED_PATHS,
    SweepNumericError,
    SweepSpec,
    load_config,
    reproduce_figure,
    run_sweep,
    spec_from_dict,
)

PHI_DEFAULT = -np.pi / 2


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON sweep config; flags below override its fixed values")
    p.add_argument("--out", default=".", help="output directory (default: cwd)")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $XYDQPT_WORKERS or 1)")
    p.add_argument("--tol", type=float, default=None,
                   help="kind-specific tolerance override")
    for name in ("gamma0", "lambda0", "gammaf", "lambdaf", "beta", "phi"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--N", type=str, default=None, help="chain length, or 'inf'")
    p.add_argument("--path", choices=sorted(NAMED_PATHS), default=None,
                   help="named quench path supplying pre/post couplings")
    p.add_argument("--axis", action="append", default=[],
                   metavar="NAME=MIN:MAX:COUNT[:log] | NAME=V1,V2,...",
                   help="replace a sweep axis (repeatable)")
    p.add_argument("--label", default=None, help="path_label column value")
    p.add_argument("--csv-name", default=None, help="output CSV file name")


def _parse_axis(text: str) -> dict:
    try:
        name, rhs = text.split("=", 1)
    except ValueError:
        raise ConfigError(f"bad --axis syntax {text!r}")
    if ":" in rhs:
        parts = rhs.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"bad --axis range {text!r}")
        axis = {"name": name, "min": float(parts[0]), "max": float(parts[1]),
                "count": int(parts[2])}
        if len(parts) == 4:
            axis["scale"] = parts[3]
        return axis
    return {"name": name, "values": [float(v) for v in rhs.split(",")]}


_DEFAULT_AXES = {
    "fisher": [{"name": "beta", "values": [0.1, 1.0, 10.0]}],
    "rate": [{"name": "t", "min": 0.0, "max": 10.0, "count": 2001}],
    "mz": [{"name": "gamma0", "min": -1.0, "max": 1.0, "count": 100}],
    "order-param": [{"name": "gamma0", "min": -1.0, "max": 1.0, "count": 100}],
    "beta-c-line": [{"name": "gamma0", "min": 0.01, "max": 1.0, "count": 51}],
    "dqpt-area": [
        {"name": "gamma0", "min": 0.01, "max": 1.0, "count": 41},
        {"name": "beta", "min": 0.1, "max": 10.0, "count": 41, "scale": "log"},
    ],
}


def _spec_from_args(kind: str, args) -> SweepSpec:
    if args.config:
        raws = load_config(args.config)
        if len(raws) != 1:
            raise ConfigError("family configs run through `figure`, not a single sweep")
        raw = raws[0]
        if raw.get("kind") != kind:
            raise ConfigError(f"config kind {raw.get('kind')!r} does not match subcommand {kind!r}")
    else:
        raw = {"kind": kind, "fixed": {"phi": PHI_DEFAULT},
               "axes": list(_DEFAULT_AXES[kind]), "out": f"{kind}.csv"}
    raw = dict(raw)
    raw["fixed"] = dict(raw.get("fixed", {}))
    if args.path:
        raw["path"] = args.path
    for name in ("gamma0", "lambda0", "gammaf", "lambdaf", "beta", "phi"):
        value = getattr(args, name)
        if value is not None:
            raw["fixed"][name] = value
    if args.N is not None:
        raw["fixed"]["N"] = args.N
    if args.tol is not None:
        raw["fixed"]["tol"] = args.tol
    if args.axis:
        replaced = {a.split("=", 1)[0] for a in args.axis}
        axes = [a for a in raw.get("axes", []) if a.get("name") not in replaced]
        axes.extend(_parse_axis(a) for a in args.axis)
        raw["axes"] = axes
    if args.label is not None:
        raw["label"] = args.label
    if args.csv_name is not None:
        raw["out"] = args.csv_name
    return spec_from_dict(raw)


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("XYDQPT_WORKERS")
    return max(1, int(env)) if env else 1


def _cmd_sweep(kind: str, args) -> int:
    spec = _spec_from_args(kind, args)
    try:
        summary = run_sweep(spec, args.out, workers=_workers(args))
    except SweepNumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(summary.line())
    return 0


def _cmd_spectrum(args) -> int:
    from .spectrum import ModelParams, _eps_theta, momentum_grid, wrap_angle

    if args.gamma0 is None or args.lambda0 is None:
        raise ConfigError("spectrum needs --gamma0 and --lambda0")
    n = int(float(args.N)) if args.N else 256
    pre = ModelParams(args.gamma0, args.lambda0)
    grid = momentum_grid(n)
    eps0, th0, d0 = _eps_theta(pre, grid.ks)
    if d0.any():
        print("error: Bogoliubov angle degenerate on the grid", file=sys.stderr)
        return 3
    header = ["k", "eps", "theta"]
    cols = [grid.ks, eps0, th0]
    if args.gammaf is not None or args.lambdaf is not None:
        post = ModelParams(
            args.gammaf if args.gammaf is not None else args.gamma0,
            args.lambdaf if args.lambdaf is not None else args.lambda0,
        )
        eps1, th1, d1 = _eps_theta(post, grid.ks)
        if d1.any():
            print("error: post-quench angle degenerate on the grid", file=sys.stderr)
            return 3
        header += ["eps_post", "theta_post", "delta_theta"]
        cols += [eps1, th1, wrap_angle(th0 - th1)]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / (args.csv_name or "spectrum.csv")
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*cols):
            writer.writerow([f"{v:.17g}" for v in row])
    print(f"{len(grid.ks)} points computed, 0 crossings found -> {out_path}")
    return 0


def _cmd_figure(args) -> int:
    try:
        overrides = {}
        if args.tol is not None:
            overrides["tol"] = args.tol
        summaries = reproduce_figure(
            args.tag,
            args.out,
            workers=_workers(args),
            overrides=overrides or None,
            max_axis_points=args.max_axis_points,
        )
    except SweepNumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for s in summaries:
        print(s.line())
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return run_selftest(verbose=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xydqpt",
        description="Quench dynamics of the transverse-field XY chain from coherent Gibbs states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for kind, cmd in [
        ("fisher", "fisher"),
        ("rate", "rate"),
        ("mz", None),
        ("order-param", None),
        ("beta-c-line", "beta-c"),
        ("dqpt-area", "area"),
    ]:
        if cmd is None:
            continue
        p = sub.add_parser(cmd, help=f"run a {kind} sweep")
        _add_common(p)
        p.set_defaults(func=lambda a, k=kind: _cmd_sweep(k, a))

    p = sub.add_parser("magnetization", help="run an mz or order-param sweep")
    _add_common(p)
    p.add_argument("--kind", choices=["mz", "order-param"], default="order-param")
    p.set_defaults(func=lambda a: _cmd_sweep(a.kind, a))

    p = sub.add_parser("spectrum", help="dump dispersion and Bogoliubov angles")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("figure", help="reproduce the CSV bundle behind one figure")
    p.add_argument("tag", help="fig2|fig3|fig4|fig5|fig6|fig8")
    p.add_argument("--out", default=".")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-axis-points", type=int, default=None,
                   help="cap range-axis resolution for quick desk runs")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("selftest", help="run the oracle suites")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
