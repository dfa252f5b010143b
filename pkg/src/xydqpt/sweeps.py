"""Sweep drivers and CSV emission behind the command-line surface.

A sweep is described by a :class:`SweepSpec`: a kind, up to two axes,
fixed parameters, and an output CSV name.  Canned specs for the figure
reproductions ship as JSON files under ``configs/``.  All drivers are
deterministic: grid points are dispatched to a worker pool but results
are assembled in grid order, and floats are formatted with 17
significant digits, so re-running any sweep yields byte-identical CSV
regardless of the worker count.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fisher import NonMonotoneBracket, critical_beta, find_crossings, fisher_curve
from .gibbs import InitialStateParams
from .loschmidt import (
    QuadratureNonConvergence,
    QuenchProtocol,
    population_imbalance,
    rate_finite,
    rate_integral,
)
from .magnetization import NegativeLimit, m_z, order_parameter_batch
from .pfaffian import NotSkew
from .spectrum import DegenerateAngle, ModelParams

__all__ = [
    "Axis",
    "SweepSpec",
    "SweepSummary",
    "NamedPath",
    "NAMED_PATHS",
    "FIGURE_CONFIGS",
    "ConfigError",
    "SweepNumericError",
    "load_config",
    "run_sweep",
    "reproduce_figure",
]

PARAM_NAMES = {"gamma0", "lambda0", "gammaf", "lambdaf", "beta", "phi", "N", "t"}
KINDS = {"fisher", "rate", "mz", "order-param", "beta-c-line", "dqpt-area"}

NUMERIC_ERRORS = (
    DegenerateAngle,
    QuadratureNonConvergence,
    NegativeLimit,
    NotSkew,
)


class ConfigError(ValueError):
    """Sweep configuration failed validation (CLI exit code 2)."""


class SweepNumericError(ArithmeticError):
    """A grid point failed numerically (CLI exit code 3); partial CSV kept."""

    def __init__(self, point: str, cause: Exception):
        self.point = point
        self.cause = cause
        super().__init__(f"numerical failure at {point}: {cause}")


@dataclass(frozen=True)
class NamedPath:
    """One of the named quench paths of the phase-diagram figure."""

    label: str
    pre: tuple[float, float]   # (gamma, lambda)
    post: tuple[float, float]


NAMED_PATHS = {
    "A": NamedPath("A", (0.5, 0.0), (0.5, 0.5)),
    "B": NamedPath("B", (0.5, 0.5), (0.5, 1.5)),
    "C": NamedPath("C", (0.5, 1.5), (0.5, 2.0)),
    "D": NamedPath("D", (0.8, 0.2), (0.5, 0.2)),
    "E": NamedPath("E", (0.5, 0.2), (-0.5, 0.2)),
    "F": NamedPath("F", (0.8, 1.5), (0.5, 1.5)),
    "G": NamedPath("G", (0.5, 1.5), (-0.5, 1.5)),
}


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]


def _axis_from_dict(d: dict) -> Axis:
    name = d.get("name")
    if name not in PARAM_NAMES:
        raise ConfigError(f"axis name must be one of {sorted(PARAM_NAMES)}, got {name!r}")
    if "values" in d:
        values = tuple(float(v) for v in d["values"])
        if not values:
            raise ConfigError(f"axis {name}: empty values list")
        return Axis(name, values)
    try:
        lo, hi, count = float(d["min"]), float(d["max"]), int(d["count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"axis {name}: need min/max/count or values ({exc})")
    if count < 2:
        raise ConfigError(f"axis {name}: count must be >= 2, got {count}")
    if not lo < hi:
        raise ConfigError(f"axis {name}: min must be < max, got {lo} >= {hi}")
    if d.get("scale", "linear") == "log":
        if lo <= 0:
            raise ConfigError(f"axis {name}: log scale needs min > 0")
        values = np.geomspace(lo, hi, count)
    else:
        values = np.linspace(lo, hi, count)
    return Axis(name, tuple(float(v) for v in values))


@dataclass(frozen=True)
class SweepSpec:
    """Validated description of one sweep."""

    kind: str
    axes: tuple[Axis, ...]
    fixed: dict
    out: str
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {sorted(KINDS)}, got {self.kind!r}")
        for key in self.fixed:
            if key not in PARAM_NAMES | {"resolution", "branch", "tol", "r_cap"}:
                raise ConfigError(f"unknown fixed parameter {key!r}")
        if not self.out:
            raise ConfigError("output file name missing")


@dataclass
class SweepSummary:
    points: int
    crossings: int
    seconds: float
    files: list = field(default_factory=list)

    def line(self) -> str:
        names = ", ".join(str(f) for f in self.files)
        return (
            f"{self.points} points computed, {self.crossings} crossings found, "
            f"{self.seconds:.2f} s wall time -> {names}"
        )


def spec_from_dict(d: dict) -> SweepSpec:
    d = dict(d)
    fixed = dict(d.get("fixed", {}))
    label = str(d.get("label", d.get("path", "")))
    if "path" in d:
        path = NAMED_PATHS.get(str(d["path"]))
        if path is None:
            raise ConfigError(f"unknown named path {d['path']!r}")
        fixed.setdefault("gamma0", path.pre[0])
        fixed.setdefault("lambda0", path.pre[1])
        fixed.setdefault("gammaf", path.post[0])
        fixed.setdefault("lambdaf", path.post[1])
    axes = tuple(_axis_from_dict(a) for a in d.get("axes", []))
    return SweepSpec(
        kind=str(d.get("kind", "")),
        axes=axes,
        fixed=fixed,
        out=str(d.get("out", "")),
        label=label,
    )


def load_config(path) -> list[dict]:
    """Read one sweep config file, expanding a ``family`` block if present."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return expand_family(raw)


def expand_family(raw: dict) -> list[dict]:
    fam = raw.get("family")
    if not fam:
        return [raw]
    out = []
    for value in fam["values"]:
        d = {k: v for k, v in raw.items() if k != "family"}
        d["fixed"] = dict(d.get("fixed", {}), **{fam["name"]: value})
        d["out"] = raw["out_pattern"].format(value=value) if "out_pattern" in raw else (
            raw["out"].replace(".csv", f"_{fam['name']}{value:g}.csv")
        )
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# protocol assembly and formatting helpers

def _protocol(fixed: dict, overrides: dict | None = None) -> QuenchProtocol:
    p = dict(fixed)
    if overrides:
        p.update(overrides)
    try:
        g0 = float(p["gamma0"])
        l0 = float(p["lambda0"])
    except KeyError as exc:
        raise ConfigError(f"missing protocol parameter {exc}")
    gf = float(p.get("gammaf", g0))
    lf = float(p.get("lambdaf", l0))
    beta = float(p.get("beta", 1.0))
    phi = float(p.get("phi", -np.pi / 2))
    n = p.get("N")
    if isinstance(n, str):
        n = None if n.lower() in ("inf", "tl", "") else float(n)
    n_sites = None if n in (None, 0) or (isinstance(n, float) and np.isinf(n)) else int(n)
    return QuenchProtocol(
        pre=ModelParams(g0, l0),
        post=ModelParams(gf, lf),
        init=InitialStateParams(beta, phi),
        n_sites=n_sites,
    )


def _fmt(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write_csv(path, header, rows, status: str | None = None):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if status is None:
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        else:
            writer.writerow(list(header) + ["status"])
            for row in rows:
                writer.writerow([_fmt(v) for v in row] + ["ok"])


# ---------------------------------------------------------------------------
# per-kind drivers; each task function is a pure top-level callable so the
# process pool can pickle it, and tasks are assembled in submission order

FISHER_HEADER = ["path_label", "beta", "phi", "k", "re_z", "im_z", "branch_n", "is_crossing"]
RATE_HEADER = ["gamma0", "lambda0", "gammaf", "lambdaf", "beta", "phi", "N", "t", "r_t", "is_cusp"]
MAG_HEADER = ["gamma", "lambda", "beta", "phi", "mz", "mx", "my", "r_used", "converged"]
BETA_C_HEADER = ["x_param_name", "x_value", "beta_c", "status"]
AREA_HEADER = ["x_value", "y_value", "beta_c_at_max_amplitude", "mx", "my", "mz", "in_dqpt_area"]


def _task_fisher(spec: SweepSpec, beta: float):
    proto = _protocol(spec.fixed, {"beta": beta})
    resolution = int(spec.fixed.get("resolution", 512))
    branch = int(spec.fixed.get("branch", 0))
    curve = fisher_curve(proto, branch=branch, resolution=resolution)
    near = set()
    for crossing in curve.crossings:
        near.add(int(np.argmin(np.abs(curve.ks - crossing.k_star))))
    rows = [
        (
            spec.label,
            beta,
            proto.init.phi,
            float(curve.ks[i]),
            float(curve.re_z[i]),
            float(curve.im_z[i]),
            branch,
            int(i in near),
        )
        for i in range(curve.ks.size)
    ]
    return rows, len(curve.crossings)


def _task_rate(spec: SweepSpec, axis: Axis):
    proto = _protocol(spec.fixed)
    times = np.asarray(axis.values, dtype=float)
    tol = float(spec.fixed.get("tol", 1e-9))
    if proto.n_sites is None:
        trace = rate_integral(proto, times, abs_tol=tol)
    else:
        trace = rate_finite(proto, times)
    cusp_idx = {int(np.argmin(np.abs(times - t))) for t in trace.cusps}
    n_col = "inf" if proto.n_sites is None else proto.n_sites
    rows = [
        (
            proto.pre.gamma,
            proto.pre.lam,
            proto.post.gamma,
            proto.post.lam,
            proto.init.beta,
            proto.init.phi,
            n_col,
            float(times[i]),
            float(trace.values[i]),
            int(i in cusp_idx),
        )
        for i in range(times.size)
    ]
    return rows, len(trace.cusps)


def _task_mag(spec: SweepSpec, point: dict):
    p = dict(spec.fixed)
    p.update(point)
    gamma = float(p.get("gamma0", 0.5))
    lam = float(p.get("lambda0", 0.0))
    beta = float(p.get("beta", 1.0))
    phi = float(p.get("phi", -np.pi / 2))
    n_sites = int(p.get("N") or 1024)
    model = ModelParams(gamma, lam)
    init = InitialStateParams(beta, phi)
    mz = m_z(model, init, n_sites)
    if spec.kind == "mz":
        return [(gamma, lam, beta, phi, mz, "", "", "", 1)], 0
    tol = float(p.get("tol", 1e-6))
    r_cap = int(p.get("r_cap", 256))
    px = order_parameter_batch(model, [beta], phi, "x", tol=tol, r_cap=r_cap)[0]
    py = order_parameter_batch(model, [beta], phi, "y", tol=tol, r_cap=r_cap)[0]
    row = (
        gamma,
        lam,
        beta,
        phi,
        mz,
        px.value,
        py.value,
        max(px.r_used, py.r_used),
        int(px.converged and py.converged),
    )
    return [row], 0


def _task_beta_c(spec: SweepSpec, item: tuple[str, float]):
    name, value = item
    proto = _protocol(spec.fixed, {name: value, "beta": 1.0})
    try:
        result = critical_beta(proto)
    except NonMonotoneBracket:
        return [(name, value, "", "nonmonotone")], 0
    beta_c = result.beta_c if result.status == "ok" else ""
    return [(name, value, beta_c, result.status)], int(result.status != "never")


def _task_area_column(spec: SweepSpec, item: tuple[str, float, tuple[float, ...]]):
    name, x_value, betas = item
    proto = _protocol(spec.fixed, {name: x_value, "beta": 1.0})
    try:
        result = critical_beta(proto)
        beta_c = {"ok": result.beta_c, "always": np.inf, "never": 0.0}[result.status]
    except NonMonotoneBracket:
        beta_c = np.nan

    # membership in the DQPT area is decided per beta by a direct scan,
    # independent of the bisected boundary
    ks = (np.arange(2048) + 0.5) * np.pi / 2048
    in_area = []
    from dataclasses import replace

    for beta in betas:
        w = population_imbalance(
            replace(proto, init=InitialStateParams(float(beta), proto.init.phi)), ks
        )
        s = np.sign(w)
        in_area.append(int(bool(np.any(s[:-1] * s[1:] < 0))))

    model = proto.pre
    phi = proto.init.phi
    tol = float(spec.fixed.get("tol", 1e-6))
    r_cap = int(spec.fixed.get("r_cap", 64))
    n_sites = int(spec.fixed.get("N", 1024))
    px = order_parameter_batch(model, betas, phi, "x", tol=tol, r_cap=r_cap)
    py = order_parameter_batch(model, betas, phi, "y", tol=tol, r_cap=r_cap)
    rows = []
    for j, beta in enumerate(betas):
        init = InitialStateParams(float(beta), phi)
        rows.append(
            (
                x_value,
                float(beta),
                beta_c,
                px[j].value,
                py[j].value,
                m_z(model, init, n_sites),
                in_area[j],
            )
        )
    return rows, int(sum(in_area) > 0)


def _grid_points(axes: tuple[Axis, ...]):
    """Cartesian product of axis values, first axis outermost."""
    if not axes:
        return [dict()]
    points = [dict()]
    for axis in axes:
        points = [dict(p, **{axis.name: v}) for p in points for v in axis.values]
    return points


def _run_tasks(task, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        for item in items:
            yield task(item)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(task, items)


class _Bound:
    """Picklable single-argument adapter around a per-kind task function."""

    def __init__(self, fn, spec):
        self.fn = fn
        self.spec = spec

    def __call__(self, item):
        return self.fn(self.spec, item)


def run_sweep(spec: SweepSpec, out_dir, workers: int = 1) -> SweepSummary:
    """Execute one sweep and write its CSV under ``out_dir``.

    On a numerical failure the rows completed so far are flushed with a
    trailing status column and :class:`SweepNumericError` is raised with
    the offending grid point.
    """
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / spec.out
    started = time.perf_counter()

    if spec.kind == "fisher":
        header = FISHER_HEADER
        beta_axis = next((a for a in spec.axes if a.name == "beta"), None)
        items = list(beta_axis.values) if beta_axis else [float(spec.fixed.get("beta", 1.0))]
        task = _Bound(_task_fisher, spec)
    elif spec.kind == "rate":
        header = RATE_HEADER
        t_axis = next((a for a in spec.axes if a.name == "t"), None)
        if t_axis is None:
            raise ConfigError("rate sweep needs a 't' axis")
        items = [t_axis]
        task = _Bound(_task_rate, spec)
    elif spec.kind in ("mz", "order-param"):
        header = MAG_HEADER
        items = _grid_points(spec.axes)
        task = _Bound(_task_mag, spec)
    elif spec.kind == "beta-c-line":
        header = BETA_C_HEADER
        if len(spec.axes) != 1:
            raise ConfigError("beta-c-line sweep needs exactly one x axis")
        axis = spec.axes[0]
        items = [(axis.name, v) for v in axis.values]
        task = _Bound(_task_beta_c, spec)
    elif spec.kind == "dqpt-area":
        header = AREA_HEADER
        x_axis = next((a for a in spec.axes if a.name != "beta"), None)
        b_axis = next((a for a in spec.axes if a.name == "beta"), None)
        if x_axis is None or b_axis is None:
            raise ConfigError("dqpt-area sweep needs an x axis and a beta axis")
        items = [(x_axis.name, v, b_axis.values) for v in x_axis.values]
        task = _Bound(_task_area_column, spec)
    else:  # pragma: no cover - guarded by SweepSpec validation
        raise ConfigError(f"unhandled kind {spec.kind}")

    rows: list = []
    crossings = 0
    try:
        for got_rows, got_crossings in _run_tasks(task, items, workers):
            rows.extend(got_rows)
            crossings += got_crossings
    except NUMERIC_ERRORS as exc:
        _write_csv(out_path, header, rows, status="partial")
        point = f"{spec.out}:{len(rows)}"
        raise SweepNumericError(point, exc) from exc

    _write_csv(out_path, header, rows)
    return SweepSummary(
        points=len(rows),
        crossings=crossings,
        seconds=time.perf_counter() - started,
        files=[out_path],
    )


# ---------------------------------------------------------------------------
# canned figure reproductions

FIGURE_CONFIGS = {
    "fig2": ["fig2_pathA.json", "fig2_pathB.json", "fig2_pathC.json"],
    "fig3": ["fig3_pathD.json", "fig3_pathE.json", "fig3_pathF.json", "fig3_pathG.json"],
    "fig4": ["fig4a.json", "fig4b.json"],
    "fig5": ["fig5a.json", "fig5b.json", "fig5c.json", "fig5d.json"],
    "fig6": ["fig6a.json", "fig6b.json", "fig6c.json", "fig6d.json"],
    "fig8": [
        "fig8_state1_fisher.json",
        "fig8_state2_fisher.json",
        "fig8_state1_rate.json",
        "fig8_state2_rate.json",
    ],
}


def packaged_config(name: str) -> list[dict]:
    ref = importlib.resources.files("xydqpt") / "configs" / name
    raw = json.loads(ref.read_text())
    return expand_family(raw)


def reproduce_figure(tag: str, out_dir, workers: int = 1,
                     overrides: dict | None = None,
                     max_axis_points: int | None = None) -> list[SweepSummary]:
    """Run the canned sweeps behind one figure tag.

    ``overrides`` entries are merged into each sweep's fixed parameters
    and ``max_axis_points`` caps the count of range-type axes (both handy
    for coarse desk runs); explicit value lists stay untouched.
    """
    if tag not in FIGURE_CONFIGS:
        raise ConfigError(
            f"unknown figure tag {tag!r}; choose from {sorted(FIGURE_CONFIGS)}"
        )
    summaries = []
    for name in FIGURE_CONFIGS[tag]:
        for raw in packaged_config(name):
            if overrides:
                raw = dict(raw, fixed=dict(raw.get("fixed", {}), **overrides))
            if max_axis_points is not None:
                axes = []
                for a in raw.get("axes", []):
                    if "count" in a:
                        a = dict(a, count=min(int(a["count"]), max_axis_points))
                    axes.append(a)
                raw = dict(raw, axes=axes)
            spec = spec_from_dict(raw)
            summaries.append(run_sweep(spec, out_dir, workers=workers))
    return summaries
