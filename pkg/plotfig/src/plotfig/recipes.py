"""Figure recipes: CSV bundles in, multi-panel raster images out.

Rendering is a pure function of the CSV contents: fixed figure sizes,
dpi, colors and fonts, and stripped PNG metadata, so identical inputs
produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import schemas
from .schemas import SchemaError, read_table

DPI = 150
BETA_COLORS = {0.1: "tab:blue", 1.0: "tab:orange", 10.0: "tab:green", 100.0: "tab:red"}
SAVE_KW = dict(dpi=DPI, metadata={"Software": None})

TAGS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig8")


def _beta_color(beta: float) -> str:
    for ref, color in BETA_COLORS.items():
        if abs(beta - ref) < 1e-12:
            return color
    return "tab:purple"


def _fisher_panel(ax, table, title):
    betas = np.unique(table["beta"])
    for beta in betas:
        sel = table["beta"] == beta
        re_z, im_z = table["re_z"][sel], table["im_z"][sel]
        finite = np.isfinite(re_z)
        ax.plot(re_z[finite], im_z[finite], ".", ms=1.5,
                color=_beta_color(beta), label=rf"$\beta={beta:g}$")
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_title(title)
    ax.set_xlabel(r"Re $z$")
    ax.set_ylabel(r"Im $z$")
    ax.legend(fontsize=7, markerscale=4)


def render_fisher_family(csv_dir, out_file, names, titles):
    tables = [read_table(Path(csv_dir) / n, schemas.FISHER) for n in names]
    fig, axes = plt.subplots(1, len(tables), figsize=(3.2 * len(tables), 3.0))
    axes = np.atleast_1d(axes)
    for ax, table, title in zip(axes, tables, titles):
        _fisher_panel(ax, table, title)
    fig.tight_layout()
    fig.savefig(out_file, **SAVE_KW)
    plt.close(fig)
    return len(tables)


def render_fig4(csv_dir, out_file):
    order = read_table(Path(csv_dir) / "fig4a.csv", schemas.MAG)
    mz = read_table(Path(csv_dir) / "fig4b.csv", schemas.MAG)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7.0, 3.0))
    for beta in np.unique(order["beta"]):
        sel = order["beta"] == beta
        color = _beta_color(beta)
        ax1.plot(order["gamma"][sel], order["mx"][sel], "-", color=color,
                 label=rf"$M_x$, $\beta={beta:g}$")
        ax1.plot(order["gamma"][sel], order["my"][sel], "--", color=color)
    ax1.set_xlabel(r"$\gamma$")
    ax1.set_ylabel(r"$M_x$ (solid), $M_y$ (dashed)")
    ax1.set_title("(a) in-plane order")
    ax1.legend(fontsize=6)
    for beta in np.unique(mz["beta"]):
        sel = mz["beta"] == beta
        ax2.plot(mz["gamma"][sel], mz["mz"][sel], "-", color=_beta_color(beta),
                 label=rf"$\beta={beta:g}$")
    ax2.set_xlabel(r"$\gamma$")
    ax2.set_ylabel(r"$M_z$")
    ax2.set_title("(b) transverse magnetization")
    ax2.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_file, **SAVE_KW)
    plt.close(fig)
    return 2


FIG5_PANELS = [
    ("fig5a.csv", r"$\gamma_0$", "mx", r"(a) FM$_x$, field quench"),
    ("fig5b.csv", r"$\gamma_0$", "mz", r"(b) PM, field quench"),
    ("fig5c.csv", r"$\lambda_0$", "mx", r"(c) FM$_x$, anisotropy quench"),
    ("fig5d.csv", r"$\lambda_0$", "mz", r"(d) PM, anisotropy quench"),
]


def _area_panel(ax, fig, table, xlabel, column, title):
    x = np.unique(table["x_value"])
    y = np.unique(table["y_value"])
    nx, ny = x.size, y.size
    grid = table[column].reshape(nx, ny).T  # rows ordered x-major
    mesh = ax.pcolormesh(x, y, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=rf"$M_{column[-1]}$")
    area = table["in_dqpt_area"].reshape(nx, ny).T
    if np.any(area > 0):
        ax.contourf(x, y, area, levels=[0.5, 1.5], colors="none",
                    hatches=["//"], zorder=3)
        ax.contour(x, y, area, levels=[0.5], colors="green", linewidths=0.6, zorder=3)
    beta_c = table["beta_c_at_max_amplitude"].reshape(nx, ny)[:, 0]
    visible = np.isfinite(beta_c) & (beta_c > 0)
    if np.any(visible):
        ax.plot(x[visible], np.clip(beta_c[visible], y.min(), y.max()),
                "--", color="lime", lw=1.8, zorder=4, label=r"$\beta_c$")
        ax.legend(fontsize=7, loc="upper right")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(r"$\beta$")
    ax.set_title(title)


def render_fig5(csv_dir, out_file):
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.4))
    for ax, (name, xlabel, column, title) in zip(axes.ravel(), FIG5_PANELS):
        table = read_table(Path(csv_dir) / name, schemas.AREA)
        _area_panel(ax, fig, table, xlabel, column, title)
    fig.tight_layout()
    fig.savefig(out_file, **SAVE_KW)
    plt.close(fig)
    return 4


FIG6_PANELS = [
    ("fig6a_lambdaf*.csv", r"$\gamma_0$", r"(a) FM$_x$, field quench"),
    ("fig6b_lambdaf*.csv", r"$\gamma_0$", "(b) PM, field quench"),
    ("fig6c_gammaf*.csv", r"$\lambda_0$", r"(c) FM$_x$, anisotropy quench"),
    ("fig6d_gammaf*.csv", r"$\lambda_0$", "(d) PM, anisotropy quench"),
]


def render_fig6(csv_dir, out_file):
    csv_dir = Path(csv_dir)
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.0))
    cmap = plt.get_cmap("viridis")
    for ax, (pattern, xlabel, title) in zip(axes.ravel(), FIG6_PANELS):
        names = sorted(csv_dir.glob(pattern))
        if not names:
            raise SchemaError(f"{csv_dir}: no files match {pattern}")
        for i, name in enumerate(names):
            table = read_table(name, schemas.BETA_C)
            x = table["x_value"]
            bc = table["beta_c"].astype(float)
            ok = table["status"] == "ok"
            always = table["status"] == "always"
            bc = np.where(always, np.inf, bc)
            color = cmap(0.15 + 0.7 * i / max(len(names) - 1, 1))
            label = name.stem.split("_")[-1]
            shown = np.where(ok | always, np.minimum(bc, 1e3), np.nan)
            ax.plot(x, shown, "--", color=color, lw=1.4, label=label)
            ax.fill_between(x, 1e-3, np.where(np.isfinite(shown), shown, 1e-3),
                            color=color, alpha=0.15)
        ax.set_yscale("log")
        ax.set_ylim(1e-2, 2e2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(r"$\beta_c$")
        ax.set_title(title)
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(out_file, **SAVE_KW)
    plt.close(fig)
    return 4


def render_fig8(csv_dir, out_file):
    csv_dir = Path(csv_dir)
    fig, axes = plt.subplots(2, 2, figsize=(7.0, 6.0))
    for ax, name, title in zip(
        axes[0], ["fig8_state1_fisher.csv", "fig8_state2_fisher.csv"],
        ["(a) first marked state", "(b) second marked state"],
    ):
        _fisher_panel(ax, read_table(csv_dir / name, schemas.FISHER), title)
    for ax, name, title in zip(
        axes[1], ["fig8_state1_rate.csv", "fig8_state2_rate.csv"],
        ["(c) rate function", "(d) rate function"],
    ):
        table = read_table(csv_dir / name, schemas.RATE)
        ax.plot(table["t"], table["r_t"], "-", color="tab:blue", lw=1.0)
        cusps = np.asarray(table["is_cusp"], dtype=float)
        marked = np.isfinite(cusps) & (cusps > 0)
        if np.any(marked):
            ax.plot(table["t"][marked], table["r_t"][marked], "v",
                    color="tab:red", ms=5, label="cusp")
            ax.legend(fontsize=7)
        ax.set_xlabel(r"$t$")
        ax.set_ylabel(r"$r(t)$")
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_file, **SAVE_KW)
    plt.close(fig)
    return 4


def render(tag: str, csv_dir, out_file) -> int:
    """Render one figure tag; returns the number of panels drawn."""
    if tag == "fig2":
        return render_fisher_family(
            csv_dir, out_file,
            [f"fig2_path{p}.csv" for p in "ABC"],
            [f"path {p}" for p in "ABC"],
        )
    if tag == "fig3":
        return render_fisher_family(
            csv_dir, out_file,
            [f"fig3_path{p}.csv" for p in "DEFG"],
            [f"path {p}" for p in "DEFG"],
        )
    if tag == "fig4":
        return render_fig4(csv_dir, out_file)
    if tag == "fig5":
        return render_fig5(csv_dir, out_file)
    if tag == "fig6":
        return render_fig6(csv_dir, out_file)
    if tag == "fig8":
        return render_fig8(csv_dir, out_file)
    raise SchemaError(f"unknown figure tag {tag!r}; choose from {TAGS}")
