"""Render tetrafill campaign CSVs into figures.

The CSV files are the only interface to the core package: each figure kind
validates the expected header before touching the data and reports any
missing columns via SchemaMismatch.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "FigureSpec",
    "SchemaMismatch",
    "FIGURE_KINDS",
    "base_marker_coordinates",
    "render",
]

FIGURE_KINDS = ("histogram", "means", "heatmap", "theta-means", "perturbation")

_REQUIRED = {
    "histogram": ("bin_left", "bin_right", "count"),
    "means": ("j", "ensemble", "mean_F4", "stderr", "mean_one_minus_F4"),
    "heatmap": ("theta", "phi", "E12", "E13", "E14", "F4", "log10_one_minus_F4"),
    "theta-means": ("theta", "mean_E12", "mean_E13", "mean_E14", "mean_F4"),
    "perturbation": ("cos_theta1", "phi1", "F4", "log10_one_minus_F4", "closure_defect"),
}

# polar coordinates (cos theta_i, phi_i) of the four normals of each scan base;
# entry 0 is the closure position of the scanned normal, 1..3 stay fixed
_SQ3 = 1 / math.sqrt(3)
_BASES = {
    "regular": (
        (-_SQ3, 7 * math.pi / 4),
        (_SQ3, 5 * math.pi / 4),
        (_SQ3, math.pi / 4),
        (-_SQ3, 3 * math.pi / 4),
    ),
    "disphenoid": (
        (math.cos(math.pi / 4), 3 * math.pi / 2),
        (0.0, 3 * math.pi / 4),
        (math.cos(3 * math.pi / 4), 3 * math.pi / 2),
        (0.0, math.pi / 4),
    ),
}


class SchemaMismatch(Exception):
    """Input CSV does not carry the columns the figure kind needs."""

    def __init__(self, path, missing):
        super().__init__(f"{path}: missing columns {sorted(missing)}")
        self.missing = sorted(missing)


@dataclass(frozen=True)
class FigureSpec:
    input_csv: Path
    figure_kind: str
    output: Path
    zoom: tuple | None = None
    log: bool = False
    value: str | None = None
    base: str = "regular"

    def __post_init__(self):
        if self.figure_kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.figure_kind!r}")
        if self.base not in _BASES:
            raise ValueError(f"unknown base {self.base!r}")


def base_marker_coordinates(base: str):
    """((closure cos theta1, phi1), three fixed-normal coordinate pairs)."""
    coords = _BASES[base]
    return coords[0], coords[1:]


def _load(path: Path, kind: str):
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = list(reader)
    missing = set(_REQUIRED[kind]) - set(header)
    if missing:
        raise SchemaMismatch(path, missing)
    columns = {}
    for idx, name in enumerate(header):
        raw = [row[idx] for row in rows]
        if name == "ensemble":
            columns[name] = raw
        else:
            columns[name] = np.array([float(v) for v in raw])
    return columns


def _pivot(x, y, z):
    """Regular-grid pivot: returns (x_axis, y_axis, grid[y, x])."""
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = z
    return xs, ys, grid


def _render_histogram(cols, spec, ax):
    width = cols["bin_right"] - cols["bin_left"]
    ax.bar(cols["bin_left"], cols["count"], width=width, align="edge", color="#46627f")
    ax.set_xlabel("F4")
    ax.set_ylabel("count")
    if spec.log:
        ax.set_yscale("log")
    if spec.zoom:
        ax.set_xlim(*spec.zoom)


def _render_theta_means(cols, spec, ax):
    for name, style in (("mean_E12", "-"), ("mean_E13", "--"),
                        ("mean_E14", ":"), ("mean_F4", "-.")):
        ax.plot(cols["theta"], cols[name], style, label=name)
    ax.set_xlabel("theta")
    ax.legend()
    if spec.log:
        ax.set_yscale("log")
    if spec.zoom:
        ax.set_xlim(*spec.zoom)


def _render_heatmap(cols, spec, ax, fig):
    value = spec.value or ("log10_one_minus_F4" if spec.log else "F4")
    if value not in cols:
        raise SchemaMismatch(spec.input_csv, {value})
    xs, ys, grid = _pivot(cols["theta"], cols["phi"], cols[value])
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=value)
    ax.set_xlabel("theta")
    ax.set_ylabel("phi")
    if spec.zoom:
        ax.set_xlim(*spec.zoom)


def _render_perturbation(cols, spec, ax, fig):
    value = spec.value or ("log10_one_minus_F4" if spec.log else "F4")
    if value not in cols:
        raise SchemaMismatch(spec.input_csv, {value})
    xs, ys, grid = _pivot(cols["cos_theta1"], cols["phi1"], cols[value])
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=value)
    closure, fixed = base_marker_coordinates(spec.base)
    for cx, cphi in fixed:
        ax.plot(cx, cphi, "x", color="black", markersize=9, markeredgewidth=2)
    ax.plot(closure[0], closure[1], "x", color="0.6", markersize=9, markeredgewidth=2)
    ax.set_xlabel("cos(theta1)")
    ax.set_ylabel("phi1")
    if spec.zoom:
        ax.set_xlim(*spec.zoom)


def _render_means(cols, spec, fig):
    left, right = fig.subplots(1, 2)
    ensembles = sorted(set(cols["ensemble"]))
    js = cols["j"]
    for kind in ensembles:
        mask = np.array([e == kind for e in cols["ensemble"]])
        order = np.argsort(js[mask])
        left.errorbar(js[mask][order], cols["mean_F4"][mask][order],
                      yerr=cols["stderr"][mask][order], label=kind, marker="o")
        right.plot(js[mask][order], cols["mean_one_minus_F4"][mask][order],
                   marker="o", label=kind)
    left.set_xlabel("j")
    left.set_ylabel("mean F4")
    right.set_xlabel("j")
    right.set_ylabel("mean (1 - F4)")
    right.set_yscale("log")
    left.legend()
    if spec.zoom:
        left.set_ylim(*spec.zoom)


def render(spec: FigureSpec) -> Path:
    """Render one figure and return the written image path."""
    cols = _load(Path(spec.input_csv), spec.figure_kind)
    if spec.figure_kind == "means":
        fig = plt.figure(figsize=(10, 4))
        _render_means(cols, spec, fig)
    else:
        fig, ax = plt.subplots(figsize=(6, 4.5))
        if spec.figure_kind == "histogram":
            _render_histogram(cols, spec, ax)
        elif spec.figure_kind == "theta-means":
            _render_theta_means(cols, spec, ax)
        elif spec.figure_kind == "heatmap":
            _render_heatmap(cols, spec, ax, fig)
        else:
            _render_perturbation(cols, spec, ax, fig)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
