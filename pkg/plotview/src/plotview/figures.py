"""Figure builders: chart scatter pair and TW/CT quality curves.

Builders return live matplotlib Figure objects so callers (and tests) can
inspect the plotted data numerically; saving is the CLI's job. Both scatter
figures share axis limits computed over the union of truth and estimate
points, so shape distortion is visible instead of hidden by autoscaling.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import ChartTable, QualityCurve

POINT_COLOR = "tab:blue"
VIP_COLOR = "tab:red"


def shared_limits(table: ChartTable, margin: float = 0.05) -> tuple[tuple[float, float], tuple[float, float]]:
    """Common (xlim, ylim) covering truth and estimate point clouds."""
    pts = np.vstack([table.truth, table.est])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1.0)
    pad = margin * span
    return (float(lo[0] - pad[0]), float(hi[0] + pad[0])), (float(lo[1] - pad[1]), float(hi[1] + pad[1]))


def _scatter(ax, points: np.ndarray, vip: np.ndarray, limits) -> None:
    plain = ~vip
    ax.scatter(points[plain, 0], points[plain, 1], s=4, c=POINT_COLOR, linewidths=0, label="UE")
    if vip.any():
        ax.scatter(points[vip, 0], points[vip, 1], s=10, c=VIP_COLOR, linewidths=0, label="VIP")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlim(*limits[0])
    ax.set_ylim(*limits[1])
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")


def build_chart_figures(table: ChartTable, title: str = ""):
    """Two scatter figures (ground truth, chart estimate) on shared axes."""
    limits = shared_limits(table)
    figs = []
    for name, points in (("ground truth", table.truth), ("chart estimate", table.est)):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        _scatter(ax, points, table.vip, limits)
        ax.set_title(f"{title}: {name}" if title else name)
        fig.tight_layout()
        figs.append(fig)
    return figs[0], figs[1]


def build_quality_figure(curve: QualityCurve, title: str = ""):
    """TW and CT versus K on one axis, y fixed to [0, 1]."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    marker = "o" if curve.k.size == 1 else None
    ax.plot(curve.k, curve.tw, label="trustworthiness", marker=marker)
    ax.plot(curve.k, curve.ct, label="continuity", marker=marker)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("K")
    ax.set_ylabel("score")
    ax.set_title(title if title else f"chart quality, n = {curve.n}")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right")
    fig.tight_layout()
    return fig
