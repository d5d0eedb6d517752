"""Chart assembly: per-UE (theta, rho) estimates to 2-D coordinates in the BS frame.

The chart frame has the BS at the origin with the array axis along +x, so a
perfect estimate pipeline reproduces ground truth exactly. Metric range
estimates (MUSIC/Bartlett over rho) measure the 3-D slant distance and get
the antenna height removed; proportional estimates (ISQ/LR) carry no scale
and are used as-is.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import AssemblyError, DomainError
from .scene import Scene


@dataclass(frozen=True)
class ChartPoint:
    ue_id: int
    x: float
    y: float


@dataclass(frozen=True)
class Chart:
    """Estimated and ground-truth 2-D positions in scene order, plus VIP flags."""

    ue_ids: np.ndarray
    est: np.ndarray
    truth: np.ndarray
    vip_mask: np.ndarray

    @property
    def n(self) -> int:
        return self.ue_ids.shape[0]

    def point(self, i: int) -> ChartPoint:
        return ChartPoint(int(self.ue_ids[i]), float(self.est[i, 0]), float(self.est[i, 1]))


def polar_to_chart(
    theta_deg: float,
    rho_m: float,
    bs_height: float,
    metric: bool = True,
) -> tuple[float, float]:
    """Map one (theta, rho) estimate to chart coordinates.

    With ``metric`` set, rho is treated as a slant distance and reduced to
    the ground range sqrt(max(rho^2 - bs_height^2, 0)); otherwise rho is a
    unitless radial proxy and is used directly.
    """
    if not 0.0 <= theta_deg <= 180.0:
        raise DomainError(f"theta must be in [0, 180], got {theta_deg}")
    if rho_m < 0:
        raise DomainError(f"rho must be >= 0, got {rho_m}")
    if metric:
        ground = math.sqrt(max(rho_m * rho_m - bs_height * bs_height, 0.0))
    else:
        ground = rho_m
    rad = math.radians(theta_deg)
    return ground * math.cos(rad), ground * math.sin(rad)


def build_chart(
    estimates: Iterable[tuple[int, float, float]],
    scene: Scene,
    metric_rho: bool = True,
) -> Chart:
    """Assemble the chart from per-UE estimates, order-normalized by UE id.

    ``estimates`` must cover every UE of the scene exactly once, in any
    order. Ground truth is the UE position relative to the BS ground point.
    """
    n = scene.n_ue
    est = np.full((n, 2), np.nan)
    seen = np.zeros(n, dtype=bool)
    for ue_id, theta, rho in estimates:
        if not 0 <= ue_id < n:
            raise AssemblyError(f"estimate for unknown ue_id {ue_id}")
        if seen[ue_id]:
            raise AssemblyError(f"duplicate estimate for ue_id {ue_id}")
        seen[ue_id] = True
        est[ue_id] = polar_to_chart(theta, rho, scene.bs.z, metric=metric_rho)
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise AssemblyError(f"missing estimate for ue_id {missing}")
    truth = scene.ues[:, :2] - np.array([scene.bs.x, scene.bs.y])
    return Chart(
        ue_ids=np.arange(n),
        est=est,
        truth=truth,
        vip_mask=np.asarray(scene.vip_mask, dtype=bool),
    )


def write_chart_csv(chart: Chart, path) -> None:
    """Export as ``ue_id,true_x,true_y,est_x,est_y,is_vip`` with 6 fractional digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("ue_id,true_x,true_y,est_x,est_y,is_vip\n")
        for i in range(chart.n):
            f.write(
                f"{int(chart.ue_ids[i])},"
                f"{chart.truth[i, 0]:.6f},{chart.truth[i, 1]:.6f},"
                f"{chart.est[i, 0]:.6f},{chart.est[i, 1]:.6f},"
                f"{int(chart.vip_mask[i])}\n"
            )


def read_chart_csv(path) -> Chart:
    """Parse a chart CSV written by :func:`write_chart_csv`."""
    ids, truth, est, vip = [], [], [], []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        for row in reader:
            ids.append(int(row["ue_id"]))
            truth.append((float(row["true_x"]), float(row["true_y"])))
            est.append((float(row["est_x"]), float(row["est_y"])))
            vip.append(bool(int(row["is_vip"])))
    return Chart(
        ue_ids=np.array(ids),
        est=np.array(est, dtype=np.float64).reshape(len(ids), 2),
        truth=np.array(truth, dtype=np.float64).reshape(len(ids), 2),
        vip_mask=np.array(vip, dtype=bool),
    )
