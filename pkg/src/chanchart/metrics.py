"""Rank-based chart quality: trustworthiness and continuity over K sweeps.

Both metrics compare K-nearest-neighbor sets between ground truth and the
chart. Trustworthiness penalizes chart neighbors that are not true spatial
neighbors, weighted by how far down the true ranking they sit; continuity is
the exact dual, penalizing true neighbors the chart pushed away. Ranks count
from 1 around each point, with distance ties broken by ascending point index
so results are deterministic even for coincident points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class QualityReport:
    """TW/CT values per neighborhood size K for an n-point chart."""

    k_values: list[int]
    tw: list[float]
    ct: list[float]
    n: int


def rank_matrix(points: np.ndarray) -> np.ndarray:
    """Neighbor ranks: rank[i, j] is the position of j in the ascending-distance
    ordering of all points around i, starting at 1; rank[i, i] is 0.

    Ties resolve by ascending index (stable sort on squared distances).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise DomainError(f"need at least 2 points with coordinates, got shape {pts.shape}")
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(d2, -np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    ranks = np.empty((n, n), dtype=np.int32)
    np.put_along_axis(ranks, order, np.arange(n, dtype=np.int32)[None, :], axis=1)
    return ranks


def _check_k(n: int, k: int) -> None:
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if 2 * n - 3 * k - 1 <= 0:
        raise DomainError(f"k = {k} out of validity range for n = {n} (need 2n - 3k - 1 > 0)")


def _penalty(ranks_in: np.ndarray, ranks_out: np.ndarray, k: int) -> int:
    """Sum of (ranks_out - k) over points inside the k-neighborhood of one
    space but outside the k-neighborhood of the other."""
    mask = (ranks_in >= 1) & (ranks_in <= k) & (ranks_out > k)
    return int(np.sum(ranks_out[mask].astype(np.int64) - k))


def _pair_scores(ranks_truth: np.ndarray, ranks_chart: np.ndarray, k: int) -> tuple[float, float]:
    n = ranks_truth.shape[0]
    _check_k(n, k)
    norm = 2.0 / (n * k * (2 * n - 3 * k - 1))
    tw = 1.0 - norm * _penalty(ranks_chart, ranks_truth, k)
    ct = 1.0 - norm * _penalty(ranks_truth, ranks_chart, k)
    return tw, ct


def trustworthiness(truth: np.ndarray, chart: np.ndarray, k: int) -> float:
    """TW(K) = 1 - [2 / (nK(2n-3K-1))] * sum over chart-space K-neighbors that
    are not truth-space K-neighbors of (truth rank - K)."""
    _check_shapes(truth, chart)
    return _pair_scores(rank_matrix(truth), rank_matrix(chart), k)[0]


def continuity(truth: np.ndarray, chart: np.ndarray, k: int) -> float:
    """CT(K): the dual of TW, penalizing truth-space K-neighbors missing from
    the chart-space K-neighborhood by their chart rank excess."""
    _check_shapes(truth, chart)
    return _pair_scores(rank_matrix(truth), rank_matrix(chart), k)[1]


def _check_shapes(truth: np.ndarray, chart: np.ndarray) -> None:
    t = np.asarray(truth)
    c = np.asarray(chart)
    if t.shape != c.shape:
        raise DomainError(f"truth and chart shapes differ: {t.shape} vs {c.shape}")


def quality_curve(truth: np.ndarray, chart: np.ndarray, k_max: int = 102) -> QualityReport:
    """TW and CT for every K in 1..k_max, sharing one rank computation."""
    _check_shapes(truth, chart)
    ranks_t = rank_matrix(truth)
    ranks_c = rank_matrix(chart)
    n = ranks_t.shape[0]
    _check_k(n, k_max)
    tw, ct = [], []
    for k in range(1, k_max + 1):
        tw_k, ct_k = _pair_scores(ranks_t, ranks_c, k)
        tw.append(tw_k)
        ct.append(ct_k)
    return QualityReport(k_values=list(range(1, k_max + 1)), tw=tw, ct=ct, n=n)


def write_metrics_json(report: QualityReport, path) -> None:
    """Serialize as ``{"n": .., "k": [..], "tw": [..], "ct": [..]}``."""
    payload = {"n": report.n, "k": report.k_values, "tw": report.tw, "ct": report.ct}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f)
        f.write("\n")


def read_metrics_json(path) -> QualityReport:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    return QualityReport(
        k_values=list(payload["k"]), tw=list(payload["tw"]), ct=list(payload["ct"]), n=int(payload["n"])
    )
