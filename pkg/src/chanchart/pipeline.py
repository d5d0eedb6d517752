"""Per-UE estimation pipelines: CSI in, (theta_hat, rho_hat) out.

One module owns the wiring from estimator names to the spectral routines so
the CLI, the benchmark harness, and the test suite all run the identical code
path. Estimation is embarrassingly parallel over UEs; the parallel escape
hatch regenerates each UE's CSI inside the worker from its substream seed,
so serial and parallel runs produce the same numbers. BLAS pools are pinned
to one thread during estimation sweeps, both to keep benchmark numbers
comparable across machines and to make parallel results bit-identical to
serial ones.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from . import aoa, ranging
from .channel import ChannelParams, CsiMatrix, generate_csi
from .exceptions import ChartingError, ConfigurationError
from .scene import Scene, true_polar
from .subspace import (
    CovarianceAxis,
    FixedK,
    SplitPolicy,
    covariance,
    default_loading,
    hermitian_eig,
    split_subspaces,
)

THETA_ALGOS = ("music", "bartlett", "mvdr", "minnorm")
RHO_ALGOS = ("isq", "lr", "music", "bartlett")

# Range estimators whose output is a metric distance in meters (charted with
# the antenna-height correction) as opposed to an unscaled radial proxy.
METRIC_RHO_ALGOS = frozenset({"music", "bartlett"})


@dataclass(frozen=True)
class EstimateContext:
    """Everything the estimators need besides the CSI itself."""

    angle_grid: aoa.AngleGrid = aoa.AngleGrid()
    range_grid: ranging.RangeGrid = ranging.RangeGrid()
    delta_f: float = 312.5e3 / 32
    # MVDR needs real regularization here, not just invertibility: the sample
    # covariance from n_sub snapshots of n_rx antennas is barely full rank at
    # 32x32, and a nearly-raw inverse leaves heavy-tailed angle outliers.
    loading_factor: float = 1e-2
    policy: SplitPolicy = field(default_factory=FixedK)

    @classmethod
    def from_params(
        cls,
        params: ChannelParams,
        angle_grid: aoa.AngleGrid | None = None,
        range_grid: ranging.RangeGrid | None = None,
    ) -> "EstimateContext":
        return cls(
            angle_grid=angle_grid or aoa.AngleGrid(),
            range_grid=range_grid or ranging.RangeGrid(),
            delta_f=params.delta_f,
        )


def theta_spectrum(entries: np.ndarray, algo: str, ctx: EstimateContext) -> aoa.Spectrum:
    """Angle pseudo-spectrum of one CSI matrix under the named estimator."""
    r = covariance(entries, axis=CovarianceAxis.ANTENNAS)
    if algo in ("music", "minnorm"):
        split = split_subspaces(hermitian_eig(r), ctx.policy)
        if algo == "music":
            return aoa.music_theta(split, ctx.angle_grid)
        return aoa.minnorm_theta(split, ctx.angle_grid)
    if algo == "bartlett":
        return aoa.bartlett_theta(r, ctx.angle_grid)
    if algo == "mvdr":
        return aoa.mvdr_theta(r, ctx.angle_grid, loading=default_loading(r, ctx.loading_factor))
    raise ConfigurationError(f"unknown theta algorithm {algo!r}")


def rho_spectrum(entries: np.ndarray, algo: str, ctx: EstimateContext) -> aoa.Spectrum:
    """Range pseudo-spectrum over the subcarrier axis (spectral estimators only)."""
    r = covariance(entries.T, axis=CovarianceAxis.SUBCARRIERS)
    if algo == "music":
        split = split_subspaces(hermitian_eig(r), ctx.policy)
        return ranging.music_rho(split, ctx.range_grid, ctx.delta_f)
    if algo == "bartlett":
        return ranging.bartlett_rho(r, ctx.range_grid, ctx.delta_f)
    raise ConfigurationError(f"unknown spectral rho algorithm {algo!r}")


def estimate_theta(entries: np.ndarray, algo: str, ctx: EstimateContext) -> float:
    return aoa.peak_search(theta_spectrum(entries, algo, ctx))


def estimate_rho(
    csi: CsiMatrix,
    algo: str,
    ctx: EstimateContext,
    lr_model: ranging.LrModel | None = None,
) -> float:
    if algo == "isq":
        return ranging.isq_rho(csi.unnormalized())
    if algo == "lr":
        if lr_model is None:
            raise ConfigurationError("rho algorithm 'lr' needs a fitted LrModel")
        return ranging.lr_rho(lr_model, csi.unnormalized())
    return aoa.peak_search(rho_spectrum(csi.entries, algo, ctx))


def lr_training_pairs(
    scene: Scene, params: ChannelParams, count: int
) -> list[tuple[np.ndarray, float]]:
    """Training set for LR: the first ``count`` UEs in scene order with known distances."""
    if count < 2 or count > scene.n_ue:
        raise ConfigurationError(f"lr training size must be in [2, n_ue], got {count}")
    pairs = []
    for ue in range(count):
        csi = generate_csi(scene, ue, params)
        pairs.append((csi.unnormalized(), true_polar(scene, ue)[1]))
    return pairs


def fit_lr(scene: Scene, params: ChannelParams, count: int = 256) -> ranging.LrModel:
    return ranging.lr_fit(lr_training_pairs(scene, params, count))


def run_estimation_pass(
    dataset: list[CsiMatrix],
    theta_algo: str,
    rho_algo: str,
    ctx: EstimateContext,
    lr_training: list[tuple[np.ndarray, float]] | None = None,
) -> list[tuple[int, float, float]]:
    """Estimate (theta, rho) for every matrix in the dataset, serially.

    This is the unit the benchmark clock wraps: covariance through peak
    search, including the one-time LR fit when LR is the range estimator.
    """
    lr_model = None
    if rho_algo == "lr":
        if lr_training is None:
            raise ConfigurationError("rho algorithm 'lr' needs training pairs")
        lr_model = ranging.lr_fit(lr_training)
    out = []
    for csi in dataset:
        try:
            theta = estimate_theta(csi.entries, theta_algo, ctx)
            rho = estimate_rho(csi, rho_algo, ctx, lr_model)
        except ChartingError as exc:
            raise type(exc)(f"ue {csi.ue_id}: {exc}") from exc
        out.append((csi.ue_id, theta, rho))
    return out


def _estimate_chunk(
    scene: Scene,
    params: ChannelParams,
    theta_algo: str,
    rho_algo: str,
    ctx: EstimateContext,
    lr_model: ranging.LrModel | None,
    indices: list[int],
) -> list[tuple[int, float, float]]:
    with threadpool_limits(limits=1):
        out = []
        for ue in indices:
            csi = generate_csi(scene, ue, params)
            theta = estimate_theta(csi.entries, theta_algo, ctx)
            rho = estimate_rho(csi, rho_algo, ctx, lr_model)
            out.append((ue, theta, rho))
        return out


def estimate_scene(
    scene: Scene,
    params: ChannelParams,
    theta_algo: str,
    rho_algo: str,
    ctx: EstimateContext | None = None,
    workers: int = 0,
    lr_train_count: int = 256,
) -> list[tuple[int, float, float]]:
    """Generate CSI and estimate (theta, rho) for every UE of the scene.

    ``workers > 0`` fans the UE loop out over processes; results are
    reassembled in UE order and match the serial run bit for bit.
    """
    if theta_algo not in THETA_ALGOS:
        raise ConfigurationError(f"unknown theta algorithm {theta_algo!r}")
    if rho_algo not in RHO_ALGOS:
        raise ConfigurationError(f"unknown rho algorithm {rho_algo!r}")
    ctx = ctx or EstimateContext.from_params(params)
    lr_model = None
    if rho_algo == "lr":
        lr_model = fit_lr(scene, params, min(lr_train_count, scene.n_ue))
    indices = list(range(scene.n_ue))
    if workers <= 1:
        return _estimate_chunk(scene, params, theta_algo, rho_algo, ctx, lr_model, indices)
    chunks = [list(c) for c in np.array_split(indices, workers * 4) if len(c)]
    results: list[tuple[int, float, float]] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_estimate_chunk, scene, params, theta_algo, rho_algo, ctx, lr_model, c)
            for c in chunks
        ]
        for fut in futures:
            results.extend(fut.result())
    results.sort(key=lambda t: t[0])
    return results


def _sweep_chunk(
    scene: Scene,
    params: ChannelParams,
    theta_algos: tuple[str, ...],
    rho_algos: tuple[str, ...],
    ctx: EstimateContext,
    lr_model: ranging.LrModel | None,
    indices: list[int],
) -> dict[tuple[str, str], list[float]]:
    """Estimate all requested algorithms in one pass, sharing covariances."""
    out: dict[tuple[str, str], list[float]] = {
        ("theta", a): [] for a in theta_algos
    }
    out.update({("rho", a): [] for a in rho_algos})
    with threadpool_limits(limits=1):
        for ue in indices:
            csi = generate_csi(scene, ue, params)
            r_ant = covariance(csi.entries, axis=CovarianceAxis.ANTENNAS)
            split = None
            if "music" in theta_algos or "minnorm" in theta_algos:
                split = split_subspaces(hermitian_eig(r_ant), ctx.policy)
            for algo in theta_algos:
                if algo == "music":
                    s = aoa.music_theta(split, ctx.angle_grid)
                elif algo == "minnorm":
                    s = aoa.minnorm_theta(split, ctx.angle_grid)
                elif algo == "bartlett":
                    s = aoa.bartlett_theta(r_ant, ctx.angle_grid)
                elif algo == "mvdr":
                    s = aoa.mvdr_theta(r_ant, ctx.angle_grid, default_loading(r_ant, ctx.loading_factor))
                else:
                    raise ConfigurationError(f"unknown theta algorithm {algo!r}")
                out[("theta", algo)].append(aoa.peak_search(s))
            spectral = [a for a in rho_algos if a in ("music", "bartlett")]
            if spectral:
                r_sub = covariance(csi.entries.T, axis=CovarianceAxis.SUBCARRIERS)
                sub_split = None
                if "music" in spectral:
                    sub_split = split_subspaces(hermitian_eig(r_sub), ctx.policy)
            for algo in rho_algos:
                if algo == "music":
                    rho = aoa.peak_search(ranging.music_rho(sub_split, ctx.range_grid, ctx.delta_f))
                elif algo == "bartlett":
                    rho = aoa.peak_search(ranging.bartlett_rho(r_sub, ctx.range_grid, ctx.delta_f))
                elif algo == "isq":
                    rho = ranging.isq_rho(csi.unnormalized())
                elif algo == "lr":
                    rho = ranging.lr_rho(lr_model, csi.unnormalized())
                else:
                    raise ConfigurationError(f"unknown rho algorithm {algo!r}")
                out[("rho", algo)].append(rho)
    return out


def sweep_estimates(
    scene: Scene,
    params: ChannelParams,
    theta_algos: tuple[str, ...] = THETA_ALGOS,
    rho_algos: tuple[str, ...] = RHO_ALGOS,
    ctx: EstimateContext | None = None,
    workers: int = 0,
    lr_train_count: int = 256,
) -> dict[tuple[str, str], np.ndarray]:
    """All-estimator sweep for suite tables: one CSI generation per UE,
    covariances shared across estimators of the same axis.

    Returns arrays keyed by ("theta", algo) and ("rho", algo), scene order.
    """
    ctx = ctx or EstimateContext.from_params(params)
    lr_model = None
    if "lr" in rho_algos:
        lr_model = fit_lr(scene, params, min(lr_train_count, scene.n_ue))
    indices = list(range(scene.n_ue))
    if workers <= 1:
        chunks = [indices]
        parts = [_sweep_chunk(scene, params, tuple(theta_algos), tuple(rho_algos), ctx, lr_model, indices)]
    else:
        chunks = [list(c) for c in np.array_split(indices, workers * 4) if len(c)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _sweep_chunk, scene, params, tuple(theta_algos), tuple(rho_algos), ctx, lr_model, c
                )
                for c in chunks
            ]
            parts = [f.result() for f in futures]
    merged: dict[tuple[str, str], np.ndarray] = {}
    for key in parts[0]:
        merged[key] = np.array([v for part in parts for v in part[key]])
    return merged
