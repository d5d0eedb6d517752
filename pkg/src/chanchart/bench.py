"""Wall-clock benchmarks of (theta, rho) estimator pipelines over a UE population.

Only estimation is timed: covariance, spectra, peak search, and the range
prediction, over a dataset of pre-generated CSI matrices. CSI generation and
metric computation stay outside the clock. Every timed section runs after a
discarded warm-up pass and with BLAS pinned to one thread, so numbers are
comparable across machines with different core counts.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .channel import CsiMatrix
from .exceptions import BenchmarkError, ChartingError, DomainError
from .pipeline import EstimateContext, run_estimation_pass


@dataclass(frozen=True)
class TimingRecord:
    """Mean/std wall seconds of one estimator pair on one channel model."""

    theta_algo: str
    rho_algo: str
    channel_model: str
    seconds_mean: float
    seconds_std: float
    repeats: int

    def to_dict(self) -> dict:
        return asdict(self)


def time_pipeline(
    combo: tuple[str, str],
    dataset: list[CsiMatrix],
    repeats: int,
    ctx: EstimateContext | None = None,
    lr_training: list[tuple[np.ndarray, float]] | None = None,
    channel_model: str = "los",
) -> TimingRecord:
    """Time the full estimation pass over ``dataset`` for one estimator pair.

    A warm-up pass runs first and is discarded; ``repeats`` timed passes
    follow. The one-time LR fit counts as estimation work when LR is the
    range estimator.
    """
    if repeats < 1:
        raise DomainError(f"repeats must be >= 1, got {repeats}")
    if not dataset:
        raise DomainError("dataset is empty")
    theta_algo, rho_algo = combo
    ctx = ctx or EstimateContext()
    times = []
    with threadpool_limits(limits=1):
        for i in range(repeats + 1):
            start = time.perf_counter()
            try:
                run_estimation_pass(dataset, theta_algo, rho_algo, ctx, lr_training)
            except ChartingError as exc:
                raise BenchmarkError(f"{theta_algo}/{rho_algo} failed: {exc}") from exc
            elapsed = time.perf_counter() - start
            if i > 0:  # pass 0 is warm-up
                times.append(elapsed)
    arr = np.array(times)
    return TimingRecord(
        theta_algo=theta_algo,
        rho_algo=rho_algo,
        channel_model=channel_model,
        seconds_mean=float(arr.mean()),
        seconds_std=float(arr.std()),
        repeats=repeats,
    )


def benchmark_matrix(
    theta_algos: tuple[str, ...],
    rho_algos: tuple[str, ...],
    datasets: dict[str, list[CsiMatrix]],
    repeats: int = 3,
    ctx: EstimateContext | None = None,
    lr_training: dict[str, list[tuple[np.ndarray, float]]] | None = None,
) -> list[TimingRecord]:
    """Cross-product timing table in deterministic (model, theta, rho) order."""
    records = []
    for model, dataset in datasets.items():
        training = (lr_training or {}).get(model)
        for theta_algo in theta_algos:
            for rho_algo in rho_algos:
                records.append(
                    time_pipeline(
                        (theta_algo, rho_algo),
                        dataset,
                        repeats,
                        ctx,
                        training,
                        channel_model=model,
                    )
                )
    return records


def records_to_json(records: list[TimingRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([r.to_dict() for r in records], f, indent=2)
        f.write("\n")


def format_table(records: list[TimingRecord]) -> str:
    """Rows = (model, theta algo), columns = rho algos; cells in seconds."""
    rho_algos = list(dict.fromkeys(r.rho_algo for r in records))
    rows: dict[tuple[str, str], dict[str, float]] = {}
    for r in records:
        rows.setdefault((r.channel_model, r.theta_algo), {})[r.rho_algo] = r.seconds_mean
    header = f"{'model':<8} {'theta':<10}" + "".join(f"{a:>12}" for a in rho_algos)
    lines = [header, "-" * len(header)]
    for (model, theta_algo), cells in rows.items():
        line = f"{model:<8} {theta_algo:<10}"
        for a in rho_algos:
            line += f"{cells.get(a, float('nan')):>12.4f}"
        lines.append(line)
    return "\n".join(lines)
