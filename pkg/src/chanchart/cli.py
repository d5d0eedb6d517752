"""Experiment driver: config resolution, pipeline orchestration, artifact emission.

A run goes scene -> CSI -> (theta, rho) estimation -> chart -> metrics, with
optional benchmarking and spectrum dumps. Configuration comes from an
optional JSON file whose fields all have defaults; command-line flags
override file values. Progress goes to stderr; machine-readable results go
to files in the output directory, reproducible from the manifest alone.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .aoa import AngleGrid
from .bench import TimingRecord, format_table, records_to_json, time_pipeline
from .channel import ChannelModel, ChannelParams, generate_csi
from .chart import Chart, build_chart, write_chart_csv
from .exceptions import ChartingError, ConfigurationError
from .metrics import quality_curve, rank_matrix, write_metrics_json, _pair_scores, _check_k
from .pipeline import (
    EstimateContext,
    METRIC_RHO_ALGOS,
    RHO_ALGOS,
    THETA_ALGOS,
    estimate_scene,
    fit_lr,
    lr_training_pairs,
    rho_spectrum,
    sweep_estimates,
    theta_spectrum,
)
from .ranging import RangeGrid, check_range_alias
from .scene import Scene, SceneConfig, generate_scene

ALL_MODELS = ("los", "qlos", "qnlos")


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description; every field has a Table-style default."""

    scene: SceneConfig = SceneConfig()
    channel: ChannelParams = ChannelParams(n_sub=32)
    theta_algo: str = "music"
    rho_algo: str = "music"
    angle_grid: AngleGrid = AngleGrid()
    range_grid: RangeGrid = RangeGrid()
    k_max: int = 102
    repeats: int = 3
    lr_train: int = 256
    workers: int = 0
    bench: bool = False
    dump_spectra: bool = False
    output_dir: str = "out"

    def validate(self) -> None:
        self.scene.validate()
        self.channel.validate()
        if self.theta_algo not in THETA_ALGOS:
            raise ConfigurationError(f"theta_algo must be one of {THETA_ALGOS}, got {self.theta_algo!r}")
        if self.rho_algo not in RHO_ALGOS:
            raise ConfigurationError(f"rho_algo must be one of {RHO_ALGOS}, got {self.rho_algo!r}")
        if self.rho_algo in ("music", "bartlett"):
            if self.channel.n_sub < 2:
                raise ConfigurationError(
                    f"rho_algo {self.rho_algo!r} needs n_sub >= 2, got {self.channel.n_sub}"
                )
            check_range_alias(self.range_grid, self.channel.delta_f)
        if self.rho_algo == "lr" and not 2 <= self.lr_train <= self.scene.n_ue:
            raise ConfigurationError(
                f"lr training size {self.lr_train} must be in [2, n_ue={self.scene.n_ue}]"
            )
        _check_k(self.scene.n_ue, self.k_max)
        if self.repeats < 1:
            raise ConfigurationError(f"repeats must be >= 1, got {self.repeats}")
        if self.workers < 0:
            raise ConfigurationError(f"workers must be >= 0, got {self.workers}")

    def context(self) -> EstimateContext:
        return EstimateContext(
            angle_grid=self.angle_grid,
            range_grid=self.range_grid,
            delta_f=self.channel.delta_f,
        )


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from a (possibly sparse) JSON-style dictionary."""
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    kwargs: dict = {}
    if "scene" in data:
        kwargs["scene"] = SceneConfig(**data["scene"])
    if "channel" in data:
        ch = dict(data["channel"])
        if "model" in ch:
            ch["model"] = ChannelModel(ch["model"])
        if "snr_db" in ch and isinstance(ch["snr_db"], str):
            ch["snr_db"] = float(ch["snr_db"])
        kwargs["channel"] = ChannelParams(**ch)
    else:
        kwargs["channel"] = ChannelParams(n_sub=32)
    if "angle_grid" in data:
        kwargs["angle_grid"] = AngleGrid(**data["angle_grid"])
    if "range_grid" in data:
        kwargs["range_grid"] = RangeGrid(**data["range_grid"])
    for key in ("theta_algo", "rho_algo", "k_max", "repeats", "lr_train", "workers",
                "bench", "dump_spectra", "output_dir"):
        if key in data:
            kwargs[key] = data[key]
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as f:
        return config_from_dict(json.load(f))


def manifest_dict(cfg: ExperimentConfig) -> dict:
    """Resolved config, seeds, and version: everything needed to re-derive a run."""
    return {
        "version": __version__,
        "scene": dataclasses.asdict(cfg.scene),
        "channel": {**dataclasses.asdict(cfg.channel), "model": cfg.channel.model.value},
        "theta_algo": cfg.theta_algo,
        "rho_algo": cfg.rho_algo,
        "angle_grid": dataclasses.asdict(cfg.angle_grid),
        "range_grid": dataclasses.asdict(cfg.range_grid),
        "k_max": cfg.k_max,
        "repeats": cfg.repeats,
        "lr_train": cfg.lr_train,
        "workers": cfg.workers,
        "bench": cfg.bench,
        "dump_spectra": cfg.dump_spectra,
        "output_dir": str(cfg.output_dir),
    }


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _dump_spectra(scene: Scene, cfg: ExperimentConfig, out: Path) -> None:
    spectra_dir = out / "spectra"
    spectra_dir.mkdir(parents=True, exist_ok=True)
    ctx = cfg.context()
    spectral_rho = cfg.rho_algo in ("music", "bartlett")
    for ue in range(scene.n_ue):
        csi = generate_csi(scene, ue, cfg.channel)
        jobs = [("theta", theta_spectrum(csi.entries, cfg.theta_algo, ctx))]
        if spectral_rho:
            jobs.append(("rho", rho_spectrum(csi.entries, cfg.rho_algo, ctx)))
        for kind, spec in jobs:
            with open(spectra_dir / f"ue{ue:05d}_{kind}.csv", "w", encoding="utf-8") as f:
                f.write("abscissa,value\n")
                for a, v in zip(spec.grid, spec.values):
                    f.write(f"{a:.6f},{v:.12e}\n")


def run_experiment(cfg: ExperimentConfig) -> dict[str, Path]:
    """Execute one configured run and emit chart, metrics, manifest (and more).

    Returns the paths of the emitted files. Outputs are deterministic for a
    fixed seed, apart from the timing numbers in the runtime file.
    """
    cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    _progress(f"scene: {cfg.scene.n_ue} UEs, seed {cfg.scene.rng_seed}")
    scene = generate_scene(cfg.scene)

    _progress(
        f"estimating {cfg.theta_algo}/{cfg.rho_algo} on {cfg.channel.model.value}, "
        f"snr {cfg.channel.snr_db} dB, workers {cfg.workers}"
    )
    estimates = estimate_scene(
        scene,
        cfg.channel,
        cfg.theta_algo,
        cfg.rho_algo,
        cfg.context(),
        workers=cfg.workers,
        lr_train_count=cfg.lr_train,
    )
    chart = build_chart(estimates, scene, metric_rho=cfg.rho_algo in METRIC_RHO_ALGOS)
    paths["chart"] = out / "chart.csv"
    write_chart_csv(chart, paths["chart"])

    _progress(f"metrics: TW/CT for K = 1..{cfg.k_max}")
    report = quality_curve(chart.truth, chart.est, cfg.k_max)
    paths["metrics"] = out / "metrics.json"
    write_metrics_json(report, paths["metrics"])

    if cfg.bench:
        _progress(f"benchmark: {cfg.repeats} repeats over {scene.n_ue} UEs")
        dataset = [generate_csi(scene, ue, cfg.channel) for ue in range(scene.n_ue)]
        training = (
            lr_training_pairs(scene, cfg.channel, min(cfg.lr_train, scene.n_ue))
            if cfg.rho_algo == "lr"
            else None
        )
        record = time_pipeline(
            (cfg.theta_algo, cfg.rho_algo),
            dataset,
            cfg.repeats,
            cfg.context(),
            training,
            channel_model=cfg.channel.model.value,
        )
        paths["runtime"] = out / "runtime.json"
        records_to_json([record], paths["runtime"])
        _progress(format_table([record]))

    if cfg.dump_spectra:
        _progress("dumping per-UE spectra")
        _dump_spectra(scene, cfg, out)

    paths["manifest"] = out / "manifest.json"
    with open(paths["manifest"], "w", encoding="utf-8") as f:
        json.dump(manifest_dict(cfg), f, indent=2, sort_keys=True)
        f.write("\n")
    _progress(f"done: {out}")
    return paths


def run_suite(
    cfg: ExperimentConfig,
    models: tuple[str, ...] = ALL_MODELS,
    theta_algos: tuple[str, ...] = THETA_ALGOS,
    rho_algos: tuple[str, ...] = RHO_ALGOS,
) -> dict:
    """Cross-product TW/CT table: estimator pairs x channel models at K = k_max.

    Per-cell failures are recorded in the cell and the suite continues.
    Returns the suite dictionary (also written to suite.json / suite.txt).
    """
    cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    scene = generate_scene(cfg.scene)
    truth = scene.ues[:, :2] - np.array([scene.bs.x, scene.bs.y])
    ranks_truth = rank_matrix(truth)
    ctx = cfg.context()
    cells = []
    for model in models:
        params = replace(cfg.channel, model=ChannelModel(model))
        _progress(f"suite: sweeping estimators on {model}")
        sweep = sweep_estimates(
            scene, params, tuple(theta_algos), tuple(rho_algos), ctx,
            workers=cfg.workers, lr_train_count=cfg.lr_train,
        )
        for theta_algo in theta_algos:
            for rho_algo in rho_algos:
                cell = {"model": model, "theta": theta_algo, "rho": rho_algo,
                        "tw": None, "ct": None, "error": None}
                try:
                    estimates = zip(
                        range(scene.n_ue),
                        sweep[("theta", theta_algo)],
                        sweep[("rho", rho_algo)],
                    )
                    chart = build_chart(estimates, scene, metric_rho=rho_algo in METRIC_RHO_ALGOS)
                    tw, ct = _pair_scores(ranks_truth, rank_matrix(chart.est), cfg.k_max)
                    cell["tw"], cell["ct"] = tw, ct
                except ChartingError as exc:
                    cell["error"] = str(exc)
                cells.append(cell)
    suite = {"k": cfg.k_max, "n": scene.n_ue, "models": list(models), "cells": cells}
    with open(out / "suite.json", "w", encoding="utf-8") as f:
        json.dump(suite, f, indent=2)
        f.write("\n")
    with open(out / "suite.txt", "w", encoding="utf-8") as f:
        f.write(format_suite_table(suite) + "\n")
    return suite


def format_suite_table(suite: dict) -> str:
    """Text table: one row per estimator pair, TW/CT columns per model."""
    models = suite["models"]
    header = f"{'theta':<10}{'rho':<10}"
    for m in models:
        header += f"{m + ' TW':>12}{m + ' CT':>12}"
    lines = [f"TW/CT at K = {suite['k']}, n = {suite['n']}", header, "-" * len(header)]
    by_pair: dict[tuple[str, str], dict[str, dict]] = {}
    for cell in suite["cells"]:
        by_pair.setdefault((cell["theta"], cell["rho"]), {})[cell["model"]] = cell
    for (theta_algo, rho_algo), per_model in by_pair.items():
        line = f"{theta_algo:<10}{rho_algo:<10}"
        for m in models:
            cell = per_model.get(m)
            if cell is None or cell["error"] is not None:
                line += f"{'err':>12}{'err':>12}"
            else:
                line += f"{cell['tw']:>12.4f}{cell['ct']:>12.4f}"
        lines.append(line)
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="chanchart",
        description="Simulate CSI, estimate per-UE angle/distance, build a channel chart, "
        "and score it with trustworthiness/continuity.",
    )
    p.add_argument("--config", type=str, default=None, help="JSON config file; flags override it")
    p.add_argument("--model", choices=ALL_MODELS, default=None, help="channel model")
    p.add_argument("--snr", type=float, default=None, help="SNR in dB (inf disables noise)")
    p.add_argument("--theta", choices=THETA_ALGOS, default=None, help="angle estimator")
    p.add_argument("--rho", choices=RHO_ALGOS, default=None, help="range estimator")
    p.add_argument("--n-ue", type=int, default=None, help="number of UEs")
    p.add_argument("--n-sub", type=int, default=None, help="number of subcarriers")
    p.add_argument("--seed", type=int, default=None, help="seed for both scene and channel RNG")
    p.add_argument("--k-max", type=int, default=None, help="largest TW/CT neighborhood size")
    p.add_argument("--bench", action="store_true", help="time the configured pipeline")
    p.add_argument("--dump-spectra", action="store_true", help="write per-UE spectrum CSVs")
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--workers", type=int, default=None, help="parallel worker processes (0 = serial)")
    p.add_argument("--repeats", type=int, default=None, help="benchmark repeats")
    p.add_argument("--suite", action="store_true",
                   help="run the full estimator x model TW/CT table instead of a single run")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    scene_over = {}
    if args.n_ue is not None:
        scene_over["n_ue"] = args.n_ue
        if cfg.scene.n_vip > args.n_ue:
            scene_over["n_vip"] = 0
    if args.seed is not None:
        scene_over["rng_seed"] = args.seed
    channel_over = {}
    if args.model is not None:
        channel_over["model"] = ChannelModel(args.model)
    if args.snr is not None:
        channel_over["snr_db"] = args.snr
    if args.n_sub is not None:
        channel_over["n_sub"] = args.n_sub
    if args.seed is not None:
        channel_over["rng_seed"] = args.seed
    over: dict = {}
    if scene_over:
        over["scene"] = replace(cfg.scene, **scene_over)
    if channel_over:
        over["channel"] = replace(cfg.channel, **channel_over)
    if args.theta is not None:
        over["theta_algo"] = args.theta
    if args.rho is not None:
        over["rho_algo"] = args.rho
    if args.k_max is not None:
        over["k_max"] = args.k_max
    if args.out is not None:
        over["output_dir"] = args.out
    if args.workers is not None:
        over["workers"] = args.workers
    if args.repeats is not None:
        over["repeats"] = args.repeats
    if args.bench:
        over["bench"] = True
    if args.dump_spectra:
        over["dump_spectra"] = True
    return replace(cfg, **over) if over else cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        cfg.validate()
    except (ChartingError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.suite:
            run_suite(cfg)
        else:
            run_experiment(cfg)
    except ChartingError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
