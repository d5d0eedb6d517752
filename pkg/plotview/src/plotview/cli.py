"""Command line: render experiment artifacts to static PNG figures.

Usage:

    plotview render --chart out/chart.csv --metrics out/metrics.json --out figs

writes ``chart_truth.png``, ``chart_estimate.png``, and ``quality.png`` into
the output directory at 150 dpi. This tool only reads the documented file
schemas; it never recomputes estimates or metrics.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib.pyplot as plt

from .figures import build_chart_figures, build_quality_figure
from .io import SchemaError, read_chart_csv, read_metrics_json

DPI = 150


@dataclass(frozen=True)
class PlotJob:
    """One rendering request: input artifacts, output directory, title."""

    chart_csv: Path
    metrics_json: Path
    out_dir: Path
    title: str = ""


def render_chart(job: PlotJob) -> list[Path]:
    """Render the truth/estimate scatter pair; returns the written paths."""
    table = read_chart_csv(job.chart_csv)
    job.out_dir.mkdir(parents=True, exist_ok=True)
    fig_truth, fig_est = build_chart_figures(table, job.title)
    paths = []
    for fig, name in ((fig_truth, "chart_truth.png"), (fig_est, "chart_estimate.png")):
        path = job.out_dir / name
        fig.savefig(path, dpi=DPI)
        plt.close(fig)
        paths.append(path)
    return paths


def render_quality(job: PlotJob) -> Path:
    """Render the TW/CT-versus-K curve; returns the written path."""
    curve = read_metrics_json(job.metrics_json)
    job.out_dir.mkdir(parents=True, exist_ok=True)
    fig = build_quality_figure(curve, job.title)
    path = job.out_dir / "quality.png"
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plotview", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render chart scatter pair and quality curve")
    render.add_argument("--chart", required=True, type=Path, help="chart CSV from an experiment run")
    render.add_argument("--metrics", required=True, type=Path, help="metrics JSON from the same run")
    render.add_argument("--out", required=True, type=Path, help="output directory for PNG files")
    render.add_argument("--title", default="", help="title prefix for all figures")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(chart_csv=args.chart, metrics_json=args.metrics, out_dir=args.out, title=args.title)
    try:
        written = render_chart(job)
        written.append(render_quality(job))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
