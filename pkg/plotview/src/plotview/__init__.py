"""plotview: static figure renderer for channel-chart experiment outputs.

Reads the chart CSV and metrics JSON files an experiment run emits and
renders publication-style figures: ground-truth vs estimated-position
scatter plots with VIP points highlighted, and trustworthiness/continuity
curves over the neighborhood size K. Pure consumer: no estimation or metric
math is duplicated here.
"""

__version__ = "0.1.0"

from .cli import PlotJob, main, render_chart, render_quality
from .figures import build_chart_figures, build_quality_figure, shared_limits
from .io import ChartTable, QualityCurve, SchemaError, read_chart_csv, read_metrics_json
