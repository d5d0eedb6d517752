"""Readers for the chart CSV and metrics JSON experiment outputs.

The schemas are fixed by the producing pipeline:

- chart CSV: header ``ue_id,true_x,true_y,est_x,est_y,is_vip``, one row per
  point, coordinates as floats, ``is_vip`` as 0/1.
- metrics JSON: object with keys ``n`` (point count), ``k`` (neighborhood
  sizes), ``tw`` and ``ct`` (quality values aligned with ``k``).

Anything off-schema raises :class:`SchemaError` naming the offending row or
column, so a renamed column or a truncated file fails loudly instead of
producing an empty plot.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

CHART_COLUMNS = ("ue_id", "true_x", "true_y", "est_x", "est_y", "is_vip")
METRIC_KEYS = ("n", "k", "tw", "ct")


class SchemaError(ValueError):
    """Input file does not match the documented chart/metrics schema."""


@dataclass(frozen=True)
class ChartTable:
    """Parsed chart: truth and estimate coordinates plus the VIP flags."""

    ue_id: np.ndarray
    truth: np.ndarray
    est: np.ndarray
    vip: np.ndarray

    @property
    def n(self) -> int:
        return self.ue_id.shape[0]


@dataclass(frozen=True)
class QualityCurve:
    """Parsed metrics: TW and CT per neighborhood size K."""

    n: int
    k: np.ndarray
    tw: np.ndarray
    ct: np.ndarray


def read_chart_csv(path) -> ChartTable:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: empty file, expected header {','.join(CHART_COLUMNS)}")
        if tuple(h.strip() for h in header) != CHART_COLUMNS:
            raise SchemaError(
                f"{path}: header mismatch, expected {','.join(CHART_COLUMNS)}, "
                f"got {','.join(header)}"
            )
        ids, truth, est, vip = [], [], [], []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(CHART_COLUMNS):
                raise SchemaError(f"{path} row {row_no}: expected {len(CHART_COLUMNS)} fields, got {len(row)}")
            values = {}
            for col, raw in zip(CHART_COLUMNS, row):
                try:
                    values[col] = int(raw) if col in ("ue_id", "is_vip") else float(raw)
                except ValueError:
                    raise SchemaError(f"{path} row {row_no} column {col}: cannot parse {raw!r}") from None
            if values["is_vip"] not in (0, 1):
                raise SchemaError(f"{path} row {row_no} column is_vip: expected 0 or 1, got {values['is_vip']}")
            ids.append(values["ue_id"])
            truth.append((values["true_x"], values["true_y"]))
            est.append((values["est_x"], values["est_y"]))
            vip.append(bool(values["is_vip"]))
    if not ids:
        raise SchemaError(f"{path}: no data rows")
    return ChartTable(
        ue_id=np.array(ids, dtype=np.int64),
        truth=np.array(truth, dtype=np.float64),
        est=np.array(est, dtype=np.float64),
        vip=np.array(vip, dtype=bool),
    )


def read_metrics_json(path) -> QualityCurve:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object, got {type(payload).__name__}")
    missing = [key for key in METRIC_KEYS if key not in payload]
    if missing:
        raise SchemaError(f"{path}: missing keys {missing}")
    k = np.asarray(payload["k"], dtype=np.int64)
    tw = np.asarray(payload["tw"], dtype=np.float64)
    ct = np.asarray(payload["ct"], dtype=np.float64)
    if k.ndim != 1 or k.size == 0:
        raise SchemaError(f"{path} column k: expected a non-empty list")
    if tw.shape != k.shape or ct.shape != k.shape:
        raise SchemaError(
            f"{path}: k/tw/ct lengths differ ({k.size}, {tw.size}, {ct.size})"
        )
    return QualityCurve(n=int(payload["n"]), k=k, tw=tw, ct=ct)
