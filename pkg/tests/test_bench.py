"""Benchmark harness: timing records, the cross-product matrix, formatting."""

import json

import numpy as np
import pytest

from chanchart.bench import (
    TimingRecord,
    benchmark_matrix,
    format_table,
    records_to_json,
    time_pipeline,
)
from chanchart.channel import ChannelParams, CsiMatrix, generate_csi
from chanchart.exceptions import BenchmarkError, DomainError
from chanchart.scene import SceneConfig, generate_scene


def make_dataset(n_ue, seed=0, n_sub=8):
    scene = generate_scene(SceneConfig(n_ue=n_ue, n_vip=0, rng_seed=seed))
    params = ChannelParams(n_sub=n_sub)
    return [generate_csi(scene, ue, params) for ue in range(n_ue)]


DATASET16 = make_dataset(16)


def test_single_repeat_has_zero_std():
    rec = time_pipeline(("bartlett", "isq"), DATASET16, repeats=1)
    assert rec.repeats == 1
    assert rec.seconds_std == 0.0
    assert rec.seconds_mean > 0.0


def test_record_fields_and_dict():
    rec = time_pipeline(("bartlett", "isq"), DATASET16, repeats=2, channel_model="qlos")
    assert isinstance(rec, TimingRecord)
    d = rec.to_dict()
    assert set(d) == {
        "theta_algo",
        "rho_algo",
        "channel_model",
        "seconds_mean",
        "seconds_std",
        "repeats",
    }
    assert d["theta_algo"] == "bartlett" and d["channel_model"] == "qlos"


def test_rejects_bad_arguments():
    with pytest.raises(DomainError):
        time_pipeline(("bartlett", "isq"), DATASET16, repeats=0)
    with pytest.raises(DomainError):
        time_pipeline(("bartlett", "isq"), [], repeats=1)


def test_wraps_estimation_failures():
    poisoned = [CsiMatrix(np.zeros((4, 4), dtype=complex), 7)]
    with pytest.raises(BenchmarkError, match=r"bartlett/isq failed: ue 7"):
        time_pipeline(("bartlett", "isq"), poisoned, repeats=1)


def test_cost_grows_with_dataset():
    small = make_dataset(300)
    large = small + make_dataset(300, seed=1)
    t_small = time_pipeline(("bartlett", "isq"), small, repeats=3).seconds_mean
    t_large = time_pipeline(("bartlett", "isq"), large, repeats=3).seconds_mean
    assert t_large > 1.5 * t_small


def test_matrix_order_and_coverage():
    datasets = {"los": DATASET16, "qlos": DATASET16}
    records = benchmark_matrix(("bartlett", "music"), ("isq",), datasets, repeats=1)
    combos = [(r.channel_model, r.theta_algo, r.rho_algo) for r in records]
    assert combos == [
        ("los", "bartlett", "isq"),
        ("los", "music", "isq"),
        ("qlos", "bartlett", "isq"),
        ("qlos", "music", "isq"),
    ]


def test_records_json_round_trip(tmp_path):
    records = benchmark_matrix(("bartlett",), ("isq",), {"los": DATASET16}, repeats=1)
    path = tmp_path / "bench.json"
    records_to_json(records, path)
    payload = json.loads(path.read_text())
    assert payload == [records[0].to_dict()]


def test_format_table_layout():
    records = [
        TimingRecord("bartlett", "isq", "los", 0.5, 0.0, 1),
        TimingRecord("bartlett", "music", "los", 1.25, 0.0, 1),
    ]
    table = format_table(records)
    lines = table.splitlines()
    assert "model" in lines[0] and "isq" in lines[0] and "music" in lines[0]
    assert lines[2].startswith("los")
    assert "0.5000" in lines[2] and "1.2500" in lines[2]


def test_lr_timing_includes_fit():
    from chanchart.pipeline import lr_training_pairs

    scene = generate_scene(SceneConfig(n_ue=16, n_vip=0, rng_seed=3))
    params = ChannelParams(n_sub=8)
    dataset = [generate_csi(scene, ue, params) for ue in range(16)]
    training = lr_training_pairs(scene, params, 8)
    rec = time_pipeline(("bartlett", "lr"), dataset, repeats=1, lr_training=training)
    assert rec.seconds_mean > 0.0
    with pytest.raises(BenchmarkError, match="needs training pairs"):
        time_pipeline(("bartlett", "lr"), dataset, repeats=1)
