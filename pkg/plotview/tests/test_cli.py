"""Command-line behavior: artifacts written, exit codes, error reporting."""

import json

from plotview.cli import PlotJob, main, render_chart, render_quality


def test_render_writes_three_files(small_chart, small_metrics, tmp_path, capsys):
    out = tmp_path / "figs"
    code = main(["render", "--chart", str(small_chart), "--metrics", str(small_metrics),
                 "--out", str(out), "--title", "demo"])
    assert code == 0
    for name in ("chart_truth.png", "chart_estimate.png", "quality.png"):
        assert (out / name).stat().st_size > 0
    stdout = capsys.readouterr().out.splitlines()
    assert len(stdout) == 3 and stdout[0].endswith("chart_truth.png")


def test_single_row_chart_renders(tmp_path, small_metrics):
    chart = tmp_path / "one.csv"
    chart.write_text(
        "ue_id,true_x,true_y,est_x,est_y,is_vip\n0,1.000000,2.000000,1.100000,2.100000,1\n"
    )
    job = PlotJob(chart_csv=chart, metrics_json=small_metrics, out_dir=tmp_path / "figs")
    paths = render_chart(job)
    assert all(p.stat().st_size > 0 for p in paths)


def test_missing_input_exits_two(tmp_path, small_metrics, capsys):
    code = main(["render", "--chart", str(tmp_path / "nope.csv"),
                 "--metrics", str(small_metrics), "--out", str(tmp_path / "figs")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_off_schema_input_exits_two(tmp_path, small_chart, capsys):
    bad = tmp_path / "metrics.json"
    bad.write_text(json.dumps({"n": 1}))
    code = main(["render", "--chart", str(small_chart), "--metrics", str(bad),
                 "--out", str(tmp_path / "figs")])
    assert code == 2
    assert "missing keys" in capsys.readouterr().err


def test_render_quality_path(small_chart, small_metrics, tmp_path):
    job = PlotJob(chart_csv=small_chart, metrics_json=small_metrics, out_dir=tmp_path / "q")
    path = render_quality(job)
    assert path.name == "quality.png"
    assert path.stat().st_size > 0
