import json

import pytest

HEADER = "ue_id,true_x,true_y,est_x,est_y,is_vip"


def chart_lines(rows):
    return "\n".join([HEADER] + rows) + "\n"


@pytest.fixture
def small_chart(tmp_path):
    """Four points, one VIP, estimates offset from truth by +1 in x."""
    path = tmp_path / "chart.csv"
    path.write_text(
        chart_lines(
            [
                "0,0.000000,0.000000,1.000000,0.000000,0",
                "1,10.000000,5.000000,11.000000,5.000000,0",
                "2,20.000000,1.000000,21.000000,1.000000,1",
                "3,-5.000000,8.000000,-4.000000,8.000000,0",
            ]
        )
    )
    return path


@pytest.fixture
def small_metrics(tmp_path):
    path = tmp_path / "metrics.json"
    payload = {"n": 4, "k": [1, 2], "tw": [1.0, 0.875], "ct": [0.75, 1.0]}
    path.write_text(json.dumps(payload) + "\n")
    return path
