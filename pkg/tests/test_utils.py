import json
import logging

import pytest
from pydantic import BaseModel

from src.utils import JsonReportMixin, clean_family_name, log_execution_time


class _Report(JsonReportMixin, BaseModel):
    zeta: float
    alpha: int


@pytest.mark.parametrize(
    "raw, expected",
    [
        (" Odd-A ", "odd_a"),
        ("even b", "even_b"),
        ("OddD", "oddd"),
    ],
)
def test_clean_family_name(raw, expected):
    assert clean_family_name(raw) == expected


def test_log_execution_time_keeps_result_and_logs(caplog):
    @log_execution_time
    def suma(a, b):
        return a + b

    with caplog.at_level(logging.DEBUG, logger="src.utils"):
        assert suma(2, 3) == 5

    assert "[Telemetry] 'suma' took" in caplog.text


def test_render_json_is_sorted_and_stable():
    report = _Report(zeta=1.5, alpha=2)

    texto = report.render_json()

    assert texto == report.render_json()
    assert list(json.loads(texto)) == ["alpha", "zeta"]


def test_save_json_writes_utf8(tmp_path):
    path = tmp_path / "report.json"

    _Report(zeta=0.25, alpha=1).save_json(str(path))

    assert json.loads(path.read_text(encoding="utf-8")) == {"alpha": 1, "zeta": 0.25}
