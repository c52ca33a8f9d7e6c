# -*- coding: utf-8 -*-
import io
import json
import math

import numpy as np
import pytest

from singmc import reports
from singmc.estimate import EstimateReport


@pytest.mark.parametrize("value, text", [
    (0.1, "0.10000000000000001"),
    (0.0, "0.0"),
    (3.0, "3.0"),
    (-2.0, "-2.0"),
    (1e300, "1.0000000000000001e+300"),
    (math.pi, "3.1415926535897931"),
])
def test_format_float(value, text):
    assert reports.format_float(value) == text
    assert float(text) == value


def test_json_encoding():
    data = {"a": np.float64(0.5), "b": [1, np.int64(2)], "c": None, "d": True, "e": float("inf"),
            "f": np.array([[0.25]]), "g": "x\"y"}
    text = reports.to_json(data)
    assert json.loads(text) == {"a": 0.5, "b": [1, 2], "c": None, "d": True, "e": None, "f": [[0.25]], "g": "x\"y"}
    with pytest.raises(TypeError):
        reports.to_json({"h": object()})


def test_report_round_trips_through_json():
    report = EstimateReport(estimate=0.1, std_error=0.0, ci_low=0.1, ci_high=0.1, n_samples=10, constant=1.0 / 3.0,
                            second_moment=0.01, seed=3, n_workers=1, confidence=0.95)
    out = io.StringIO()
    reports.write_report(out, report)
    assert json.loads(out.getvalue()) == report.to_dict()


def test_csv_cells():
    out = io.StringIO()
    reports.write_csv(out, ["a", "b", "c", "d"], [[0.1, None, False, float("nan")]])
    assert out.getvalue() == "a,b,c,d\n0.10000000000000001,,false,nan\n"


def test_samples():
    out = io.StringIO()
    reports.write_samples(out, np.array([0.25, 0.5]), "s", "csv")
    assert out.getvalue() == "s1,s2\n0.25,0.5\n"
