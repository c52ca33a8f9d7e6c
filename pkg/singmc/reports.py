# -*- coding: utf-8 -*-
"""
Report serialisation: JSON with 17 significant digits (doubles round-trip), CSV with a header row.

Non-finite floats have no JSON literal and are written as null.

"""
import csv
import json
import logging
import math

import numpy as np

from singmc.settings import Settings

logger = logging.getLogger(__name__)
logger.debug("importing...")


def format_float(value: float) -> str:
    text = format(float(value), f".{Settings.json_significant_digits}g")
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def _encode(obj) -> str:
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def to_json(obj) -> str:
    """One line of JSON, keys in insertion order."""
    return _encode(obj)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value) if math.isfinite(value) else str(float(value))
    return str(value)


def write_json(out, obj):
    out.write(to_json(obj))
    out.write("\n")


def write_json_lines(out, rows):
    for row in rows:
        write_json(out, row)


def write_csv(out, header, rows):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])


def write_report(out, report, fmt="json"):
    """An EstimateReport (or anything with to_dict) as one JSON object or a one-row CSV."""
    data = report.to_dict()
    if fmt == "csv":
        write_csv(out, list(data.keys()), [list(data.values())])
    else:
        write_json(out, data)


def write_band(out, report, fmt="json", include_covariance=None):
    """ParamBandReport as JSON, or as the curve theta..., q_hat, lower, upper in CSV."""
    if fmt != "csv":
        write_json(out, report.to_dict(include_covariance))
        return
    d = report.grid.dim
    header = [f"theta{k + 1}" for k in range(d)] + ["q_hat", "lower", "upper"]
    rows = [list(theta) + [q, lo, hi]
            for theta, q, lo, hi in zip(report.grid.points, report.q_hat, report.lower, report.upper)]
    write_csv(out, header, rows)


def write_samples(out, points, prefix, fmt="json"):
    """Raw sample rows: CSV with columns prefix1..prefixn, or one JSON array per line."""
    points = np.atleast_2d(points)
    if fmt == "csv":
        write_csv(out, [f"{prefix}{k + 1}" for k in range(points.shape[1])], points.tolist())
    else:
        write_json_lines(out, points.tolist())


logger.debug("imported")
