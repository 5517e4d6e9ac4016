"""CSV ingestion, key=value configuration and JSON (de)serialization."""
from __future__ import annotations

import csv
import datetime as dt
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decompose import DIFFERENTIAL, LogisticWave, TimeSeries
from .fit import FitReport, MultiLogisticModel, compute_ratio
from .periods import DEFAULT_PERIODS, Period

log = logging.getLogger(__name__)

SCHEMA = 1


class InputError(ValueError):
    """Malformed input file or configuration (maps to exit code 2)."""


def ingest_csv(path) -> TimeSeries:
    """Read a ``date,close`` weekly CSV into a differential series indexed from week 1.

    Missing weeks are filled with the previous close; the number of filled
    weeks is stored on the series.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such file")
    dates: list[dt.date] = []
    closes: list[float] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["date", "close"]:
            raise InputError(f"{path}:1: expected header 'date,close', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                day = dt.date.fromisoformat(row[0].strip())
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad date {row[0]!r}") from None
            try:
                value = float(row[1])
            except ValueError:
                raise InputError(f"{path}:{lineno}: bad close value {row[1]!r}") from None
            if not np.isfinite(value):
                raise InputError(f"{path}:{lineno}: non-finite close value {row[1]!r}")
            if dates and day <= dates[-1]:
                raise InputError(f"{path}:{lineno}: date {day} does not follow {dates[-1]}")
            dates.append(day)
            closes.append(value)
    if not closes:
        raise InputError(f"{path}: no data rows")

    values = [closes[0]]
    filled = 0
    for prev, day, value in zip(dates, dates[1:], closes[1:]):
        weeks = round((day - prev).days / 7)
        if weeks < 1:
            raise InputError(f"{path}: dates {prev} and {day} fall in the same week")
        filled += weeks - 1
        values.extend([values[-1]] * (weeks - 1))
        values.append(value)
    if filled:
        log.info("%s: filled %d missing week(s) by carry-forward", path, filled)
    return TimeSeries(np.array(values), DIFFERENTIAL, 1, dates[0].isoformat(), filled)


def write_csv_series(path, series: TimeSeries, start_date: str = "2001-10-07"):
    first = dt.date.fromisoformat(series.start_label or start_date)
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        fh.write("date,close\n")
        for i, v in enumerate(series.values):
            fh.write(f"{(first + dt.timedelta(weeks=i)).isoformat()},{float(v)!r}\n")


def parse_period(text: str, label: str | None = None) -> Period:
    """``start:end`` or ``LABEL=start:end``."""
    if "=" in text:
        label, text = text.split("=", 1)
    try:
        a, b = (int(s) for s in text.split(":"))
    except ValueError:
        raise InputError(f"bad period {text!r}; expected start:end") from None
    if a >= b:
        raise InputError(f"period start {a} must precede end {b}")
    return Period(label or f"{a}:{b}", a, b)


def parse_periods(text: str) -> list[Period]:
    text = text.strip()
    if text.lower() in ("", "none"):
        return []
    if text.lower() == "default":
        return list(DEFAULT_PERIODS)
    return [parse_period(p.strip()) for p in text.split(",") if p.strip()]


@dataclass
class AnalysisConfig:
    input: str | None = None
    periods: list[Period] = field(default_factory=lambda: list(DEFAULT_PERIODS))
    out: str = "out"
    seed: int = 0
    scale_min: float | None = None
    scale_max: float | None = None
    scale_steps: int = 120
    shift_step: float = 0.5
    k_max: int = 20
    ysat_floor: float = 0.002
    extremum_floor: float = 1e-3
    restarts: int = 3
    refine: bool = True


_CASTS = {
    "input": str, "out": str, "seed": int, "scale_min": float, "scale_max": float,
    "scale_steps": int, "shift_step": float, "k_max": int, "ysat_floor": float,
    "extremum_floor": float, "restarts": int,
    "refine": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "periods": parse_periods,
}


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such config file")
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CASTS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CASTS[key](value)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    if "input" in out and not Path(out["input"]).is_absolute():
        out["input"] = str(path.parent / out["input"])
    return out


def build_config(file_values: dict | None = None, **flags) -> AnalysisConfig:
    """Defaults, overridden by config-file values, overridden by non-None flags."""
    cfg = AnalysisConfig()
    for source in (file_values or {}, {k: v for k, v in flags.items() if v is not None}):
        for key, value in source.items():
            setattr(cfg, key, value)
    return cfg


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def waves_to_json(model: MultiLogisticModel, period: Period) -> dict:
    rows = []
    for i, w in enumerate(model.waves, start=1):
        try:
            ratio = compute_ratio(w, period.start)
        except ValueError:
            ratio = None
        rows.append({"i": i, "a": w.a, "b": w.b, "y_sat": w.y_sat,
                     "ratio": ratio, "boundary": bool(w.boundary)})
    return {
        "schema": SCHEMA,
        "period": {"label": period.label, "start": period.start, "end": period.end},
        "c": model.c,
        "d": model.d,
        "waves": rows,
    }


def waves_from_json(doc: dict) -> tuple[MultiLogisticModel, Period | None]:
    if doc.get("schema") != SCHEMA:
        raise InputError(f"unsupported waves schema {doc.get('schema')!r}")
    waves = [LogisticWave(float(r["a"]), float(r["b"]), float(r["y_sat"]),
                          bool(r.get("boundary", False))) for r in doc["waves"]]
    p = doc.get("period")
    period = Period(p.get("label", ""), int(p["start"]), int(p["end"])) if p else None
    return MultiLogisticModel(float(doc.get("c", 0.0)), float(doc.get("d", 0.0)), waves), period


def fit_report_to_json(report: FitReport, period: Period) -> dict:
    return {
        "schema": SCHEMA,
        "period": {"label": period.label, "start": period.start, "end": period.end},
        "rmse_before": report.rmse_before,
        "rmse_after": report.rmse_after,
        "r2": report.r2,
        "iterations": report.iterations,
        "converged": report.converged,
    }
