"""Per-period orchestration: decompose, refine, score and write the report bundle."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from . import io, svg
from .decompose import DecomposeConfig, TimeSeries, aggregate, extract_waves
from .fit import FitReport, MultiLogisticModel, model_deriv, r_squared, refine, rmse
from .logwave import Scalogram, default_scales
from .periods import Period

log = logging.getLogger(__name__)


def decompose_config(cfg: io.AnalysisConfig, length: int) -> DecomposeConfig:
    scales = None
    if cfg.scale_min is not None or cfg.scale_max is not None:
        lo = cfg.scale_min if cfg.scale_min is not None else 0.5
        hi = cfg.scale_max if cfg.scale_max is not None else length / 3.0
        scales = np.geomspace(lo, hi, cfg.scale_steps)
    elif cfg.scale_steps != 120:
        scales = default_scales(length, cfg.scale_steps)
    # refinement needs 3k + 2 samples
    k_max = max(0, min(cfg.k_max, (length - 2) // 3))
    return DecomposeConfig(scales=scales, shift_step=cfg.shift_step, k_max=k_max,
                           ysat_floor=cfg.ysat_floor, extremum_floor=cfg.extremum_floor)


def initial_model(window: TimeSeries, waves) -> MultiLogisticModel:
    """Waves plus the straight line left in the aggregate once they are removed."""
    t = window.index
    rest = aggregate(window).values - sum((w(t) for w in waves), np.zeros_like(t))
    d, c = np.polyfit(t, rest, 1)
    return MultiLogisticModel(float(c), float(d), list(waves))


def fit_window(model: MultiLogisticModel, window: TimeSeries, cfg: io.AnalysisConfig):
    if model.waves and cfg.refine:
        return refine(model, window, seed=cfg.seed, restarts=cfg.restarts)
    e = rmse(model, window)
    return model, FitReport(e, e, r_squared(model, window), 0, True)


def scalogram_csv(sc: Scalogram) -> str:
    lines = ["scale," + ",".join(repr(float(b)) for b in sc.shifts)]
    for a, row in zip(sc.scales, sc.values):
        lines.append(repr(float(a)) + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def scalogram_svg(sc: Scalogram, title: str) -> str:
    markers = [(e.alpha, e.beta, e.kind) for e in sc.extrema[:40]]
    return svg.heatmap_svg(sc.scales, sc.shifts, sc.values, markers, title)


def overlay_svg(model: MultiLogisticModel, window: TimeSeries, title: str) -> str:
    t = window.index
    fine = np.linspace(t[0], t[-1], 4 * t.size)
    return svg.line_chart_svg([(t, window.values, "data"),
                               (fine, model_deriv(model, fine), "model y'(t)")],
                              title, "week", "rate")


def analyze_period(series: TimeSeries, period: Period, cfg: io.AnalysisConfig, out: Path,
                   tag: str) -> dict:
    window = series.window(period.start, period.end)
    dec = extract_waves(window, decompose_config(cfg, len(window)))
    model = initial_model(window, dec.waves)
    model, report = fit_window(model, window, cfg)

    (out / f"{tag}.waves.json").write_text(io.dumps(io.waves_to_json(model, period)))
    (out / f"{tag}.fit.json").write_text(io.dumps(io.fit_report_to_json(report, period)))
    first = dec.scalograms[0]
    (out / f"{tag}.scalogram.csv").write_text(scalogram_csv(first))
    (out / f"{tag}.scalogram.svg").write_text(
        scalogram_svg(first, f"Index scalogram, period {period.label}"))
    (out / f"{tag}.overlay.svg").write_text(
        overlay_svg(model, window, f"Period {period.label}: data and fitted derivative"))
    return {"k": model.k, "r2": report.r2, "rmse": report.rmse_after,
            "stop_reason": dec.stop_reason}


def run_pipeline(cfg: io.AnalysisConfig, series: TimeSeries | None = None) -> dict:
    """Analyze every configured period and write ``summary.json``.

    A failing period is recorded in the summary and does not stop the rest.
    """
    if series is None:
        if not cfg.input:
            raise io.InputError("no input file configured")
        series = io.ingest_csv(cfg.input)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for n, period in enumerate(cfg.periods, start=1):
        row = {"period": n, "label": period.label, "start": period.start, "end": period.end}
        try:
            row.update(status="ok", **analyze_period(series, period, cfg, out, f"period{n}"))
        except (ValueError, np.linalg.LinAlgError) as exc:
            log.warning("period %s failed: %s", period.label, exc)
            row.update(status="failed", error=str(exc))
        rows.append(row)

    summary = {
        "schema": io.SCHEMA,
        "input": Path(cfg.input).name if cfg.input else None,
        "weeks": len(series),
        "filled_weeks": series.filled,
        "seed": cfg.seed,
        "periods": rows,
        "failures": sum(r["status"] != "ok" for r in rows),
    }
    (out / "summary.json").write_text(io.dumps(summary))
    return summary
