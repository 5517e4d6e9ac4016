"""Deterministic synthetic series with known multilogistic structure."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .decompose import DIFFERENTIAL, LogisticWave, TimeSeries
from .fit import MultiLogisticModel, model_deriv

THREE_WAVE = MultiLogisticModel(
    c=1.0,
    d=0.01,
    waves=[LogisticWave(6.0, 60.0, 10.0), LogisticWave(6.0, 150.0, 3.0), LogisticWave(6.0, 240.0, 1.0)],
)
THREE_WAVE_WEEKS = 300


def weekly_series(model: MultiLogisticModel, weeks: int, noise: float = 0.0, seed: int = 0,
                  start_label: str = "2001-10-07") -> TimeSeries:
    """Differential series ``model_deriv(n)`` for weeks ``1..weeks`` plus optional Gaussian noise."""
    t = np.arange(1, weeks + 1, dtype=float)
    y = model_deriv(model, t)
    if noise:
        y = y + np.random.default_rng(seed).normal(0.0, noise, size=t.size)
    return TimeSeries(y, DIFFERENTIAL, 1, start_label)


def three_wave_series() -> TimeSeries:
    return weekly_series(THREE_WAVE, THREE_WAVE_WEEKS)


def fixture_path(name: str = "synthetic_3wave.csv"):
    """Path of a bundled data file."""
    return resources.files("trendwave") / "data" / name
