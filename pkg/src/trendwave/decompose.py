"""Iterative logistic-wave extraction from a weekly series.

Each pass aggregates the (residual) series, takes central second
differences, builds the Index scalogram and removes the wave sitting at its
strongest extremum.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .logwave import Scalogram, default_scales, default_shifts, scalogram

log = logging.getLogger(__name__)

DIFFERENTIAL = "differential"
AGGREGATE = "aggregate"
MIN_DECOMPOSE_LENGTH = 8


class DegenerateWaveError(ValueError):
    """Raised when a wave would have zero saturation."""


@dataclass
class TimeSeries:
    values: np.ndarray
    kind: str = DIFFERENTIAL
    start: int = 1  # week index of values[0]
    start_label: str | None = None  # ISO date of values[0], if known
    filled: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in (DIFFERENTIAL, AGGREGATE):
            raise ValueError(f"unknown series kind {self.kind!r}")

    def __len__(self):
        return self.values.size

    @property
    def index(self) -> np.ndarray:
        return self.start + np.arange(self.values.size, dtype=float)

    def window(self, first: int, last: int) -> "TimeSeries":
        """Sub-series for week indices ``first..last`` inclusive."""
        if first < self.start or last > self.start + len(self) - 1 or first >= last:
            raise ValueError(
                f"period {first}:{last} outside data range "
                f"{self.start}:{self.start + len(self) - 1}")
        lo = first - self.start
        return TimeSeries(self.values[lo:lo + last - first + 1].copy(), self.kind, first)


@dataclass
class LogisticWave:
    a: float
    b: float
    y_sat: float
    boundary: bool = False

    def __call__(self, t):
        return self.y_sat * expit((np.asarray(t, dtype=float) - self.b) / self.a)

    def slope(self, t):
        s = expit((np.asarray(t, dtype=float) - self.b) / self.a)
        return self.y_sat * s * (1.0 - s) / self.a


@dataclass
class DecomposeConfig:
    scales: np.ndarray | None = None
    shift_step: float = 0.5
    k_max: int = 20
    ysat_floor: float = 0.002  # fraction of the detrended aggregate's range
    extremum_floor: float = 1e-3  # fraction of the first-pass extremum
    local_floor: float = 1e-3  # magnitude floor for local extrema
    discrete_correction: bool = True
    interpolate: bool = True  # sub-grid peak location


@dataclass
class Decomposition:
    waves: list[LogisticWave]
    residual: TimeSeries
    scalograms: list[Scalogram] = field(default_factory=list)
    stop_reason: str = ""


def aggregate(series: TimeSeries) -> TimeSeries:
    """Running cumulative sum of a differential series."""
    if series.kind != DIFFERENTIAL:
        raise ValueError("aggregate expects a differential series")
    if len(series) == 0:
        raise ValueError("cannot aggregate an empty series")
    return TimeSeries(np.cumsum(series.values), AGGREGATE, series.start, series.start_label)


def second_differences(series) -> np.ndarray:
    """``y[n+1] - 2 y[n] + y[n-1]`` for the interior points."""
    y = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    if y.size < 3:
        raise ValueError(f"second differences need at least 3 points, got {y.size}")
    return y[2:] - 2.0 * y[1:-1] + y[:-2]


def estimate_saturation(alpha: float, extremum_value: float, sign: str | None = None) -> float:
    """Saturation level ``sqrt(30) * alpha**1.5 * extremum`` read off the scalogram.

    ``sign`` ("max" / "min") is a consistency check only: the extremum value
    already carries the sign of the wave.
    """
    if alpha <= 0:
        raise ValueError(f"scale must be positive, got {alpha}")
    if extremum_value == 0:
        raise DegenerateWaveError("zero extremum gives a degenerate wave")
    if sign is not None:
        expected = "max" if extremum_value > 0 else "min"
        if sign != expected:
            raise ValueError(f"a {sign} cannot carry value {extremum_value}")
    return float(np.sqrt(30.0) * alpha ** 1.5 * extremum_value)


def second_difference_gain(alpha: float) -> float:
    """Leading-order ratio of the sampled Index to its continuous value.

    Second differences add y''''/12 to y''; projected on the wavelet this
    shrinks the Index by ||psi_2'||^2 / (12 alpha^2), with
    ||psi_2'||^2 = 30 |B_6| = 5/7.
    """
    return 1.0 - 5.0 / (84.0 * alpha * alpha)


def _vertex(lo: float, mid: float, hi: float) -> tuple[float, float]:
    """Offset (in cells) and height of the parabola through three samples."""
    curv = lo - 2.0 * mid + hi
    if curv == 0.0:
        return 0.0, mid
    off = float(np.clip(0.5 * (lo - hi) / curv, -0.5, 0.5))
    return off, mid + 0.25 * (hi - lo) * off


def _axis_value(grid: np.ndarray, pos: float) -> float:
    ratios = grid[1:] / grid[:-1] if np.all(grid > 0) else None
    idx = np.arange(grid.size, dtype=float)
    if ratios is not None and ratios.size > 1 and np.allclose(ratios, ratios[0], rtol=1e-9):
        return float(np.exp(np.interp(pos, idx, np.log(grid))))
    return float(np.interp(pos, idx, grid))


def peak_estimate(sc: Scalogram, top) -> tuple[float, float, float]:
    """(alpha, beta, value) at the vertex of separable parabolas through ``top``.

    Cells on the grid edge keep their grid coordinate along that axis.
    """
    v = sc.values
    i, j = top.i, top.j
    value = top.value
    di = dj = 0.0
    if 0 < i < v.shape[0] - 1:
        di, h = _vertex(v[i - 1, j], v[i, j], v[i + 1, j])
        value += h - v[i, j]
    if 0 < j < v.shape[1] - 1:
        dj, h = _vertex(v[i, j - 1], v[i, j], v[i, j + 1])
        value += h - v[i, j]
    return _axis_value(sc.scales, i + di), _axis_value(sc.shifts, j + dj), float(value)


def _scan(agg: np.ndarray, t: np.ndarray, scales, shifts, floor_ratio) -> Scalogram:
    return scalogram(second_differences(agg), scales, shifts, positions=t[1:-1],
                     floor_ratio=floor_ratio)


def extract_waves(series: TimeSeries, config: DecomposeConfig | None = None) -> Decomposition:
    """Peel logistic waves off ``series`` in decreasing order of intensity.

    Waves are located on the aggregate of ``series`` and subtracted there; the
    residual is returned in the differential view. Stops after ``k_max``
    waves, when a wave's saturation drops below ``ysat_floor`` of the
    detrended aggregate's range, when the extremum falls below ``extremum_floor`` of the
    first one, or when the extremum stops shrinking.
    """
    cfg = config or DecomposeConfig()
    if series.kind != DIFFERENTIAL:
        raise ValueError("extract_waves expects a differential series")
    if len(series) < MIN_DECOMPOSE_LENGTH:
        raise ValueError(f"need at least {MIN_DECOMPOSE_LENGTH} points, got {len(series)}")
    if not np.all(np.isfinite(series.values)):
        raise ValueError("series contains non-finite values")

    t = series.index
    agg = aggregate(series).values.copy()
    scales = cfg.scales if cfg.scales is not None else default_scales(len(series))
    shifts = default_shifts(t[0], t[-1], cfg.shift_step)
    # range of the detrended aggregate: a linear trend must not move the floor
    line = np.polyval(np.polyfit(t, agg, 1), t)
    span = float(np.ptp(agg - line))
    # rounding noise of the cumulative sum is not a wave
    flat = span <= 1e-10 * max(float(np.max(np.abs(agg))), np.finfo(float).tiny)

    waves: list[LogisticWave] = []
    scans: list[Scalogram] = []
    first = None
    previous = np.inf
    reason = "k_max"
    while len(waves) < cfg.k_max:
        sc = _scan(agg, t, scales, shifts, cfg.local_floor)
        scans.append(sc)
        top = None if flat else sc.dominant()
        if top is None:
            reason = "flat"
            break
        mag = abs(top.value)
        if first is None:
            first = mag
        elif mag < cfg.extremum_floor * first:
            reason = "extremum_floor"
            break
        if mag >= previous:
            reason = "not_decreasing"
            break
        alpha, beta, value = peak_estimate(sc, top) if cfg.interpolate else (top.alpha, top.beta, top.value)
        y_sat = estimate_saturation(alpha, value)
        if cfg.discrete_correction and alpha > 1.0:
            y_sat /= second_difference_gain(alpha)
        if abs(y_sat) < cfg.ysat_floor * span:
            reason = "ysat_floor"
            break
        boundary = (beta - t[0] < 2 * alpha) or (t[-1] - beta < 2 * alpha)
        wave = LogisticWave(alpha, beta, y_sat, bool(boundary))
        log.debug("wave %d: a=%.4g b=%.4g y_sat=%.4g", len(waves) + 1, wave.a, wave.b, wave.y_sat)
        waves.append(wave)
        agg -= wave(t)
        previous = mag

    resid = np.diff(agg, prepend=0.0) if waves else series.values.copy()
    return Decomposition(waves, TimeSeries(resid, DIFFERENTIAL, series.start), scans, reason)
