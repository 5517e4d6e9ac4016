"""Multilogistic model (linear trend plus logistic waves) and its refinement."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import lstsq
from scipy.optimize import minimize
from scipy.special import expit

from .decompose import LogisticWave, TimeSeries


@dataclass
class MultiLogisticModel:
    c: float = 0.0
    d: float = 0.0
    waves: list[LogisticWave] = field(default_factory=list)

    def __post_init__(self):
        for w in self.waves:
            if w.a <= 0:
                raise ValueError(f"wave slope coefficient must be positive, got {w.a}")

    @property
    def k(self) -> int:
        return len(self.waves)


@dataclass
class FitReport:
    rmse_before: float
    rmse_after: float
    r2: float
    iterations: int
    converged: bool


def model_eval(model: MultiLogisticModel, t):
    """Aggregate view ``c + d t + sum y_sat / (1 + exp(-(t - b)/a))``."""
    t = np.asarray(t, dtype=float)
    out = model.c + model.d * t
    for w in model.waves:
        out = out + w(t)
    return out


def model_deriv(model: MultiLogisticModel, t):
    """Differential view: time derivative of ``model_eval``."""
    t = np.asarray(t, dtype=float)
    out = np.full_like(t, model.d)
    for w in model.waves:
        out = out + w.slope(t)
    return out if out.ndim else float(out)


def rmse(model: MultiLogisticModel, data: TimeSeries) -> float:
    resid = data.values - model_deriv(model, data.index)
    return float(np.sqrt(np.mean(resid ** 2)))


def r_squared(model: MultiLogisticModel, data: TimeSeries) -> float:
    """Coefficient of determination of ``model_deriv`` against the data window."""
    y = np.asarray(data.values, dtype=float)
    if y.size < 2:
        raise ValueError("R^2 needs at least two samples")
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0.0:
        raise ValueError("R^2 undefined for data with zero variance")
    ssr = float(np.sum((y - model_deriv(model, data.index)) ** 2))
    return 1.0 - ssr / sst


def compute_ratio(wave: LogisticWave, period_start: int) -> float:
    """Peak weekly slope ``y_sat/(4a)`` divided by the period-local inflection week."""
    b_local = wave.b - period_start + 1
    if b_local <= 0:
        raise ValueError(f"inflection {wave.b} precedes period start {period_start}")
    return wave.y_sat / (4.0 * wave.a * b_local)


def _basis(t: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = expit((t[:, None] - b[None, :]) / a[None, :])
    return np.hstack([np.ones((t.size, 1)), s * (1.0 - s) / a[None, :]])


def _project(t, y, a, b):
    """Best (d, y_sat...) for fixed slopes/inflections, and the resulting RMSE."""
    A = _basis(t, a, b)
    coef = lstsq(A, y, lapack_driver="gelsy", check_finite=False)[0]
    resid = y - A @ coef
    return coef, float(np.sqrt(np.mean(resid ** 2)))


def refine(model: MultiLogisticModel, data: TimeSeries, bounds=None, seed: int = 0,
           restarts: int = 3, evals_per_dim: int = 1000):
    """Locally minimize the RMSE of ``model_deriv`` against differential ``data``.

    Slopes ``a_i`` are boxed to +-50% and inflections to +-3 a_i around the
    starting model unless ``bounds`` (list of ((a_lo, a_hi), (b_lo, b_hi))
    per wave) is given. Saturations and the trend slope are solved exactly by
    linear least squares inside a Nelder-Mead search over (a, b); the
    intercept ``c`` is invisible to the differential data and kept as is.
    ``restarts`` extra simplex runs start from seeded random points in the box;
    each start may spend ``evals_per_dim`` objective evaluations per parameter.
    Returns ``(model, FitReport)``; the result is never worse than the input.
    """
    k = model.k
    y = np.asarray(data.values, dtype=float)
    t = data.index
    if k < 1:
        raise ValueError("refine needs at least one wave")
    if y.size < 3 * k + 2:
        raise ValueError(f"{k} waves need at least {3 * k + 2} samples, got {y.size}")
    if not np.all(np.isfinite(y)):
        raise ValueError("data contains non-finite values")

    a0 = np.array([w.a for w in model.waves])
    b0 = np.array([w.b for w in model.waves])
    if bounds is None:
        bounds = [((0.5 * a, 1.5 * a), (b - 3 * a, b + 3 * a)) for a, b in zip(a0, b0)]
    lo = np.array([bd[0][0] for bd in bounds] + [bd[1][0] for bd in bounds])
    hi = np.array([bd[0][1] for bd in bounds] + [bd[1][1] for bd in bounds])
    box = list(zip(lo, hi))

    before = rmse(model, data)

    def objective(p):
        return _project(t, y, p[:k], p[k:])[1]

    rng = np.random.default_rng(seed)
    starts = [np.clip(np.concatenate([a0, b0]), lo, hi)]
    starts += [rng.uniform(lo, hi) for _ in range(restarts)]

    best_p, best_f, iterations, converged = None, np.inf, 0, False
    for p in starts:
        f, ok = objective(p), False
        budget = evals_per_dim * p.size
        # restart the simplex from its own optimum until it stops moving
        while budget > 0:
            res = minimize(objective, p, method="Nelder-Mead", bounds=box,
                           options={"xatol": 1e-12, "fatol": 1e-15, "maxfev": budget,
                                    "adaptive": p.size > 4})
            iterations += int(res.nit)
            budget -= int(res.nfev)
            improved = res.fun < f * (1 - 1e-9) and f - res.fun > 1e-15
            p, f, ok = res.x, min(f, res.fun), bool(res.success)
            if not improved:
                break
        if f < best_f:
            best_p, best_f, converged = p, f, ok

    coef, best_f = _project(t, y, best_p[:k], best_p[k:])
    if best_f >= before:
        return model, FitReport(before, before, r_squared(model, data), iterations, converged)

    waves = [replace(w, a=float(best_p[i]), b=float(best_p[k + i]), y_sat=float(coef[1 + i]))
             for i, w in enumerate(model.waves)]
    out = MultiLogisticModel(model.c, float(coef[0]), waves)
    after = rmse(out, data)
    return out, FitReport(before, after, r_squared(out, data), iterations, converged)
