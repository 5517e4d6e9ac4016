"""Closed-form soliton solutions of the forced KdV equation

    P_T + 6 P P_X + P_XXX + C1 = 0

together with a finite-difference residual check, the amplitude/time
linearity test for soliton trains and a Lambert-W inversion of redundancy.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

# relative gap below which two wave numbers count as equal
DEGENERATE_RTOL = 1e-6


@dataclass(frozen=True)
class SolitonSpec:
    kappas: tuple[float, ...]
    c1: float = 0.0

    def __post_init__(self):
        ks = tuple(float(k) for k in np.atleast_1d(self.kappas))
        object.__setattr__(self, "kappas", ks)
        if not ks:
            raise ValueError("at least one wave number is required")
        if any(k <= 0 for k in ks):
            raise ValueError(f"wave numbers must be positive, got {ks}")
        for ki, kj in itertools.combinations(ks, 2):
            _check_distinct(ki, kj)

    @property
    def n(self) -> int:
        return len(self.kappas)


@dataclass
class Grid2D:
    x: np.ndarray
    t: np.ndarray
    values: np.ndarray  # shape (len(t), len(x))

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.t.size, self.x.size):
            raise ValueError(f"values shape {self.values.shape} does not match "
                             f"grid ({self.t.size}, {self.x.size})")
        for name, axis in (("x", self.x), ("t", self.t)):
            if axis.size > 1:
                steps = np.diff(axis)
                if steps[0] <= 0 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
                    raise ValueError(f"{name} samples must be uniformly increasing")

    @property
    def hx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def ht(self) -> float:
        return float(self.t[1] - self.t[0])

    @classmethod
    def from_function(cls, f, x, t) -> "Grid2D":
        X, T = np.meshgrid(np.asarray(x, float), np.asarray(t, float))
        return cls(x, t, f(X, T))


@dataclass
class SolitonTrain:
    amplitudes: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        if self.amplitudes.shape != self.times.shape:
            raise ValueError("amplitudes and times must have the same length")
        if len(set(self.times.tolist())) != self.times.size:
            raise ValueError("duplicate times in soliton train")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def _check_distinct(ki: float, kj: float):
    if abs(ki - kj) <= DEGENERATE_RTOL * max(abs(ki), abs(kj)):
        raise ValueError(f"wave numbers {ki} and {kj} are (nearly) equal")


def _sech2(z):
    # 1/cosh^2 without overflow for large |z|
    e = np.exp(-2.0 * np.abs(z))
    return 4.0 * e / (1.0 + e) ** 2


def single_soliton(spec: SolitonSpec, x, t):
    """One forced soliton: ``2 r^2 sech^2[r (x - 4 r^2 t + C1 t^2 / 2)] - C1 t`` with ``r = kappa/2``."""
    if spec.n != 1:
        raise ValueError("single_soliton takes exactly one wave number")
    r = spec.kappas[0] / 2.0
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    c1 = spec.c1
    out = 2.0 * r * r * _sech2(r * (x - 4.0 * r * r * t + 0.5 * c1 * t * t)) - c1 * t
    return out if out.ndim else float(out)


def fission_pulse(n: int, rho: float, x, t, c1: float = 0.0):
    """``n(n+1) rho^2 sech^2[...]`` pulse; an initial condition that fissions into n solitons.

    Exact only for n = 1. Use it as a starting profile, not as a solution.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return n * (n + 1) * rho * rho * _sech2(rho * (x - 4 * rho * rho * t + 0.5 * c1 * t * t)) - c1 * t


def phase_shift(k_i: float, k_j: float) -> float:
    """Interaction factor ``exp(A_ij) = ((k_i - k_j)/(k_i + k_j))**2``."""
    if k_i <= 0 or k_j <= 0:
        raise ValueError("wave numbers must be positive")
    _check_distinct(k_i, k_j)
    return ((k_i - k_j) / (k_i + k_j)) ** 2


def _terms(spec: SolitonSpec):
    """Binary vectors mu with their summed wave numbers and interaction exponents."""
    ks = np.array(spec.kappas)
    mus = np.array(list(itertools.product((0, 1), repeat=spec.n)), dtype=float)
    log_a = {(i, j): math.log(phase_shift(ks[i], ks[j]))
             for i, j in itertools.combinations(range(spec.n), 2)}
    coupling = np.array([sum(log_a[i, j] * m[i] * m[j] for (i, j) in log_a) for m in mus])
    return mus, ks, coupling


def _exponents(spec: SolitonSpec, x, t):
    mus, ks, coupling = _terms(spec)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    eta = ks * x[..., None] - ks ** 3 * t[..., None]  # (..., N)
    return eta @ mus.T + coupling, mus @ ks  # (..., 2^N), (2^N,)


def n_soliton_log_F(spec: SolitonSpec, x, t):
    """``log F_N`` evaluated by log-sum-exp over all 2^N terms."""
    theta, _ = _exponents(spec, x, t)
    out = logsumexp(theta, axis=-1)
    return out if np.ndim(out) else float(out)


def n_soliton_F(spec: SolitonSpec, x, t):
    """``F_N = sum_mu exp(sum_i mu_i eta_i + sum_{i<j} mu_i mu_j A_ij)``, ``eta_i = k_i x - k_i^3 t``.

    Overflows to inf for very large exponents; use ``n_soliton_log_F`` there.
    """
    out = np.exp(n_soliton_log_F(spec, x, t))
    return out if np.ndim(out) else float(out)


def _log_F_xx_analytic(spec: SolitonSpec, x, t):
    # d/dx theta_mu = s_mu = sum_i mu_i k_i, so (log F)'' is the variance of s
    # under weights softmax(theta).
    theta, s = _exponents(spec, x, t)
    w = np.exp(theta - logsumexp(theta, axis=-1, keepdims=True))
    mean = w @ s
    return np.einsum("...m,...m->...", w, (s - mean[..., None]) ** 2)


def _log_F_xx_fd(spec: SolitonSpec, x, t, h):
    # fourth-order centred second derivative
    f = lambda dx: n_soliton_log_F(spec, x + dx, t)
    return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h)


def n_soliton_P(spec: SolitonSpec, x, t, method: str = "analytic", h: float | None = None) -> Grid2D:
    """N-soliton field ``P = 2 d^2/dx^2 log F_N`` sampled on the ``x`` by ``t`` grid.

    ``method="fd"`` uses fourth-order finite differences with step ``h``
    (default ``0.05 / max k``) instead of the exact softmax-variance form.
    The forcing constant is not used: the construction is for C1 = 0.
    """
    X, T = np.meshgrid(np.asarray(x, float), np.asarray(t, float))
    if method == "analytic":
        vals = 2.0 * _log_F_xx_analytic(spec, X, T)
    elif method == "fd":
        step = h if h is not None else 0.05 / max(spec.kappas)
        vals = 2.0 * _log_F_xx_fd(spec, X, T, step)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Grid2D(x, t, vals)


def kdv_residual(grid: Grid2D, c1: float = 0.0) -> float:
    """Max over interior points of ``|P_T + 6 P P_X + P_XXX + C1|`` (centred differences)."""
    P = grid.values
    nt, nx = P.shape
    if nx < 5 or nt < 3:
        raise ValueError(f"grid needs at least 5 x-points and 3 t-points, got {nx}x{nt}")
    hx, ht = grid.hx, grid.ht
    c = P[1:-1, 2:-2]
    p_t = (P[2:, 2:-2] - P[:-2, 2:-2]) / (2 * ht)
    p_x = (P[1:-1, 3:-1] - P[1:-1, 1:-3]) / (2 * hx)
    p_xxx = (P[1:-1, 4:] - 2 * P[1:-1, 3:-1] + 2 * P[1:-1, 1:-3] - P[1:-1, :-4]) / (2 * hx ** 3)
    return float(np.max(np.abs(p_t + 6 * c * p_x + p_xxx + c1)))


def amplitude_time_linearity(train: SolitonTrain, tol: float):
    """Check that every pairwise ``(A_i - A_j)/(T_i - T_j)`` matches the least-squares slope.

    Returns ``(is_linear, slope)``.
    """
    if train.times.size < 3:
        raise ValueError("need at least three solitons")
    A, T = train.amplitudes, train.times
    slope = float(np.polyfit(T, A, 1)[0])
    i, j = np.triu_indices(T.size, k=1)
    pair = (A[i] - A[j]) / (T[i] - T[j])
    return bool(np.all(np.abs(pair - slope) <= tol)), slope


def lambert_w(r: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """Principal branch of the Lambert W function by Newton iteration."""
    r = float(r)
    branch = -1.0 / math.e
    if r < branch:
        # allow the rounding of -1/e itself
        if branch - r > 1e-15:
            raise ValueError(f"lambert_w undefined for r < -1/e, got {r}")
        r = branch
    if r == 0.0:
        return 0.0
    if r == branch:
        return -1.0
    if r < -0.25:
        # series about the branch point
        p = math.sqrt(max(2.0 * (math.e * r + 1.0), 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif r < 3.0:
        w = math.log1p(r) * (1.0 - math.log1p(math.log1p(r)) / (2.0 + math.log1p(r)))
    else:
        lr = math.log(r)
        w = lr - math.log(lr)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - r
        if abs(f) <= 0.25 * tol:
            break
        fp = ew * (w + 1.0)
        if fp == 0.0:
            break
        w_next = w - f / fp
        if w_next <= -1.0:
            w_next = (w - 1.0) / 2.0 if w > -1.0 else -1.0 + 1e-12
        if w_next == w:
            break
        w = w_next
    return w


def density_from_redundancy(redundancy: float) -> float:
    """Invert ``R = P ln P`` for the density ``P = exp(W(R))`` (equivalently ``R / W(R)``)."""
    return math.exp(lambert_w(redundancy))
