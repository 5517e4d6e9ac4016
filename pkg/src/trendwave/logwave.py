"""Logistic wavelets and the discrete CWT "Index" used for trend decomposition.

The order-n logistic wavelet is the n-th derivative of the logistic function
``x(t) = 1 / (1 + exp(-t))`` scaled to unit L2 norm by ``1/sqrt(|B_2n|)``.
Only the second-order wavelet drives the scalogram; higher orders are kept
for the normalization checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import expit

SQRT30 = np.sqrt(30.0)

# |psi_2(t)| < 1e-11 beyond this many scales from the centre
TAIL_SCALES = 30.0

_BERNOULLI_TABLE = {
    0: Fraction(1),
    1: Fraction(-1, 2),
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
}
MAX_BERNOULLI = 32


@lru_cache(maxsize=None)
def _bernoulli_exact(m: int) -> Fraction:
    if m in _BERNOULLI_TABLE:
        return _BERNOULLI_TABLE[m]
    if m % 2 == 1:
        return Fraction(0)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    acc = sum(comb(m + 1, j) * _bernoulli_exact(j) for j in range(m))
    return -acc / (m + 1)


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number ``B_m`` (convention ``B_1 = -1/2``), 0 <= m <= 32."""
    if m < 0:
        raise ValueError(f"Bernoulli index must be non-negative, got {m}")
    if m > MAX_BERNOULLI:
        raise ValueError(f"Bernoulli index limited to {MAX_BERNOULLI}, got {m}")
    return _bernoulli_exact(int(m))


@lru_cache(maxsize=None)
def _derivative_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (ascending powers of u) of x^(n) as a polynomial in u = x(t)."""
    coeffs = [0, 1]  # x itself
    for _ in range(n):
        # d/dt P(u) = P'(u) * u * (1 - u)
        dp = [k * coeffs[k] for k in range(1, len(coeffs))]
        out = [0] * (len(dp) + 2)
        for k, c in enumerate(dp):
            out[k + 1] += c
            out[k + 2] -= c
        coeffs = out
    return tuple(coeffs)


def logistic_derivative(n: int, t):
    """n-th derivative of the logistic function evaluated at ``t`` (scalar or array)."""
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    u = expit(np.asarray(t, dtype=float))
    coeffs = _derivative_poly(int(n))
    # Horner in u
    out = np.zeros_like(u)
    for c in reversed(coeffs):
        out = out * u + c
    return out if out.ndim else float(out)


def wavelet_norm(n: int) -> float:
    """``sqrt(|B_2n|)``, the L2 norm of the unnormalized order-n wavelet."""
    return float(abs(bernoulli(2 * n))) ** 0.5


def psi(n: int, t):
    """Normalized logistic mother wavelet of order ``n >= 2``."""
    if n < 2:
        raise ValueError(f"logistic wavelet requires order n >= 2, got {n}")
    sign = -1.0 if n % 2 else 1.0
    return sign * logistic_derivative(n, t) / wavelet_norm(n)


def psi2(t):
    """Second-order wavelet ``sqrt(30) * x''(t)`` in its stable product form."""
    x = expit(np.asarray(t, dtype=float))
    out = SQRT30 * x * (1.0 - x) * (1.0 - 2.0 * x)
    return out if out.ndim else float(out)


def psi_ab(n: int, a: float, b: float, t):
    """Dilated and translated wavelet ``a**-0.5 * psi_n((t - b) / a)``."""
    if a <= 0:
        raise ValueError(f"scale must be positive, got {a}")
    t = np.asarray(t, dtype=float)
    base = psi2 if n == 2 else (lambda s: psi(n, s))
    return base((t - b) / a) / np.sqrt(a)


def cwt_index(d2y, alpha: float, beta: float, positions=None) -> float:
    """Index value ``sum_n d2y[n] * psi_2^{alpha,beta}(n)``.

    ``d2y`` holds second differences for positions ``1..N`` unless explicit
    ``positions`` are given. Terms farther than 30 scales from ``beta`` are
    skipped.
    """
    if alpha <= 0:
        raise ValueError(f"scale must be positive, got {alpha}")
    d2y = np.asarray(d2y, dtype=float)
    if positions is None:
        positions = np.arange(1, d2y.size + 1, dtype=float)
    else:
        positions = np.asarray(positions, dtype=float)
    keep = np.abs(positions - beta) <= TAIL_SCALES * alpha
    if not keep.any():
        return 0.0
    return float(np.dot(d2y[keep], psi_ab(2, alpha, beta, positions[keep])))


@dataclass(frozen=True)
class Extremum:
    alpha: float
    beta: float
    value: float
    kind: str  # "max" or "min"
    i: int
    j: int


@dataclass
class Scalogram:
    scales: np.ndarray
    shifts: np.ndarray
    values: np.ndarray  # shape (len(scales), len(shifts))
    extrema: list[Extremum] = field(default_factory=list)
    global_max: Extremum | None = None
    global_min: Extremum | None = None

    def dominant(self) -> Extremum | None:
        """Cell with the largest |Index|; ties go to smaller shift, then smaller scale."""
        mags = np.abs(self.values)
        top = mags.max() if mags.size else 0.0
        if top == 0.0:
            return None
        ii, jj = np.nonzero(mags == top)
        order = np.lexsort((self.scales[ii], self.shifts[jj]))
        i, j = int(ii[order[0]]), int(jj[order[0]])
        return self._make(i, j)

    def _make(self, i: int, j: int) -> Extremum:
        v = float(self.values[i, j])
        return Extremum(float(self.scales[i]), float(self.shifts[j]), v,
                        "max" if v > 0 else "min", i, j)


def index_matrix(d2y, scales, shifts, positions=None) -> np.ndarray:
    """Vectorized Index over a (scale, shift) grid, same truncation as ``cwt_index``."""
    d2y = np.asarray(d2y, dtype=float)
    if positions is None:
        positions = np.arange(1, d2y.size + 1, dtype=float)
    positions = np.asarray(positions, dtype=float)
    scales = np.asarray(scales, dtype=float)
    shifts = np.asarray(shifts, dtype=float)
    out = np.empty((scales.size, shifts.size))
    dist = positions[None, :] - shifts[:, None]  # (shifts, N)
    for i, a in enumerate(scales):
        w = psi2(dist / a) / np.sqrt(a)
        w[np.abs(dist) > TAIL_SCALES * a] = 0.0
        out[i] = w @ d2y
    return out


def _strict_local_extrema(values: np.ndarray, floor: float):
    padded_hi = np.pad(values, 1, constant_values=-np.inf)
    padded_lo = np.pad(values, 1, constant_values=np.inf)
    rows, cols = values.shape
    is_max = np.ones_like(values, dtype=bool)
    is_min = np.ones_like(values, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            hi = padded_hi[1 + di:1 + di + rows, 1 + dj:1 + dj + cols]
            lo = padded_lo[1 + di:1 + di + rows, 1 + dj:1 + dj + cols]
            is_max &= values > hi
            is_min &= values < lo
    big = np.abs(values) > floor
    return np.argwhere(is_max & big & (values > 0)), np.argwhere(is_min & big & (values < 0))


def scalogram(d2y, scales, shifts, positions=None, floor_ratio: float = 1e-3) -> Scalogram:
    """Fill the Index matrix and locate its extrema.

    Local extrema are strict with respect to the 8-neighbourhood and must
    exceed ``floor_ratio * max|Index|``.
    """
    scales = np.asarray(scales, dtype=float)
    shifts = np.asarray(shifts, dtype=float)
    if scales.size == 0 or shifts.size == 0:
        raise ValueError("scale and shift grids must be non-empty")
    if np.any(scales <= 0):
        raise ValueError("scales must be positive")
    values = index_matrix(d2y, scales, shifts, positions)
    sc = Scalogram(scales, shifts, values)
    top = float(np.abs(values).max())
    if top == 0.0:
        return sc
    floor = floor_ratio * top
    maxima, minima = _strict_local_extrema(values, floor)
    sc.extrema = sorted((sc._make(int(i), int(j)) for i, j in np.vstack([maxima, minima])),
                        key=lambda e: -abs(e.value))
    imax = np.unravel_index(np.argmax(values), values.shape)
    imin = np.unravel_index(np.argmin(values), values.shape)
    if values[imax] > floor:
        sc.global_max = sc._make(int(imax[0]), int(imax[1]))
    if values[imin] < -floor:
        sc.global_min = sc._make(int(imin[0]), int(imin[1]))
    return sc


def default_scales(length: int, steps: int = 120, smallest: float = 0.5) -> np.ndarray:
    """Geometric scale grid from 0.5 to a third of the window length."""
    largest = max(length / 3.0, smallest * 2)
    return np.geomspace(smallest, largest, steps)


def default_shifts(start: float, end: float, step: float = 0.5) -> np.ndarray:
    n = int(round((end - start) / step))
    return start + step * np.arange(n + 1)
