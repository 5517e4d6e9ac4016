"""Self-checks of the numerical building blocks, grouped into named suites."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import simpson

from . import infocalc, logwave, soliton
from .decompose import estimate_saturation, second_differences


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool

    def __post_init__(self):
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.passed)

    def line(self) -> str:
        return f"{self.name}: {'pass' if self.passed else 'FAIL'} (measured {self.measured:.6g})"


def _within(name, measured, target, tol) -> Check:
    err = abs(measured - target)
    return Check(name, float(measured), tol, bool(err <= tol))


QUAD_T = np.arange(-60.0, 60.0 + 5e-4, 1e-3)


def _logistic_samples(a, b, y_sat, n):
    t = np.arange(0, n + 2, dtype=float)
    return t, y_sat / (1.0 + np.exp(-(t - b) / a))


def wavelet_checks() -> list[Check]:
    out = []
    for n in (2, 3, 4):
        norm = simpson(logwave.psi(n, QUAD_T) ** 2, x=QUAD_T)
        out.append(_within(f"integral psi_{n}^2 = 1 within 1e-6", norm, 1.0, 1e-6))
        raw = simpson(logwave.logistic_derivative(n, QUAD_T) ** 2, x=QUAD_T)
        out.append(_within(f"integral (x^({n}))^2 = |B_{2 * n}| within 1e-6", raw,
                           float(abs(logwave.bernoulli(2 * n))), 1e-6))
        mean = simpson(logwave.psi(n, QUAD_T), x=QUAD_T)
        out.append(_within(f"integral psi_{n} = 0 within 1e-8", mean, 0.0, 1e-8))
    s = 1.0 / np.cosh(QUAD_T)
    gv = simpson((-2.0 * s * s * np.tanh(QUAD_T)) ** 2, x=QUAD_T)
    out.append(_within("integral (d/dt sech^2 t)^2 = 16/15 within 1e-6", gv, 16 / 15, 1e-6))

    t1 = 1.0
    closed = math.sqrt(30) * (math.exp(-2 * t1) - math.exp(-t1)) / (1 + math.exp(-t1)) ** 3
    out.append(_within("psi_2(1) matches closed form within 1e-14", logwave.psi(2, t1), closed, 1e-14))

    scales = np.arange(0.5, 20.0 + 1e-9, 0.25)
    shifts = np.arange(1.0, 100.0 + 1e-9, 0.5)
    for y_sat, kind in ((1.0, "max"), (-1.8, "min")):
        t, y = _logistic_samples(6.0, 50.0, y_sat, 100)
        sc = logwave.scalogram(second_differences(y), scales, shifts)
        ext = sc.global_max if kind == "max" else sc.global_min
        dom = sc.dominant()
        ok = (ext is not None and dom == ext and abs(ext.alpha - 6.0) <= 0.25
              and abs(ext.beta - 50.0) <= 0.5)
        out.append(Check(f"scalogram global {kind} at (6, 50) for y_sat={y_sat}",
                         float(ext.value if ext else 0.0), 0.25, bool(ok)))
        est = estimate_saturation(ext.alpha, ext.value) if ext else 0.0
        out.append(_within(f"saturation estimate {y_sat} within 2%", est, y_sat, 0.02 * abs(y_sat)))
    return out


def soliton_checks() -> list[Check]:
    out = []
    spec = soliton.SolitonSpec((1.0,), 0.0)

    def residual(h):
        x = np.arange(-10.0, 10.0 + h / 2, h)
        t = np.arange(0.0, 1.0 + h / 2, h)
        g = soliton.Grid2D.from_function(lambda X, T: soliton.single_soliton(spec, X, T), x, t)
        return soliton.kdv_residual(g, 0.0)

    r1, r2 = residual(0.01), residual(0.005)
    out.append(Check("single-soliton KdV residual <= 1e-3 at h=0.01", r1, 1e-3, r1 <= 1e-3))
    order = math.log2(r1 / r2)
    out.append(_within("residual convergence order 2.0 +- 0.2", order, 2.0, 0.2))

    spec2 = soliton.SolitonSpec((2.0,), 0.0)
    x = np.linspace(-15, 15, 601)
    t = np.linspace(-2, 2, 41)
    X, T = np.meshgrid(x, t)
    diff = np.abs(soliton.n_soliton_P(spec2, x, t).values - soliton.single_soliton(spec2, X, T)).max()
    out.append(Check("N=1 Hirota field matches single soliton within 1e-6", diff, 1e-6, diff <= 1e-6))

    out.append(_within("phase shift (3, 1) = 0.25", soliton.phase_shift(3.0, 1.0), 0.25, 0.0))

    p3 = soliton.n_soliton_P(soliton.SolitonSpec((0.8, 1.3, 2.0)), x, t).values
    out.append(Check("3-soliton field non-negative", float(p3.min()), 0.0, bool(p3.min() >= 0.0)))

    rs = np.concatenate([[-1 / math.e], np.linspace(-1 / math.e, 1e3, 2001)[1:]])
    worst = max(abs(w * math.exp(w) - r) for r, w in ((r, soliton.lambert_w(r)) for r in rs))
    out.append(Check("lambert_w residual <= 1e-12 on [-1/e, 1e3]", worst, 1e-12, worst <= 1e-12))

    ladder = soliton.SolitonTrain([2.0, 8.0, 18.0], [1.0, 2.0, 3.0])
    linear, _ = soliton.amplitude_time_linearity(ladder, 1e-3)
    out.append(Check("quadratic amplitude ladder is not linear in time", float(linear), 0.0, not linear))
    return out


def _xor_triad():
    p = np.zeros((2, 2, 2))
    for a in (0, 1):
        for b in (0, 1):
            p[a, b, a ^ b] = 0.25
    return infocalc.JointDistribution(p)


def entropy_checks(seed: int = 7) -> list[Check]:
    out = []
    t123 = infocalc.configurational_information_3(_xor_triad())
    out.append(_within("XOR triad T123 = -1 bit", t123, -1.0, 1e-12))
    copies = np.zeros((2, 2, 2))
    copies[0, 0, 0] = copies[1, 1, 1] = 0.5
    out.append(_within("identical bits T123 = +1 bit",
                       infocalc.configurational_information_3(infocalc.JointDistribution(copies)),
                       1.0, 1e-12))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        shape = tuple(rng.integers(2, 5, size=2))
        p = rng.random(shape)
        d = infocalc.JointDistribution(p / p.sum())
        worst = max(worst, abs(infocalc.mutual_redundancy(d) + infocalc.mutual_information_2(d)))
    out.append(Check("R12 = -T12 on 100 random tables", worst, 1e-12, worst <= 1e-12))
    return out


SUITES = {
    "wavelet": wavelet_checks,
    "soliton": soliton_checks,
    "entropy": entropy_checks,
}


def run(suite: str) -> list[Check]:
    if suite == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if suite not in SUITES:
        raise KeyError(suite)
    return SUITES[suite]()


def as_report(checks: list[Check], suite: str) -> dict:
    return {"suite": suite, "passed": all(c.passed for c in checks),
            "checks": [asdict(c) for c in checks]}
