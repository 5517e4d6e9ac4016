"""Acceptance criteria, each checked at its stated tolerance and time budget.

Every criterion prints one ``criterion N: PASS|FAIL`` line (also repeated in
the terminal summary). Criterion 8 needs real weekly EUR/USD closes and runs
only when ``TRENDWAVE_EURUSD_CSV`` points at such a file.
"""
import math
import os
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.integrate import trapezoid

from conftest import ACCEPTANCE_LINES
from trendwave import infocalc, io, logwave, soliton
from trendwave.decompose import LogisticWave, estimate_saturation, extract_waves
from trendwave.fit import compute_ratio, refine
from trendwave.periods import DEFAULT_PERIODS, REFERENCE_R2, REFERENCE_WAVES
from trendwave.pipeline import initial_model
from trendwave.synthetic import THREE_WAVE, three_wave_series


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.details: list[str] = []
        self.ok = True

    def check(self, label, passed, measured):
        self.ok &= bool(passed)
        self.details.append(f"{label}={measured}")
        return bool(passed)


@contextmanager
def criterion(number, title, budget):
    c = Criterion(number, title, budget)
    start = time.perf_counter()
    try:
        yield c
    finally:
        elapsed = time.perf_counter() - start
        c.check("runtime_s", elapsed < budget, f"{elapsed:.2f}<{budget}")
        line = f"criterion {number}: {'PASS' if c.ok else 'FAIL'} {title} [{', '.join(c.details)}]"
        print(line)
        ACCEPTANCE_LINES.append(line)
    assert c.ok, line


QUAD_T = np.arange(-60.0, 60.0 + 5e-4, 1e-3)


def logistic_d2y(a, b, y_sat, n):
    t = np.arange(0, n + 2, dtype=float)
    y = y_sat / (1 + np.exp(-(t - b) / a))
    return y[2:] - 2 * y[1:-1] + y[:-2]


def test_criterion_1_wavelet_normalization():
    with criterion(1, "wavelet unit norm and Bernoulli norms", 1.0) as c:
        for n, b2n in ((2, -1 / 30), (3, 1 / 42), (4, -1 / 30)):
            norm = trapezoid(logwave.psi(n, QUAD_T) ** 2, QUAD_T)
            c.check(f"|psi_{n}|^2-1", abs(norm - 1) <= 1e-6, f"{abs(norm - 1):.1e}")
            raw = trapezoid(logwave.logistic_derivative(n, QUAD_T) ** 2, QUAD_T)
            c.check(f"|x^({n})|^2-|B{2 * n}|", abs(raw - abs(b2n)) <= 1e-6, f"{abs(raw - abs(b2n)):.1e}")
            c.check(f"B{2 * n}", float(logwave.bernoulli(2 * n)) == pytest.approx(b2n, abs=1e-16),
                    str(logwave.bernoulli(2 * n)))


def test_criterion_2_sech_bernoulli_identity():
    with criterion(2, "integral (d/dt sech^2)^2 = 16/15", 1.0) as c:
        d = -2 * np.tanh(QUAD_T) / np.cosh(QUAD_T) ** 2
        val = trapezoid(d * d, QUAD_T)
        target = 2 ** 5 * abs(float(logwave.bernoulli(4)))
        c.check("error", abs(val - 16 / 15) <= 1e-6 and target == pytest.approx(16 / 15), f"{abs(val - 16 / 15):.1e}")


def test_criterion_3_extremum_property():
    scales = np.arange(0.5, 20.0 + 1e-9, 0.25)
    shifts = np.arange(1.0, 100.0 + 1e-9, 0.5)
    with criterion(3, "scalogram extremum at (a, b) and saturation estimate", 10.0) as c:
        for y_sat, kind in ((1.0, "max"), (-1.8, "min")):
            sc = logwave.scalogram(logistic_d2y(6, 50, y_sat, 100), scales, shifts)
            top = sc.global_max if kind == "max" else sc.global_min
            c.check(f"{kind}_is_global", top is not None and sc.dominant() == top, kind)
            cell = abs(top.alpha - 6) <= 0.25 and abs(top.beta - 50) <= 0.5
            c.check(f"{kind}_at", cell, f"({top.alpha},{top.beta})")
            est = estimate_saturation(top.alpha, top.value, kind)
            c.check(f"y_sat({y_sat})", abs(est / y_sat - 1) <= 0.02, f"{est:.4f}")


def test_criterion_4_pipeline_recovery():
    with criterion(4, "three-wave synthetic recovery", 60.0) as c:
        data = three_wave_series()
        dec = extract_waves(data)
        c.check("k", len(dec.waves) == 3, len(dec.waves))
        matched = all(abs(w.b - true.b) <= 1.0 and abs(w.a / true.a - 1) <= 0.05
                      for w, true in zip(dec.waves, THREE_WAVE.waves))
        c.check("located", matched, [round(w.b, 1) for w in dec.waves])
        model, report = refine(initial_model(data, dec.waves), data)
        span = float(np.ptp(data.values))
        c.check("rmse/range", report.rmse_after <= 1e-6 * span, f"{report.rmse_after / span:.1e}")
        c.check("r2", report.r2 >= 0.999, f"{report.r2:.6f}")


def test_criterion_5_kdv():
    def residual(h):
        spec = soliton.SolitonSpec((1.0,))
        x = np.arange(-10.0, 10.0 + h / 2, h)
        t = np.arange(-0.5, 0.5 + h / 2, h)
        return soliton.kdv_residual(
            soliton.Grid2D.from_function(lambda X, T: soliton.single_soliton(spec, X, T), x, t), 0.0)

    with criterion(5, "KdV residual, convergence, Hirota N=1, phase shift", 10.0) as c:
        r_coarse, r_fine = residual(0.02), residual(0.01)
        c.check("residual(h=0.01)", r_fine <= 1e-3, f"{r_fine:.2e}")
        order = math.log2(r_coarse / r_fine)
        c.check("order", abs(order - 2.0) <= 0.2, f"{order:.3f}")
        spec = soliton.SolitonSpec((2.0,))
        x, t = np.linspace(-15, 15, 1501), np.linspace(-1, 1, 41)
        X, T = np.meshgrid(x, t)
        gap = float(np.max(np.abs(soliton.n_soliton_P(spec, x, t).values - soliton.single_soliton(spec, X, T))))
        c.check("hirota_gap", gap <= 1e-6, f"{gap:.1e}")
        c.check("phase_shift(3,1)", soliton.phase_shift(3, 1) == 0.25, soliton.phase_shift(3, 1))


def test_criterion_6_information():
    with criterion(6, "XOR triad and R12 = -T12", 1.0) as c:
        xor = np.zeros((2, 2, 2))
        for a in (0, 1):
            for b in (0, 1):
                xor[a, b, a ^ b] = 0.25
        t123 = infocalc.configurational_information_3(infocalc.JointDistribution(xor))
        c.check("T123", abs(t123 + 1.0) <= 1e-12, f"{t123:.12f}")
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(100):
            shape = tuple(rng.integers(2, 6, size=2))
            p = rng.random(shape)
            d = infocalc.JointDistribution(p / p.sum())
            worst = max(worst, abs(infocalc.mutual_redundancy(d) + infocalc.mutual_information_2(d)))
        c.check("max|R12+T12|", worst <= 1e-12, f"{worst:.1e}")


def test_criterion_7_ratio_fixtures():
    with criterion(7, "ratio column of the first period", 1.0) as c:
        rows = REFERENCE_WAVES["I"]
        hits = sum(f"{compute_ratio(LogisticWave(a, b, y), 1):.3g}" == f"{ratio:.3g}" for a, b, y, ratio in rows)
        c.check("matched", hits == len(rows) == 9, f"{hits}/{len(rows)}")


EURUSD = os.environ.get("TRENDWAVE_EURUSD_CSV")


@pytest.mark.skipif(not EURUSD, reason="set TRENDWAVE_EURUSD_CSV to a weekly EUR/USD date,close file")
def test_criterion_8_reference_fits():
    series = io.ingest_csv(EURUSD)
    with criterion(8, "reference waves refit within 0.03 of reference R^2", 3600.0) as c:
        close = 0
        for period in DEFAULT_PERIODS:
            window = series.window(period.start, period.end)
            waves = [LogisticWave(a, b, y) for a, b, y, _ in REFERENCE_WAVES[period.label]]
            start = initial_model(window, waves)
            _, report = refine(start, window)
            ok = abs(report.r2 - REFERENCE_R2[period.label]) <= 0.03
            close += ok
            c.details.append(f"{period.label}:{report.r2:.4f}")
        c.check("periods_within", close >= 6, f"{close}/8")
