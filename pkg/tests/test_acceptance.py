"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

from fewphoton.boundstate import f_tau, oracle_bound_profile, resonant_profile, tail_decay_rate
from fewphoton.correlation import g2_asymptote, g2_curve, g2_resonant
from fewphoton.model import SystemParams, build_sector, eigenvalues, exceptional_point_kappa
from fewphoton.nphoton import envelope_resonant, g_tau, gap_decay_rate
from fewphoton.scattering import (connected_amplitude, spectral_g, spectral_g2_kernel, symmetrized_kernel_sum,
                                  transmission)

RESULTS: dict = {}

G_FIG2 = 0.025
G_FIG3 = 0.1
KAPPA_GRID = np.round(np.arange(2.0, 8.0 + 1e-9, 0.05), 10) * G_FIG3
EP_INDEX = int(np.argmin(np.abs(KAPPA_GRID - 4 * G_FIG3)))


def record(number, title, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    RESULTS[number] = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}; {detail}; {elapsed:.2f}s (limit {limit:g}s)"
    return ok


def resonant(kappa, g=G_FIG3):
    return SystemParams.resonant(1.0, g, kappa)


def test_1_spectrum_coalescence():
    t0 = time.perf_counter()
    worst_gap = worst_value = 0.0
    for n in (1, 2, 3):
        base = resonant(0.0, G_FIG2)
        p = base.replace(kappa=exceptional_point_kappa(base, n))
        e_plus, e_minus = eigenvalues(p, n)
        sector = build_sector(p, n)
        expected = n * 1.0 - 1j * (2 * n - 1) * math.sqrt(n) * G_FIG2
        worst_gap = max(worst_gap, abs(e_plus - e_minus), abs(sector.gap))
        worst_value = max(worst_value, abs(e_plus - expected), abs(e_minus - expected))
    ok = worst_gap < 1e-10 and worst_value < 1e-12
    assert record(1, "spectrum coalescence", ok, f"max gap {worst_gap:.1e}, max value error {worst_value:.1e}",
                  time.perf_counter() - t0, 1.0)


def test_2_decay_ordering():
    t0 = time.perf_counter()
    kappas = np.linspace(0.0, 0.25, 2501)[1:]
    violations = 0
    for kappa in kappas:
        p = resonant(kappa, G_FIG2)
        im1 = [e.imag for e in eigenvalues(p, 1)]
        if not max(im1) < 0:
            violations += 1
        for n in (2, 3):
            imn = [e.imag for e in eigenvalues(p, n)]
            if not max(imn) < min(im1):
                violations += 1
    assert record(2, "Im E_n < Im E_1 < 0", violations == 0,
                  f"{violations} violations over {kappas.size} kappa points", time.perf_counter() - t0, 1.0)


def test_3_unitarity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(10_000):
        Omega = rng.uniform(0.1, 3.0)
        p = SystemParams(Omega + rng.uniform(-1, 1), Omega, rng.uniform(0, 2), rng.uniform(0, 3))
        worst = max(worst, abs(abs(transmission(p, rng.uniform(-5, 5))) - 1))
    assert record(3, "single-photon unitarity", worst < 1e-13, f"max ||t|-1| {worst:.1e} over 1e4 samples",
                  time.perf_counter() - t0, 1.0)


def test_4_oracle_equivalence():
    t0 = time.perf_counter()
    errors = []
    tau = np.linspace(0.0, 10 / G_FIG3, 201)
    for ratio in (2, 4, 6):
        p = resonant(ratio * G_FIG3)
        closed = resonant_profile(p, tau).amplitude
        oracle = oracle_bound_profile(p, 1.0, 1.0, tau)
        errors.append(np.max(np.abs(oracle.amplitude - closed)) / np.max(np.abs(closed)))
    worst = max(errors)
    assert record(4, "quadrature oracle vs closed form", worst < 1e-6,
                  "relative sup error " + ", ".join(f"{e:.1e}" for e in errors) + " for kappa/g = 2, 4, 6",
                  time.perf_counter() - t0, 60.0)


def test_5_spectral_vs_closed_form():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst_g = worst_s = worst_terms = 0.0
    count = 0
    while count < 200:
        Omega = rng.uniform(0.5, 2.0)
        p = SystemParams(Omega + rng.uniform(-0.5, 0.5), Omega, rng.uniform(0.05, 1.0), rng.uniform(0.05, 2.0))
        if min(abs(build_sector(p, n).gap) for n in (1, 2)) < 1e-3:
            continue
        k1, k2, p1 = rng.uniform(-3, 3, 3)
        p2 = k1 + k2 - p1
        if min(abs(p1 - k1), abs(p1 - k2), abs(p2 - k1), abs(p2 - k2)) < 1e-3:
            continue
        worst_g = max(worst_g, abs(1 + spectral_g(p, k1) - transmission(p, k1)))
        ref = connected_amplitude(p, p1, k1, k2)
        diff = abs(symmetrized_kernel_sum(p, p1, k1, k2) - ref)
        terms = max(abs(spectral_g2_kernel(p, P, K, k1 + k2)) for P in (p1, p2) for K in (k1, k2))
        worst_s = max(worst_s, diff / abs(ref))
        worst_terms = max(worst_terms, diff / terms)
        count += 1
    ok = worst_g < 1e-10 and worst_s < 1e-8
    assert record(5, "spectral sums vs closed forms", ok,
                  f"max |1+G-t| {worst_g:.1e}, max relative S^C error {worst_s:.1e} "
                  f"({worst_terms:.1e} relative to the largest kernel term) over 200 samples",
                  time.perf_counter() - t0, 10.0)


def test_6_bound_state_tightness():
    t0 = time.perf_counter()
    rates = np.array([tail_decay_rate(resonant_profile(resonant(k))) for k in KAPPA_GRID])
    best = int(np.argmax(rates))
    ok = best == EP_INDEX and abs(rates[best] - G_FIG3) < 0.05 * G_FIG3
    assert record(6, "tail decay fastest at the EP", ok,
                  f"argmax kappa/g = {KAPPA_GRID[best] / G_FIG3:.2f}, rate/g = {rates[best] / G_FIG3:.6f}",
                  time.perf_counter() - t0, 30.0)


def test_7_g2_signature():
    t0 = time.perf_counter()
    rates, asym_err = [], 0.0
    for k in KAPPA_GRID:
        p = resonant(k)
        curve = g2_curve(p, 12 / min(k / 4, G_FIG3))
        rates.append(curve.approach_rate)
        asym_err = max(asym_err, abs(curve.asymptote - 1 / math.pi ** 2))
    best = int(np.argmax(rates))
    ok = best == EP_INDEX and asym_err < 1e-6
    assert record(7, "G2 approach fastest at the EP", ok,
                  f"argmax kappa/g = {KAPPA_GRID[best] / G_FIG3:.2f}, asymptote error {asym_err:.1e}",
                  time.perf_counter() - t0, 30.0)


def test_8_n_photon_structure():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    p = resonant(0.3)
    x2 = rng.uniform(-40, 40, (50, 2))
    ratio = np.array([envelope_resonant(p, x).value / f_tau(p, x[0] - x[1]) for x in x2])
    rel_var = float(np.var(ratio) / abs(np.mean(ratio)) ** 2)
    prod_err = 0.0
    perm_err = 0.0
    for _ in range(50):
        x = np.sort(rng.uniform(-40, 40, 3))[::-1]
        expected = f_tau(p, x[0] - x[1]) * g_tau(p, x[1] - x[2])
        value = envelope_resonant(p, x).value
        prod_err = max(prod_err, abs(value - expected) / max(abs(expected), 1e-300))
        for _ in range(5):
            shuffled = rng.permutation(x)
            perm_err = max(perm_err, abs(envelope_resonant(p, shuffled).value - value) / max(abs(value), 1e-300))
    argmax = []
    for gap_index in (0, 1):
        rates = [gap_decay_rate(resonant(k), 3, gap_index) for k in KAPPA_GRID]
        argmax.append(int(np.argmax(rates)))
    ok = rel_var < 1e-20 and prod_err < 1e-12 and perm_err < 1e-14 and all(i == EP_INDEX for i in argmax)
    assert record(8, "N-photon structure", ok,
                  f"ratio rel. variance {rel_var:.1e}, f*g error {prod_err:.1e}, permutation error {perm_err:.1e}, "
                  f"gap-rate argmax kappa/g = {', '.join(f'{KAPPA_GRID[i] / G_FIG3:.2f}' for i in argmax)}",
                  time.perf_counter() - t0, 60.0)


def test_9_seam_continuity():
    t0 = time.perf_counter()
    crit = resonant(4 * G_FIG3)
    tau = np.linspace(0, 10 / G_FIG3, 501)
    worst = 0.0
    for eps in (1e-6, -1e-6):
        near = crit.replace(kappa=crit.kappa * (1 + eps))
        for fn in (f_tau, g_tau, g2_resonant):
            ref = fn(crit, tau)
            worst = max(worst, np.max(np.abs(fn(near, tau) - ref)) / np.max(np.abs(ref)))
    assert record(9, "seam continuity at kappa = 4g(1 +- 1e-6)", worst < 1e-4,
                  f"max relative deviation {worst:.1e}", time.perf_counter() - t0, 1.0)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        try:
            test()
        except AssertionError:
            pass
    for number in sorted(RESULTS):
        print(RESULTS[number])
