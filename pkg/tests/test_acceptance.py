"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (shown even when pytest
captures output) and then asserts at the stated tolerance.
"""
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from oscimax.geometry import minkowski_dim_estimate
from oscimax.kernelcheck import (
    HLS,
    KernelSample,
    StepFunction,
    Young,
    constants_by_lambda,
    draw_samples,
    ineq_ratio,
    kernel_eval,
    kernel_sweep,
    psi_sq_integral,
    vdc_decay_fit,
    young_hls_check,
)
from oscimax.propagator import EvalRequest, evaluate, evaluate_oracle, triangle_bound
from oscimax.scenarios import (
    COS_HALF,
    ScenarioParams,
    build_scenario,
    run_scaling,
    witness_moduli,
)
from oscimax.spectral import Linear, NegativeDispersion, NoTwist, band, make_profile

pytestmark = pytest.mark.acceptance

BETA5 = math.log(2) / math.log(5)
BETA3 = math.log(2) / math.log(3)


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail, started):
        with capsys.disabled():
            tag = "PASS" if ok else "FAIL"
            print(f"\n[{tag}] criterion {num:2d}: {detail} ({time.perf_counter() - started:.1f} s)")
        return ok

    return emit


def test_01_cantor_dimension(report):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for r in (1 / 3, 1 / 5):
        s0 = time.perf_counter()
        got = minkowski_dim_estimate(r, 10)
        dt = time.perf_counter() - s0
        want = math.log(2) / math.log(1 / r)
        ok &= abs(got - want) <= 0.02 and dt < 1.0
        rows.append(f"r={r:.4f} slope {got:.5f} vs {want:.5f} in {dt:.3f} s")
    assert report(1, ok, "; ".join(rows), t0)


def _random_profile(rng, lam):
    n = int(rng.integers(1, 4))
    edges = np.sort(rng.uniform(-lam, lam, 2 * n))
    bands = []
    for a, b in zip(edges[::2], edges[1::2]):
        kind = rng.integers(3)
        if kind == 0:
            tw = NoTwist()
        elif kind == 1:
            tw = Linear(float(rng.uniform(-1, 1)))
        else:
            tw = NegativeDispersion(float(rng.uniform(1.1, 2.0)))
        bands.append(band(a, max(b, a + 1e-3), float(rng.uniform(0.1, 1.0)), tw))
    return make_profile(1, bands)


def test_02_oracle_equivalence(report):
    # m <= 2 keeps the 2^20-node midpoint rule resolving the phase at lambda = 200
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(20260101)))
    worst = 0.0
    for _ in range(100):
        lam = float(rng.uniform(1.0, 200.0))
        prof = _random_profile(rng, lam)
        req = EvalRequest(prof, float(rng.uniform(1.1, 2.0)), float(rng.uniform(-1, 1)),
                          float(rng.uniform(0, 1)))
        diff = abs(evaluate(req) - evaluate_oracle(req, 1 << 20)) / triangle_bound(prof)
        worst = max(worst, diff)
    dt = time.perf_counter() - t0
    ok = worst <= 1e-6 and dt < 60
    assert report(2, ok, f"max relative difference {worst:.2e} over 100 requests (tol 1e-6)", t0)


def test_03_phase_certificate(report):
    t0 = time.perf_counter()
    worst_phase = 0.0
    worst_margin = np.inf
    builds = 0
    for r in (0.2, 1 / 3 - 1e-3):
        p = ScenarioParams(r=r, q=4, c=0.125)
        for k in range(1, 8):
            inst = build_scenario("FractalLines1D", p, k)
            assert inst.cert_x.size == 2 ** k
            worst_phase = max(worst_phase, inst.max_phase)
            floor = COS_HALF * inst.lam * p.c / (2 * math.pi)
            worst_margin = min(worst_margin, float(np.min(witness_moduli(inst))) / floor)
            builds += 1
    dt = time.perf_counter() - t0
    ok = worst_phase <= 0.5 and worst_margin >= 1.0 and dt < 120
    assert report(3, ok, f"{builds} builds, max phase {worst_phase:.4f} (<= 0.5), "
                         f"min modulus / bound {worst_margin:.4f} (>= 1)", t0)


def test_04_fractal_lines_1d(report):
    t0 = time.perf_counter()
    cantor = run_scaling("FractalLines1D", ScenarioParams(q=4, s=0, r=0.2), range(3, 8))
    point = run_scaling("FractalLines1D", ScenarioParams(q=4, s=0, r=0.2, theta="point"), range(3, 8))
    want = 0.5 - 0.25 + BETA5 / 4
    ok = abs(cantor.fitted_slope - want) <= 0.05 and abs(point.fitted_slope - 0.25) <= 0.05
    ok &= time.perf_counter() - t0 < 600
    assert report(4, ok, f"Cantor slope {cantor.fitted_slope:.4f} vs {want:.4f}; "
                         f"Theta={{0}} slope {point.fitted_slope:.4f} vs 0.25 (tol 0.05)", t0)


def test_05_fractal_lines_2d_low(report):
    t0 = time.perf_counter()
    rep = run_scaling("FractalLines2D_Low", ScenarioParams(q=3, s=0, r=1 / 3), range(2, 6))
    want = 1 - 2 / 3 + BETA3 / 3
    ok = abs(rep.fitted_slope - want) <= 0.08 and time.perf_counter() - t0 < 1200
    assert report(5, ok, f"slope {rep.fitted_slope:.4f} vs {want:.4f} (tol 0.08), "
                         f"lambda up to {rep.rows[-1].lam:g}", t0)


def test_06_tangential_rows(report):
    t0 = time.perf_counter()
    ladder = [2.0 ** k for k in range(12, 21)]
    row2 = run_scaling("TangentialRow2", ScenarioParams(m=2, q=2, alpha=0.5, s=0), ladder)
    t2 = time.perf_counter() - t0
    row3 = run_scaling("TangentialRow3", ScenarioParams(m=2, kappa=0.25, alpha=1, q=2, s=0), ladder)
    t3 = time.perf_counter() - t0 - t2
    ok = abs(row2.fitted_slope - 0.125) <= 0.03 and abs(row3.fitted_slope - 0.125) <= 0.03
    ok &= t2 < 300 and t3 < 300
    assert report(6, ok, f"Row2 slope {row2.fitted_slope:.4f}, Row3 slope {row3.fitted_slope:.4f} "
                         f"vs 0.125 (tol 0.03)", t0)


def test_07_exp_tangential(report):
    t0 = time.perf_counter()
    rep = run_scaling("ExpTangential", ScenarioParams(m=2, q=2, alpha=1, s=0),
                      [2.0 ** k for k in range(10, 21)])
    # norm_slope fits log(N(lambda) (log lambda)^{alpha/2})
    ok = abs(rep.norm_slope - 0.5) <= 0.05 and rep.fitted_slope > 0
    ok &= time.perf_counter() - t0 < 300
    assert report(7, ok, f"corrected norm slope {rep.norm_slope:.4f} vs 0.5 (tol 0.05); "
                         f"ratio slope {rep.fitted_slope:.4f} (expected 1/4)", t0)


def test_08_alpha_remark(report):
    t0 = time.perf_counter()
    rep = run_scaling("AlphaFractalRemark", ScenarioParams(q=2, alpha=0.75, s=0, r=0.2), range(3, 8))
    want = 0.5 + (BETA5 - 1) / 2
    ok = abs(rep.fitted_slope - want) <= 0.07 and time.perf_counter() - t0 < 600
    assert report(8, ok, f"slope {rep.fitted_slope:.4f} vs {want:.4f} (tol 0.07)", t0)


def test_09_van_der_corput(report):
    t0 = time.perf_counter()
    ladder = 2.0 ** np.arange(6, 19)
    quad = vdc_decay_fit("quadratic", ladder)
    mono = vdc_decay_fit("monotone_linearized", ladder)
    ok = abs(quad.slope + 0.5) <= 0.05 and abs(mono.slope + 1.0) <= 0.05
    ok &= quad.top_decade_spread <= 0.1 and mono.top_decade_spread <= 0.1
    ok &= time.perf_counter() - t0 < 60
    assert report(9, ok, f"quadratic {quad.slope:.5f} (spread {quad.top_decade_spread:.1e}), "
                         f"monotone {mono.slope:.5f} (spread {mono.top_decade_spread:.1e})", t0)


def test_10_kernel_suite(report):
    t0 = time.perf_counter()
    bound_const = psi_sq_integral()
    violations = 0
    herm = 0.0
    n = 0
    for e in range(7):
        lam = 2.0 ** e
        count = 1000 // 7 + (1 if e < 1000 % 7 else 0)
        for s in draw_samples(lam, count, "any", seed=10 + e):
            k = kernel_eval(s)
            violations += abs(k) > lam * bound_const + 1e-9
            herm = max(herm, abs(k - kernel_eval(s.swapped()).conjugate()) / max(1.0, abs(k)))
            n += 1
    rows = kernel_sweep([2.0 ** e for e in range(8, 15)], 32, seed=0)
    consts = constants_by_lambda(rows)
    cmax = max(consts.values())
    spread = (cmax - min(consts.values())) / cmax
    ok = n == 1000 and violations == 0 and herm <= 1e-8 and cmax <= 10 and spread < 0.2
    ok &= time.perf_counter() - t0 < 300
    assert report(10, ok, f"{n} samples, {violations} bound violations, Hermitian gap {herm:.1e}; "
                          f"C max {cmax:.3f}, spread {spread:.1%}", t0)


def test_11_young_hls(report):
    t0 = time.perf_counter()
    rep = young_hls_check(0.5, 2.0, HLS(0.4), trials=100, resolutions=(256, 512, 1024), seed=0)
    maxes = [rep.max_ratio[n] for n in rep.resolutions]
    stable = all(b <= 1.05 * a for a, b in zip(maxes, maxes[1:]))
    one = StepFunction.constant()
    closed = abs(ineq_ratio(one, one, 1.0, 2.0, Young(-1.0, 1.0), 256) - 0.75)
    ok = all(np.isfinite(maxes)) and stable and closed <= 1e-6 and time.perf_counter() - t0 < 300
    detail = ", ".join(f"n={n}: {m:.4f}" for n, m in zip(rep.resolutions, maxes))
    assert report(11, ok, f"HLS max ratio {detail}; constant case error {closed:.1e}", t0)


def test_12_sufficiency_probe(report):
    t0 = time.perf_counter()
    rep = run_scaling("SufficiencyProbe", ScenarioParams(q=4, alpha=1, n_profiles=20, seed=0),
                      [2.0 ** k for k in range(6, 13)])
    ok = rep.fitted_slope <= 0.30 and time.perf_counter() - t0 < 900
    assert report(12, ok, f"max-ratio growth exponent {rep.fitted_slope:.4f} (<= 0.30)", t0)


def test_13_reproducibility(tmp_path, report):
    t0 = time.perf_counter()
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    first = tmp_path / "run.csv"
    base = [sys.executable, "-m", "oscimax"]
    subprocess.run(base + ["--threads", "1", "scaling", "--scenario", "alpha-fractal-remark",
                           "--q", "2", "--alpha", "0.75", "--r", "0.2", "--k-min", "2",
                           "--k-max", "5", "--out", str(first)], check=True, env=env)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"replay{threads}.csv"
        subprocess.run(base + ["--threads", threads, "scaling", "--config",
                               str(first) + ".manifest.json", "--out", str(out)],
                       check=True, env=env)
        outs.append(out.read_bytes())
    ok = all(o == first.read_bytes() for o in outs)
    assert report(13, ok, "scaling replayed from its manifest with --threads 1 and 4: "
                          + ("byte-identical CSV" if ok else "CSV differs"), t0)
