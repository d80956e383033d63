import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscimax.errors import InvalidParams, ToleranceNotReached
from oscimax.propagator import (
    EvalRequest,
    evaluate,
    evaluate_many,
    evaluate_oracle,
    phase_bound,
    quadratic_band_integral,
    triangle_bound,
)
from oscimax.spectral import Linear, NegativeDispersion, band, indicator, make_profile

COS_HALF = math.cos(0.5)
TWO_PI = 2 * math.pi


@pytest.mark.parametrize("m", [1.2, 2.0, 3.5])
def test_unit_mass_at_origin(m):
    req = EvalRequest(indicator(0, TWO_PI), m, 0.0, 0.0)
    assert evaluate(req) == pytest.approx(1.0 + 0j, abs=1e-12)
    assert evaluate_oracle(req, 1 << 16) == pytest.approx(1.0 + 0j, abs=1e-9)


def test_request_validation():
    prof = indicator(0, 1)
    with pytest.raises(InvalidParams):
        EvalRequest(prof, 1.0, 0.0, 0.0)
    with pytest.raises(InvalidParams):
        EvalRequest(prof, 2.0, (0.0, 1.0), 0.0)
    with pytest.raises(InvalidParams):
        evaluate_oracle(EvalRequest(prof, 2.0, 0.0, 0.0), 100)


def test_small_phase_witness():
    lam = 1e4
    prof = indicator(0, lam / 8, phase=NegativeDispersion(2.0))
    req = EvalRequest(prof, 2.0, 0.0, 1.0 - lam ** -2 / 2)
    assert phase_bound(req) <= 0.5
    val = evaluate(req)
    floor = COS_HALF * (lam / 8) / TWO_PI
    assert abs(val) >= floor
    assert abs(evaluate_oracle(req, 1 << 20) - val) <= 1e-6 * triangle_bound(prof)


def test_oracle_self_convergence():
    req = EvalRequest(indicator(0, TWO_PI), 2.0, 0.0, 0.0)
    o = [evaluate_oracle(req, n) for n in (1 << 12, 1 << 13, 1 << 14)]
    # integrand is constant here, so both differences sit at round-off
    assert abs(o[0] - o[1]) <= 4 * abs(o[1] - o[2]) + 1e-14
    req = EvalRequest(indicator(0, TWO_PI, phase=Linear(0.3)), 1.5, 0.7, 0.0)
    o = [evaluate_oracle(req, n) for n in (1 << 10, 1 << 11, 1 << 12)]
    assert abs(o[0] - o[1]) <= 4 * abs(o[1] - o[2])


def test_conjugation_symmetry():
    prof = indicator(-3, 5, 0.7, Linear(0.4))
    neg = indicator(-3, 5, 0.7, Linear(-0.4))
    a = evaluate_oracle(EvalRequest(prof, 1.7, 0.3, 0.2), 1 << 12)
    b = evaluate_oracle(EvalRequest(neg, 1.7, -0.3, -0.2), 1 << 12)
    assert a == pytest.approx(b.conjugate(), abs=1e-13)


def test_phase_bound_trivial():
    assert phase_bound(EvalRequest(indicator(0, 5), 2.0, 0.0, 0.0)) == 0.0


def test_phase_bound_exp_tangential_witness():
    lam = 2.0 ** 16
    x = 0.05
    t = math.exp(-1 / x)
    top = lam ** 0.5 / 100
    req = EvalRequest(indicator(0, top), 2.0, x - 1 / math.log(1 / t), t)
    assert phase_bound(req) == pytest.approx(t * top ** 2, rel=1e-9, abs=1e-15)
    assert phase_bound(req) <= 0.5


def test_phase_bound_interior_critical_point():
    # B xi + t xi^2 on [-10, 10] with B = -4, t = 1: minimum -4 at xi = 2, max 140 at -10
    req = EvalRequest(indicator(-10, 10), 2.0, -4.0, 1.0)
    assert phase_bound(req) == pytest.approx(140.0)
    req = EvalRequest(indicator(0, 3), 2.0, -4.0, 1.0)
    assert phase_bound(req) == pytest.approx(4.0)


def test_t_zero_independent_of_m():
    prof = make_profile(1, [band(-4, -1, 0.3), band(2, 9, 1.1)])
    x = np.linspace(-3, 3, 7)
    ref = evaluate_many(prof, 1.3, x, 0.0, method="panel")
    for m in (2.0, 4.5):
        assert np.allclose(evaluate_many(prof, m, x, 0.0, method="panel"), ref, atol=1e-13)


def test_fresnel_matches_panel():
    prof = make_profile(1, [band(-30, -2, 0.5, NegativeDispersion(2.0)), band(0, 40, 1.0)])
    rng = np.random.default_rng(3)
    x = rng.uniform(-1, 1, 200)
    t = rng.uniform(0, 1, 200)
    a = evaluate_many(prof, 2.0, x, t, method="panel")
    b = evaluate_many(prof, 2.0, x, t, method="fresnel")
    assert np.max(np.abs(a - b)) <= 1e-10 * triangle_bound(prof)


def test_fresnel_shared_edges_many_bands():
    edges = np.linspace(50, 100, 65)
    rng = np.random.default_rng(0)
    prof = make_profile(1, [band(a, b, rng.uniform()) for a, b in zip(edges[:-1], edges[1:])])
    x = rng.uniform(-1, 1, 50)
    t = rng.uniform(0, 0.01, 50)
    a = evaluate_many(prof, 2.0, x, t, method="panel")
    b = evaluate_many(prof, 2.0, x, t, method="fresnel")
    assert np.max(np.abs(a - b)) <= 1e-10 * triangle_bound(prof)


def test_quadratic_band_integral_zero_t():
    B = np.array([0.0, 1.0, -2.5])
    got = quadratic_band_integral(1.0, 3.0, B, np.zeros(3))
    want = [2.0] + [(np.exp(3j * b) - np.exp(1j * b)) / (1j * b) for b in B[1:]]
    assert np.allclose(got, want, atol=1e-13)


def test_2d_against_oracle():
    prof = make_profile(2, [band((0, 0), (6, 6), 1.0, NegativeDispersion(2.0)),
                            band((-5, 1), (-1, 4), 0.4)])
    req = EvalRequest(prof, 1.6, (0.2, -0.1), 0.9)
    assert abs(evaluate(req) - evaluate_oracle(req, 1 << 11)) <= 1e-6 * triangle_bound(prof)


def test_2d_cap():
    prof = indicator((0, 0), (300, 300))
    with pytest.raises(InvalidParams):
        evaluate(EvalRequest(prof, 2.0, (0.0, 0.0), 0.0))


def test_wide_phase_range_is_segmented():
    # |xi|^4 on [0, 31] needs 2.3M uniform panels but far fewer local ones
    req = EvalRequest(indicator(0, 31), 4.0, 0.0, 1.0)
    assert abs(evaluate(req) - evaluate_oracle(req, 1 << 22)) <= 1e-6 * triangle_bound(req.profile)


def test_budget_error():
    prof = indicator(0, 1e5)
    with pytest.raises(ToleranceNotReached):
        evaluate(EvalRequest(prof, 2.0, 0.5, 0.5, max_panels=64))


def test_plancherel_proxy():
    prof = make_profile(1, [band(-20, -12, 0.5), band(1, 3, 1.0)])
    x = np.linspace(-50, 50, (1 << 14) + 1)
    w = np.full(x.size, x[1] - x[0])
    w[[0, -1]] *= 0.5
    mass = [float(np.sum(w * np.abs(evaluate_many(prof, 2.0, x, t)) ** 2)) for t in (0.0, 0.5)]
    assert abs(mass[1] - mass[0]) < 1e-2 * mass[0]


@settings(max_examples=25, deadline=None)
@given(lo=st.floats(-50, 50), width=st.floats(0.5, 50), amp=st.floats(0, 3),
       x=st.floats(-1, 1), t=st.floats(0, 1), m=st.floats(1.1, 2.5))
def test_triangle_bound(lo, width, amp, x, t, m):
    prof = indicator(lo, lo + width, amp)
    val = evaluate(EvalRequest(prof, m, x, t))
    assert abs(val) <= triangle_bound(prof) * (1 + 1e-10) + 1e-300


@settings(max_examples=25, deadline=None)
@given(width=st.floats(0.1, 30), x=st.floats(-1, 1), t=st.floats(0, 0.01), m=st.floats(1.1, 3.0))
def test_small_phase_lower_bound(width, x, t, m):
    prof = indicator(0, width)
    req = EvalRequest(prof, m, x, t)
    if phase_bound(req) <= 0.5:
        assert evaluate(req).real >= COS_HALF * triangle_bound(prof) - 1e-10 * triangle_bound(prof)
