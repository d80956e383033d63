import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from oscimax.errors import DegenerateLadder, InvalidExponents, InvalidParams
from oscimax.kernelcheck import (
    HLS,
    KernelSample,
    StepFunction,
    Young,
    classify_region,
    draw_samples,
    ineq_ratio,
    kernel_eval,
    psi,
    psi_sq_integral,
    s_star,
    vdc_decay_fit,
    young_hls_check,
)


def test_psi_sq_integral_against_quad():
    ref = 2 * quad(lambda x: float(psi(x)) ** 2, 0.5, 2.0, epsabs=0, epsrel=1e-13)[0]
    assert psi_sq_integral() == pytest.approx(ref, rel=1e-12)
    assert psi(np.array([0.5, 2.0, 0.0]))[:].tolist() == [0.0, 0.0, 0.0]
    assert psi(1.25) == pytest.approx(1.0)


@pytest.mark.parametrize("lam", [1.0, 2.0 ** 6, 2.0 ** 12])
def test_diagonal_value(lam):
    s = KernelSample(0.3, 0.4, 0.01, 0.3, 0.4, 0.01, lam)
    assert kernel_eval(s) == pytest.approx(lam * psi_sq_integral(), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(-1, 1), x2=st.floats(-1, 1), t=st.floats(0, 1), t2=st.floats(0, 1),
       th=st.floats(0, 0.1), th2=st.floats(0, 0.1), e=st.integers(0, 8))
def test_hermitian_and_bounded(x, x2, t, t2, th, th2, e):
    s = KernelSample(x, t, th, x2, t2, th2, 2.0 ** e)
    k = kernel_eval(s)
    assert abs(k - kernel_eval(s.swapped()).conjugate()) <= 1e-8 * max(1.0, abs(k))
    assert abs(k) <= s.lam * psi_sq_integral() + 1e-9


def test_classify_examples():
    lam, q, alpha = 2.0 ** 10, 4.0, 1.0
    w = lam ** (-q * s_star(q, alpha) / alpha)
    assert classify_region(KernelSample(0.2, 0.5, 0, 0.2, 0.1, 0, lam), q, alpha) == "V1"
    dx = 3 * w
    assert classify_region(KernelSample(0.2, 0.5, 0, 0.2 + dx, 0.5 + dx, 0, lam), q, alpha) == "V2"
    assert classify_region(KernelSample(0.2, 0.5, 0, 0.2 + dx, 0.5, 0, lam), q, alpha) == "V3"
    with pytest.raises(InvalidParams):
        classify_region(KernelSample(0, 0, 0, 0, 0, 0, lam), 1.0, alpha)


@pytest.mark.parametrize("region", ["V1", "V2", "V3", "any"])
def test_draws_land_in_region(region):
    lam = 2.0 ** 9
    tags = {classify_region(s, 4.0, 1.0) for s in draw_samples(lam, 200, region, seed=2)}
    assert tags <= {"V1", "V2", "V3"}
    if region != "any":
        assert tags == {region}


def test_draws_are_scale_invariant():
    a = draw_samples(2.0 ** 8, 20, "V3", seed=1)
    b = draw_samples(2.0 ** 12, 20, "V3", seed=1)
    ga = [abs(s.x - s.x2) * s.lam for s in a]
    gb = [abs(s.x - s.x2) * s.lam for s in b]
    assert np.allclose(ga, gb)


def test_v3_gap_comparable_to_dx():
    for e in (8, 11, 14):
        lam = 2.0 ** e
        width = lam ** -1.0
        for s in draw_samples(lam, 200, "V3", seed=4):
            dx = abs(s.x - s.x2)
            assert abs(s.theta - s.theta2) <= width < dx / 2
            assert dx / 4 <= abs(s.rho_gap) <= 4 * dx


@pytest.mark.parametrize("phase,k", [("quadratic", 2), ("monotone_linearized", 1), ("fractional", 2)])
def test_vdc_slopes(phase, k):
    fit = vdc_decay_fit(phase, 2.0 ** np.arange(6, 19))
    assert fit.slope == pytest.approx(-1 / k, abs=0.05)
    assert np.isfinite(fit.constant)
    assert fit.top_decade_spread < 0.1


def test_vdc_ladder_checks():
    with pytest.raises(DegenerateLadder):
        vdc_decay_fit("quadratic", [10, 20, 30, 40, 50])
    with pytest.raises(InvalidParams):
        vdc_decay_fit("cubic", 2.0 ** np.arange(6, 12))


@pytest.mark.parametrize("n", [4, 64, 256])
def test_young_constant_closed_form(n):
    # g = h = 1: G = H = 2, the kernel covers 3 of the 4 units of [-1, 1]^2,
    # so LHS = 4 * 3 and RHS = (2 * sqrt 2)^2 * 2
    one = StepFunction.constant()
    assert ineq_ratio(one, one, 1.0, 2.0, Young(-1.0, 1.0), n) == pytest.approx(0.75, abs=1e-6)


def test_hls_precondition():
    with pytest.raises(InvalidExponents):
        young_hls_check(0.5, 2.0, HLS(0.6), 1, [16], 0)
    with pytest.raises(InvalidExponents):
        young_hls_check(1.5, 2.0, Young(), 1, [16], 0)


def test_hls_sweep_small():
    rep = young_hls_check(0.5, 2.0, HLS(0.4), trials=10, resolutions=(64, 128), seed=0)
    assert np.all(np.isfinite(rep.ratios[64]))
    assert rep.max_ratio[128] <= 1.05 * rep.max_ratio[64]
    again = young_hls_check(0.5, 2.0, HLS(0.4), trials=10, resolutions=(64,), seed=0)
    assert np.array_equal(again.ratios[64], rep.ratios[64])
