import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscimax.errors import EmptyProfile, InvalidParams, InvertedInterval, OverlappingBands
from oscimax.spectral import (
    Linear,
    NegativeDispersion,
    band,
    indicator,
    make_profile,
    profile_from_json,
    sobolev_norm,
)


def test_single_unit_band():
    prof = make_profile(1, [band(0, 1)])
    assert prof.dimension == 1
    assert prof.mass == 1.0


def test_overlap_rejected():
    with pytest.raises(OverlappingBands):
        make_profile(1, [band(0, 1), band(0.5, 2)])


def test_touching_bands_allowed():
    prof = make_profile(1, [band(0, 1), band(1, 2, 0.5)])
    assert prof.mass == pytest.approx(1.5)


def test_square_with_dispersion_twist():
    prof = make_profile(2, [band((0, 0), (10, 10), 1.0, NegativeDispersion(2.0))])
    assert prof.mass == pytest.approx(100.0)
    assert prof.max_frequency == pytest.approx(math.hypot(10, 10))


def test_contract_errors():
    with pytest.raises(EmptyProfile):
        make_profile(1, [])
    with pytest.raises(InvertedInterval):
        make_profile(1, [band(2, 1)])
    with pytest.raises(InvalidParams):
        make_profile(3, [band(0, 1)])
    with pytest.raises(InvalidParams):
        NegativeDispersion(1.0)


def test_overlap_2d():
    with pytest.raises(OverlappingBands):
        make_profile(2, [band((0, 0), (2, 2)), band((1, 1), (3, 3))])
    # sharing an edge is fine
    make_profile(2, [band((0, 0), (1, 1)), band((1, 0), (2, 1))])


def test_json_round_trip():
    text = ('{"dimension":1,"bands":[{"lo":0.0,"hi":100.0,"amplitude":1.0,'
            '"phase":{"kind":"negative_dispersion","m":2.0}}]}')
    prof = profile_from_json(text)
    assert prof.bands[0].phase == NegativeDispersion(2.0)
    assert profile_from_json(prof.to_json()) == prof


@pytest.mark.parametrize("lam", [1.0, 10.0, 1e4])
def test_l2_norm_closed_form(lam):
    got = sobolev_norm(indicator(0, lam), 0.0)
    assert got == pytest.approx((2 * math.pi) ** -0.5 * math.sqrt(lam), rel=1e-10)


def test_zero_amplitude():
    assert sobolev_norm(indicator(0, 1, amplitude=0.0), 1.0) == 0.0


def test_sobolev_against_riemann_sum():
    n = 1 << 20
    xi = (np.arange(n) + 0.5) * (100.0 / n)
    ref = math.sqrt(np.sum((1 + xi * xi) ** 0.25) * (100.0 / n) / (2 * math.pi))
    assert sobolev_norm(indicator(0, 100), 0.25) == pytest.approx(ref, rel=1e-8)


def test_twist_does_not_change_norm():
    base = indicator(3, 40)
    for tw in (NegativeDispersion(1.5), Linear(2.0)):
        assert sobolev_norm(base.with_phase(tw), 0.7) == pytest.approx(sobolev_norm(base, 0.7), rel=1e-14)


def test_2d_norm():
    prof = indicator((0, 0), (2, 3))
    assert sobolev_norm(prof, 0.0) == pytest.approx(math.sqrt(6.0) / (2 * math.pi), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(lo=st.floats(-50, 50), width=st.floats(0.1, 50), s1=st.floats(-1, 1), ds=st.floats(0, 1),
       a=st.one_of(st.just(0.0), st.floats(1e-3, 10)))
def test_norm_monotone_in_s_and_homogeneous(lo, width, s1, ds, a):
    prof = indicator(lo, lo + width)
    n1 = sobolev_norm(prof, s1)
    assert sobolev_norm(prof, s1 + ds) >= n1 * (1 - 1e-12)
    assert sobolev_norm(prof.scaled(a), s1) == pytest.approx(a * n1, rel=1e-12)
