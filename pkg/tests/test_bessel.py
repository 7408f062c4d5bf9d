import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ive

from lisdist.bessel import bessel_i, bessel_i_mp, bessel_moment
from lisdist.errors import DomainError


def test_order_zero_at_origin():
    assert bessel_i(0, 0.0) == 1.0


def test_positive_order_at_origin():
    assert bessel_i(3, 0.0) == 0.0


def test_i0_of_two():
    # frozen from the series sum_{m} 1/(m!)^2 at 30 digits
    assert bessel_i(0, 2.0) == pytest.approx(2.2795853023360673, rel=1e-15)


def test_symmetry_in_order():
    for j in (1, 3, 10, 57):
        assert bessel_i(j, 3.7) == bessel_i(-j, 3.7)


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        bessel_i(0, -1.0)


@pytest.mark.parametrize("j", [0, 1, 2, 5, 17, 60, 200, 801])
@pytest.mark.parametrize("z", [1e-3, 0.5, 2.0, 14.0, 80.0, 200.0])
def test_against_scipy(j, z):
    ours = bessel_i(j, z)
    ref = float(ive(j, z)) * math.exp(z)
    if ref == 0.0 or ours == 0.0:
        assert abs(ours - ref) < 1e-290
    else:
        assert ours == pytest.approx(ref, rel=1e-13)


def test_mp_matches_float():
    import mpmath as mp
    with mp.workdps(40):
        for j, z in [(0, 2.0), (4, 11.0), (30, 90.0)]:
            assert float(bessel_i_mp(j, z)) == pytest.approx(bessel_i(j, z), rel=1e-14)


def test_moment_record():
    m = bessel_moment(-2, 5.0)
    assert m.order == -2 and m.argument == 5.0 and m.value == bessel_i(2, 5.0)


@settings(max_examples=60, deadline=None)
@given(j=st.integers(min_value=-40, max_value=40),
       z=st.floats(min_value=0.0, max_value=150.0))
def test_nonnegative_and_symmetric(j, z):
    v = bessel_i(j, z)
    assert v >= 0.0
    assert v == bessel_i(-j, z)
