import math

import numpy as np
import pytest
from scipy.special import airy as scipy_airy

from lisdist.airy import AI_ZERO, airy
from lisdist.errors import DomainError


def test_value_at_zero():
    # 3^(-2/3)/Gamma(2/3)
    assert airy(0.0).ai == pytest.approx(0.3550280538878172, rel=1e-14)
    assert AI_ZERO == pytest.approx(0.3550280538878172, rel=1e-14)


def test_positive_and_decreasing_on_right_axis():
    xs = np.linspace(0.0, 20.0, 81)
    vals = [airy(float(x)).ai for x in xs]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_right_tail_ratio():
    # Ai(x) ~ e^{-(2/3) x^(3/2)} / (2 sqrt(pi) x^(1/4)) at x = 10, within 1%
    x = 10.0
    lead = math.exp(-(2.0 / 3.0) * x ** 1.5) / (2.0 * math.sqrt(math.pi) * x ** 0.25)
    assert airy(x).ai / lead == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("x", np.concatenate([np.linspace(-15, 20, 141),
                                              [-8.01, -7.99, 7.99, 8.01]]))
def test_against_scipy(x):
    a = airy(float(x))
    ra, rap, _, _ = scipy_airy(x)
    for ours, ref in ((a.ai, ra), (a.ai_prime, rap)):
        ok_rel = abs(ours - ref) <= 1e-10 * abs(ref)
        ok_abs = abs(ours - ref) <= 1e-14
        assert ok_rel or ok_abs


def test_near_zero_absolute_accuracy():
    # first zeros on the negative axis; absolute error must stay ~1e-14
    from scipy.optimize import brentq
    for lo, hi in [(-2.4, -2.3), (-4.1, -4.0), (-7.95, -7.9)]:
        z = brentq(lambda t: scipy_airy(t)[0], lo, hi)
        assert abs(airy(z).ai) < 1e-14


def test_ode_residual():
    # Ai'' = x Ai via central differences of our own values
    h = 1e-3
    for x in (-6.0, -1.3, 0.0, 2.2, 7.5):
        d2 = (airy(x + h).ai - 2 * airy(x).ai + airy(x - h).ai) / h**2
        assert d2 == pytest.approx(x * airy(x).ai, abs=5e-6)


def test_seam_continuity():
    # both branch implementations evaluated at the same seam points
    from lisdist.airy import _asym_left, _asym_right, _maclaurin
    for x0, asym in ((-8.0, _asym_left), (8.0, _asym_right)):
        ai_m, aip_m = _maclaurin(x0)
        ai_a, aip_a = asym(x0)
        assert ai_m == pytest.approx(ai_a, rel=1e-10, abs=1e-13)
        assert aip_m == pytest.approx(aip_a, rel=1e-10, abs=1e-13)


def test_domain_errors():
    with pytest.raises(DomainError):
        airy(-15.001)
    with pytest.raises(DomainError):
        airy(20.5)
