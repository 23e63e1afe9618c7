import math

import pytest
from hypothesis import given, strategies as st

from specbounds.core import Spectrum
from specbounds.errors import ParameterRangeError
from specbounds.functions import FunctionSpec, make_family
from specbounds.models import box_spectrum, unit_ball_volume
from specbounds.weyl import (WeylContext, abel_identity, abel_residual, bly_diagnostic,
                             check_abel_identity, counting_asymptote, exact_count,
                             weyl_constant, weyl_estimate)

PI2 = math.pi**2


def test_weyl_constants():
    assert weyl_constant(1) == pytest.approx(PI2, rel=1e-15)
    assert weyl_constant(2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_weyl_examples():
    ctx1 = WeylContext.standard(1, 1.0)
    for n in (1, 7, 30):
        assert weyl_estimate(n, ctx1) == pytest.approx(n * n * PI2, rel=1e-14)
    assert counting_asymptote(100 * PI2, ctx1) == pytest.approx(10.0, rel=1e-14)
    ctx2 = WeylContext.standard(2, 1.0)
    assert weyl_estimate(1, ctx2) == pytest.approx(4 * math.pi)


def test_counting_inverse_of_estimate():
    for d in (1, 2, 3):
        ctx = WeylContext.standard(d, 2.5)
        for n in (3, 100, 5000):
            assert counting_asymptote(weyl_estimate(n, ctx), ctx) == pytest.approx(n, rel=1e-12)


def test_context_validation():
    with pytest.raises(ValueError):
        WeylContext(1, 1.0, -1.0)
    with pytest.raises(ParameterRangeError):
        WeylContext.from_spectrum(Spectrum([1.0, 2.0]))


def test_exact_count_refuses_beyond_truncation():
    s = box_spectrum([1.0], 10)
    assert exact_count(s, 4 * PI2) == 2
    with pytest.raises(ParameterRangeError):
        exact_count(s, 200 * PI2)
    assert exact_count(Spectrum([1.0, 2.0], label="fd-x"), 10.0) == 2


@pytest.mark.parametrize("sides, tol", [((1.0,), 1e-3), ((1.0, 1.0), 5e-2)])
def test_counting_ratio_at_ten_thousand(sides, tol):
    s = box_spectrum(sides, 12000)
    ctx = WeylContext.from_spectrum(s)
    lam = float(s.values[10000])
    assert exact_count(s, lam) >= 10000
    assert abs(counting_asymptote(lam, ctx) / exact_count(s, lam) - 1) < tol


def test_abel_identity_example():
    s = box_spectrum([1.0], 500)
    lhs, rhs = abel_identity(s, make_family("exp", t=0.001), 400 * PI2)
    assert lhs == pytest.approx(rhs, rel=1e-9)


@given(st.lists(st.floats(min_value=-5, max_value=20), min_size=1, max_size=25),
       st.floats(min_value=-1, max_value=1), st.floats(min_value=-3, max_value=3),
       st.floats(min_value=0.0, max_value=5.0))
def test_abel_identity_random(vals, a, b, extra):
    s = Spectrum(sorted(vals), label="fd-random")
    f = make_family("quad", a=a, b=b, c=1.0)
    assert check_abel_identity(s, f, float(s.values[-1]) + extra).passed


def test_abel_residual_constant_function():
    s = box_spectrum([1.0], 100)
    const = FunctionSpec(lambda x: 3.0 + 0 * x, lambda x: 0 * x, domain=(0.0, math.inf))
    assert abel_residual(s, const, 50 * PI2, WeylContext.from_spectrum(s)) == 0.0


@pytest.mark.parametrize("sides", [(1.0,), (1.0, 1.0)])
def test_abel_residual_trend(sides):
    s = box_spectrum(sides, 60000)
    ctx = WeylContext.from_spectrum(s)
    cuts = [1e4, 4e4, 16e4]
    vals = [abs(abel_residual(s, make_family("exp", t=1.0 / cut), cut, ctx)) for cut in cuts]
    assert vals[1] <= vals[0] / 1.4 and vals[2] <= vals[1] / 1.4


def test_bly_diagnostic_runs():
    s = box_spectrum([1.0, 1.0], 50)
    rep = bly_diagnostic(s, 50, WeylContext.from_spectrum(s))
    assert rep.passed
