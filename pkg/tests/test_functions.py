import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from specbounds.errors import HypothesisViolation, ParameterRangeError
from specbounds.functions import (FunctionSpec, adaptive_simpson, check_derivative_concave,
                                  check_hypotheses, concavity_transform,
                                  concavity_transform_check, make_family, parse_family)


def test_family_examples():
    f = make_family("exp", t=1.0)
    assert float(f(0.0)) == 1.0 and float(f.d1(0.0)) == -1.0
    m = make_family("moment", z=1.0, p=2.0, q=1.0)
    # q - p + (p - q) = 0: lambda = z is the minimum of the moment family
    assert float(m(1.0)) == pytest.approx(0.0) and float(m.d1(1.0)) == pytest.approx(0.0)
    g = make_family("log", z=1.0, p=1.0)
    assert float(g(1.0)) == pytest.approx(0.0, abs=1e-15)
    assert float(g.d1(1.0)) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("descriptor", ["exp:t=0.3", "power:z=2,p=2.5", "moment:z=3,p=1.5,q=0.5",
                                        "log:z=2,p=1", "quad:a=1,b=-4,c=4"])
def test_derivatives_agree_with_finite_differences(descriptor):
    f = parse_family(descriptor)
    f.self_check(points=128, seed=7)


def test_wrong_derivative_rejected():
    with pytest.raises(ValueError, match="disagrees"):
        FunctionSpec(np.sin, np.sin, domain=(0.0, 3.0))


def test_family_parameter_errors():
    with pytest.raises(ParameterRangeError):
        make_family("power", z=1.0, p=1.5)
    with pytest.raises(ParameterRangeError):
        make_family("moment", z=1.0, p=2.5, q=1.0)
    with pytest.raises(ParameterRangeError):
        make_family("exp", t=1.0, z=2.0)
    with pytest.raises(ParameterRangeError):
        parse_family("nope:t=1")
    with pytest.raises(ParameterRangeError):
        parse_family("exp:t")


def test_square_with_a_equal_z_passes_all():
    z = 4.0
    f = make_family("quad", a=1.0, b=-2 * z, c=z * z)
    rep = check_hypotheses(f, (0.0, 3.0), a=z)
    assert rep.h1 and rep.h2 and rep.h3 and rep.h4 and rep.h4_prime


def test_exp_passes_h1_to_h3_with_direct_third_derivative():
    rep = check_hypotheses(make_family("exp", t=1.0), (0.0, 5.0), a=7.0)
    assert rep.h1 and rep.h2 and rep.h3 and rep.h3_direct


def test_increasing_linear_fails_h2_with_witness():
    f = make_family("quad", a=0.0, b=1.0, c=0.0)
    rep = check_hypotheses(f, (0.0, 1.0), a=2.0)
    assert rep.h1 and not rep.h2
    assert rep.h2.witness is not None
    with pytest.raises(HypothesisViolation, match="H2"):
        rep.require()


def test_shift_point_must_exceed_hull():
    with pytest.raises(ParameterRangeError):
        check_hypotheses(make_family("exp", t=1.0), (0.0, 1.0), a=1.0)


def test_cubic_fails_h3():
    cube = FunctionSpec(lambda x: x**3, lambda x: 3 * x**2, lambda x: 6 * x, lambda x: 6 + 0 * x)
    with pytest.raises(HypothesisViolation) as info:
        check_derivative_concave(cube, -1.0, 1.0)
    assert info.value.item == "H3" and len(info.value.witness) == 3


def test_domain_coverage():
    f = make_family("power", z=2.0, p=2.0)
    with pytest.raises(ParameterRangeError):
        check_hypotheses(f, (0.0, 3.0), a=4.0)


@given(st.floats(min_value=0.01, max_value=20.0), st.floats(min_value=0.05, max_value=2.0))
def test_exp_family_properties(x, t):
    f = make_family("exp", t=t)
    assert float(f(x)) > 0 and float(f.d1(x)) < 0 and float(f.d3(x)) < 0


def test_shift_and_rescale():
    f = make_family("exp", t=1.0)
    g = f.shifted(2.0)
    assert float(g(3.0)) == pytest.approx(float(f(1.0)))
    h = f.rescaled(2.0)
    assert float(h.d1(1.0)) == pytest.approx(2 * float(f.d1(2.0)))


def test_adaptive_simpson_against_closed_forms():
    assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-10)
    assert adaptive_simpson(math.sqrt, 0.0, 1.0) == pytest.approx(2 / 3, rel=1e-9)


def test_concavity_transform_examples():
    x = np.linspace(0.1, 1.0, 10)
    const = FunctionSpec(lambda s: 2.0 + 0 * s, lambda s: 0 * s, domain=(0.0, 1.0))
    assert np.allclose(concavity_transform(const, x), -2.0 * x, atol=1e-12)
    neg = FunctionSpec(lambda s: -s, lambda s: -1.0 + 0 * s, domain=(0.0, 1.0))
    assert np.allclose(concavity_transform(neg, x), 0.0, atol=1e-12)
    root = FunctionSpec(np.sqrt, lambda s: 0.5 / np.sqrt(s), domain=(0.0, 1.0), check=False)
    assert np.allclose(concavity_transform(root, x), -(x**1.5) / 3, rtol=1e-8)
    assert concavity_transform_check(root, 1.0).passed
