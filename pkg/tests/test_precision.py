from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmrloop.laurent import LaurentPolynomial as L
from mmrloop.laurent import series_of_laurent_at_exp
from mmrloop.precision import PrecisionComplex, PrecisionExhausted, eval_complex

TREFOIL_2 = L({-4: -1, -3: 1, -1: 1})


def test_value_at_one_is_coefficient_sum():
    p = L({-3: 2, 0: Fraction(-1, 3), 4: 7})
    v = eval_complex(p, PrecisionComplex(1))
    with mpmath.workprec(200):
        assert abs(v.value - mpmath.mpf(26) / 3) <= v.radius + mpmath.mpf(2) ** -120


@pytest.mark.parametrize("theta", [0.1, 1.0, 2.5])
def test_euler_identity(theta):
    q0 = PrecisionComplex.exp(1j * mpmath.mpf(theta))
    v = eval_complex(L({1: 1, -1: -1}), q0)
    with mpmath.workprec(200):
        assert v.close_to(2j * mpmath.sin(theta), 1e-30)


def test_against_higher_precision_reference():
    mp = mpmath.mp.clone()
    mp.prec = 200
    z = mp.exp(mp.mpc(0, 0.025))  # the same binary input point
    ref = -z ** -4 + z ** -3 + z ** -1
    v = eval_complex(TREFOIL_2, PrecisionComplex.exp(mpmath.mpc(0, 0.025)))
    with mpmath.workprec(200):
        assert abs(v.value - ref) <= v.radius + mpmath.mpf(2) ** -110
    assert v.radius < 1e-30


def test_radius_grows_by_rounding_only():
    a = PrecisionComplex.exact(mpmath.mpf(1) / 3)
    b = a * a + a
    assert 0 < b.radius < 1e-35


def test_comparison_needs_resolved_radius():
    blurry = PrecisionComplex(1, 1e-3)
    with pytest.raises(PrecisionExhausted):
        blurry.close_to(1, 1e-3)
    assert PrecisionComplex(1, 1e-9).close_to(1.0005, 1e-3)


def test_requested_tolerance_is_enforced():
    q0 = PrecisionComplex(mpmath.mpf("1.1"), 1e-10)
    with pytest.raises(PrecisionExhausted):
        eval_complex(L({40: 1}), q0, tol=1e-12)


def test_reciprocal_of_unresolved_zero():
    with pytest.raises(PrecisionExhausted):
        PrecisionComplex(0, 1e-20).reciprocal()


def test_lower_precision_context():
    v = eval_complex(TREFOIL_2, PrecisionComplex.exp(0.01j, prec=64))
    assert v.prec == 64 and 0 < v.radius < 1e-15


@given(st.dictionaries(st.integers(-3, 3), st.integers(-4, 4), max_size=5).map(L),
       st.floats(-0.01, 0.01))
def test_evaluation_agrees_with_taylor_series(p, h):
    s = series_of_laurent_at_exp(p, 12)
    v = eval_complex(p, PrecisionComplex.exp(mpmath.mpf(h)))
    with mpmath.workprec(200):
        approx = sum(mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator * mpmath.mpf(h) ** i
                     for i, c in enumerate(s.coeffs))
        # the tail after h^12 is below 5 * 4 * 3^13 * 0.01^13 / 13!
        assert abs(v.value - approx) <= v.radius + 1e-25
