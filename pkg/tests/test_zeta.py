import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from sierpinski_triples.zeta import bernoulli, riemann_zeta, riemann_zeta_bound


# [TRIVIAL] known Bernoulli numbers
@pytest.mark.parametrize(
    "n,value",
    [(0, Fraction(1)), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (4, Fraction(-1, 30)),
     (6, Fraction(1, 42)), (8, Fraction(-1, 30)), (10, Fraction(5, 66)), (3, Fraction(0))],
)
def test_bernoulli(n, value):
    assert bernoulli(n) == value


def test_bernoulli_matches_mpmath():
    for n in range(2, 24, 2):
        assert float(bernoulli(n)) == pytest.approx(float(mpmath.bernoulli(n)), rel=1e-15)


# [DERIVED] independent oracle: mpmath at 30 digits
@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1.01, max_value=40.0))
def test_zeta_matches_mpmath(s):
    mpmath.mp.dps = 30
    ref = float(mpmath.zeta(s))
    val, bound = riemann_zeta_bound(s)
    assert abs(val - ref) <= max(bound, 4e-16 * ref)


@pytest.mark.parametrize("s", [1.5849625007211562, 2.0, 3.0, 1.7, 5.0])
def test_certified_bound_is_small(s):
    _val, bound = riemann_zeta_bound(s)
    assert bound < 1e-13


def test_special_values():
    # classical closed forms
    assert riemann_zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert riemann_zeta(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)
    assert riemann_zeta(3) == pytest.approx(1.2020569031595942, rel=1e-15)


def test_domain():
    with pytest.raises(ValueError):
        riemann_zeta(1.0)
    with pytest.raises(ValueError):
        riemann_zeta(0.5)
