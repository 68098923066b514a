"""Special-function layer against mpmath reference values."""

import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hepearcey.specialfn import beta_of_gamma, ln_barnes_g, ln_gamma

mpmath.mp.dps = 30


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=20.0),
    st.floats(min_value=-10.0, max_value=10.0),
)
def test_ln_gamma_matches_mpmath(re, im):
    z = complex(re, im)
    ref = complex(mpmath.loggamma(z))
    got = ln_gamma(z)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=-1.5, max_value=1.5),
)
def test_ln_barnes_g_matches_mpmath(re, im):
    z = complex(re, im)
    ref = complex(mpmath.log(mpmath.barnesg(1 + z)))
    got = ln_barnes_g(1 + z)
    # mpmath returns a fixed log branch; compare modulo 2 pi i
    diff = got - ref
    diff -= 2j * math.pi * round(diff.imag / (2.0 * math.pi))
    assert abs(diff) <= 1e-10 * max(1.0, abs(ref))


def test_barnes_g_at_one_is_one():
    assert abs(ln_barnes_g(1.0)) <= 1e-14


def test_barnes_g_recurrence():
    # G(1 + z) = Gamma(z) G(z)
    for z in (0.7, 1.3, 2.5, 0.5 + 0.4j):
        lhs = ln_barnes_g(1.0 + z)
        rhs = ln_gamma(z) + ln_barnes_g(z)
        diff = lhs - rhs
        diff -= 2j * math.pi * round(diff.imag / (2.0 * math.pi))
        assert abs(diff) <= 1e-11


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1.0 - 1e-9))
def test_beta_is_purely_imaginary(gamma):
    beta = beta_of_gamma(gamma)
    assert beta.real == 0.0
    assert beta.imag == pytest.approx(-math.log(1.0 - gamma) / (2.0 * math.pi))
