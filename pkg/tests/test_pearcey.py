"""Kernel building blocks: entire solutions, solution matrix, kernel."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hepearcey.pearcey import (
    ModelParams,
    kernel_point,
    p_k,
    pk_initial_values,
    psi_tilde,
)
from hepearcey.specialfn import ln_gamma

alphas = st.floats(min_value=0.05, max_value=3.0)
rhos = st.floats(min_value=-2.0, max_value=2.0)


@settings(max_examples=40, deadline=None)
@given(alphas, rhos)
def test_wronskian_closed_form(alpha, rho):
    p1, p2 = pk_initial_values(ModelParams(alpha, rho))
    w = p1.value * p2.d1 - p1.d1 * p2.value
    ref = -((2.0 * math.pi) ** 1.5) * math.exp(-0.5 * rho * rho)
    ref /= cmath.exp(ln_gamma(alpha)).real
    assert abs(w - ref) <= 1e-9 * abs(ref)


@settings(max_examples=40, deadline=None)
@given(alphas, rhos)
def test_wronskian_derivative_closed_form(alpha, rho):
    p1, p2 = pk_initial_values(ModelParams(alpha, rho))
    wp = p1.value * p2.d2 - p1.d2 * p2.value
    ref = -((2.0 * math.pi) ** 1.5) * rho * math.exp(-0.5 * rho * rho)
    ref /= cmath.exp(ln_gamma(alpha + 1.0)).real
    assert abs(wp - ref) <= 1e-9 * max(abs(ref), 1.0)


def test_series_and_contour_routes_agree():
    # p1 and p2 by power series (inside the disc) vs by loop contour
    from hepearcey.pearcey import p_contour, p_entire

    params = ModelParams(0.5, 1.0)
    for k in (1, 2):
        for z in (2.0, 2.9, -1.5):
            a = p_entire(complex(z), k, params)
            b = p_contour(complex(z), k, params)
            va = a.value * cmath.exp(a.scale_exponent)
            vb = b.value * cmath.exp(b.scale_exponent)
            assert abs(va - vb) <= 1e-9 * max(abs(va), 1.0)


def test_ode_satisfied_by_series_solutions():
    # z p''' + alpha p'' - rho p' - p = 0 via the stored triple and the
    # ODE-derived third derivative
    params = ModelParams(0.8, -0.6)
    for k in (1, 2):
        tr = p_k(1.7, k, params)
        d3 = tr.third_derivative(1.7, params)
        resid = 1.7 * d3 + params.alpha * tr.d2 - params.rho * tr.d1 - tr.value
        assert abs(resid) <= 1e-9 * max(abs(tr.value), 1.0)


@settings(max_examples=25, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=2.0),
    st.floats(min_value=-1.5, max_value=1.5),
    st.floats(min_value=0.05, max_value=50.0),
)
def test_solution_matrix_unimodular(alpha, rho, x):
    mant, expo = psi_tilde(x, ModelParams(alpha, rho)).det()
    val = mant * cmath.exp(expo + alpha * math.log(x))
    assert abs(val - 1.0) <= 1e-8


def test_kernel_diagonal_positive():
    params = ModelParams(0.5, 0.0)
    for x in (0.5, 2.0, 10.0, 25.0):
        assert kernel_point(x, x, 1.0, params) > 0.0


def test_kernel_product_symmetric_under_swap():
    params = ModelParams(0.0, 1.0)
    for x, y in ((1.0, 3.0), (2.5, 17.0), (8.0, 9.0)):
        pxy = kernel_point(x, y, 1.0, params) * kernel_point(y, x, 1.0, params)
        pyx = kernel_point(y, x, 1.0, params) * kernel_point(x, y, 1.0, params)
        assert pxy == pyx


def test_kernel_gamma_scaling():
    # gamma K is linear in gamma
    params = ModelParams(1.0, -0.5)
    k1 = kernel_point(3.0, 7.0, 1.0, params)
    kh = kernel_point(3.0, 7.0, 0.5, params)
    assert kh == pytest.approx(0.5 * k1, rel=1e-12)


def test_kernel_near_diagonal_continuity():
    params = ModelParams(0.5, 0.5)
    base = kernel_point(5.0, 5.0, 1.0, params)
    for eps in (1e-4, 1e-6):
        near = kernel_point(5.0, 5.0 + eps, 1.0, params)
        assert abs(near - base) <= 1e-3 * abs(base) + 1e-12
