"""Internal consistency of the closed-form expansions."""

import math

import pytest

from hepearcey.asymptotics import (
    counting_mean_expansion,
    gap_log_expansion,
    hamiltonian_expansion,
    oscillation_amplitude,
    phase,
)
from hepearcey.pearcey import ModelParams
from hepearcey.specialfn import beta_of_gamma

PARAMS = ModelParams(0.5, 1.0)


def test_expansion_derivative_is_hamiltonian():
    # F'(s) = H(s): the closed forms must differentiate into each other
    # (up to the oscillatory and O(s^(-4/3)) terms absent from F)
    s, g, h = 500.0, 0.5, 1e-2
    dfds = (
        gap_log_expansion(s + h, g, PARAMS) - gap_log_expansion(s - h, g, PARAMS)
    ) / (2.0 * h)
    h3 = hamiltonian_expansion(s, g, PARAMS, terms=3)
    assert dfds == pytest.approx(h3, abs=5e-6)


def test_phase_growth_rate():
    # psi ~ -(3 sqrt 3 / 4) s^(2/3), so the finite difference of psi
    # approaches -(sqrt 3 / 2) s^(-1/3) per unit s
    s, g, h = 1000.0, 0.5, 1e-3
    dpsi = (phase(s + h, g, PARAMS) - phase(s - h, g, PARAMS)) / (2.0 * h)
    lead = math.sqrt(3.0) / 2.0 * (PARAMS.rho / (3.0 * s ** (2.0 / 3.0)) - s ** (-1.0 / 3.0))
    assert dpsi == pytest.approx(lead, rel=1e-2)


def test_oscillation_amplitude_formula():
    g = 0.5
    beta = beta_of_gamma(g)
    assert oscillation_amplitude(g) == pytest.approx(
        2.0 * abs(beta) / (3.0 * math.sqrt(3.0))
    )


def test_hamiltonian_expansion_term_ordering():
    # successive truncations differ by the size of the dropped term
    s, g = 200.0, 0.5
    h1 = hamiltonian_expansion(s, g, PARAMS, terms=1)
    h2 = hamiltonian_expansion(s, g, PARAMS, terms=2)
    h3 = hamiltonian_expansion(s, g, PARAMS, terms=3)
    assert abs(h2 - h1) > abs(h3 - h2)


def test_counting_mean_alpha_shift():
    # the alpha dependence of the mean is the constant -alpha/3
    s = 100.0
    m0 = counting_mean_expansion(s, ModelParams(0.0, 1.0))
    m1 = counting_mean_expansion(s, ModelParams(1.0, 1.0))
    assert m0 - m1 == pytest.approx(1.0 / 3.0)
