"""Closed-form large-s asymptotics for the thinned hard-edge Pearcey gap.

Collects the explicit expansions: the Hamiltonian H(s), the log gap
probability F(s; gamma, rho) up to its constant term, the oscillation
phase psi(s), and the asymptotic counting statistics.  All formulas hold
for thinning 0 < gamma < 1, where

    beta = ln(1 - gamma) / (2 pi i)

is purely imaginary with positive imaginary part.
"""

from __future__ import annotations

import math

from .pearcey import ModelParams
from .specialfn import EULER_GAMMA, beta_of_gamma, ln_barnes_g, ln_gamma


def phase(s: float, gamma: float, params: ModelParams) -> float:
    """The oscillation phase

        psi(s) = alpha pi / 3 + arg Gamma(1 - beta)
                 - beta i (2/3 ln s + ln 9)
                 + (sqrt 3 / 2)(rho s^(1/3) - 3/2 s^(2/3)).
    """
    beta = beta_of_gamma(gamma)
    c = s ** (1.0 / 3.0)
    arg_gamma = ln_gamma(1.0 - beta).imag
    return (
        params.alpha * math.pi / 3.0
        + arg_gamma
        - (beta * 1j).real * (2.0 / 3.0 * math.log(s) + math.log(9.0))
        + math.sqrt(3.0) / 2.0 * (params.rho * c - 1.5 * c * c)
    )


def hamiltonian_expansion(s: float, gamma: float, params: ModelParams, *, terms: int = 4) -> float:
    """H(s) for large s, through the oscillatory 1/s term:

        H(s) = sqrt(3) beta i s^(-1/3) - sqrt(3) rho beta i / (3 s^(2/3))
               - 2 beta^2 / (3 s) - 2 beta i cos(2 psi) / (3 sqrt(3) s)
               + O(s^(-4/3)).

    terms in {1, .., 4} truncates the expansion after that many terms.
    """
    if not 1 <= terms <= 4:
        raise ValueError("terms must be between 1 and 4")
    beta = beta_of_gamma(gamma)
    bi = (beta * 1j).real  # beta i is real
    b2 = (beta * beta).real  # beta^2 is real
    c = s ** (1.0 / 3.0)
    out = math.sqrt(3.0) * bi / c
    if terms >= 2:
        out -= math.sqrt(3.0) * params.rho * bi / (3.0 * c * c)
    if terms >= 3:
        out -= 2.0 * b2 / (3.0 * s)
    if terms >= 4:
        out -= 2.0 * bi * math.cos(2.0 * phase(s, gamma, params)) / (3.0 * math.sqrt(3.0) * s)
    return out


def gap_log_expansion(s: float, gamma: float, params: ModelParams) -> float:
    """F(s; gamma, rho) for large s, including the constant term:

        F = (3 sqrt(3)/2) beta i s^(2/3) - sqrt(3) rho beta i s^(1/3)
            - (2 beta^2 / 3) ln s + ln(G(1+beta) G(1-beta))
            - 2 beta^2 ln 3 - 2 alpha beta pi i / 3 + O(s^(-1/3)),

    with G the Barnes G-function normalized by G(1) = 1."""
    beta = beta_of_gamma(gamma)
    bi = (beta * 1j).real
    b2 = (beta * beta).real
    c = s ** (1.0 / 3.0)
    const = (ln_barnes_g(1.0 + beta) + ln_barnes_g(1.0 - beta)).real
    return (
        1.5 * math.sqrt(3.0) * bi * c * c
        - math.sqrt(3.0) * params.rho * bi * c
        - 2.0 * b2 / 3.0 * math.log(s)
        + const
        - 2.0 * b2 * math.log(3.0)
        - 2.0 * params.alpha * bi * math.pi / 3.0
    )


def oscillation_amplitude(gamma: float) -> float:
    """Amplitude 2 |beta| / (3 sqrt 3) of the cosine term in s H(s)."""
    return 2.0 * abs(beta_of_gamma(gamma)) / (3.0 * math.sqrt(3.0))


def counting_mu(s: float, params: ModelParams) -> float:
    """mu(s) = (3 sqrt 3 / (4 pi)) s^(2/3) - (sqrt 3 rho / (4 pi)) s^(1/3)."""
    c = s ** (1.0 / 3.0)
    return (3.0 * math.sqrt(3.0) * c * c - math.sqrt(3.0) * params.rho * c) / (4.0 * math.pi)


def counting_mean_expansion(s: float, params: ModelParams) -> float:
    """E N(s) = mu(s) - alpha / 3 + o(1)."""
    return counting_mu(s, params) - params.alpha / 3.0


def counting_variance_expansion(s: float, params: ModelParams) -> float:
    """Var N(s) = ln s / (3 pi^2) + (1 + ln 9 + gamma_E) / (2 pi^2) + o(1)."""
    return math.log(s) / (3.0 * math.pi**2) + (
        1.0 + math.log(9.0) + EULER_GAMMA
    ) / (2.0 * math.pi**2)


def fluctuation_bound_coefficient() -> float:
    """Coefficient 2 / (3 pi) in the maximum-fluctuation bound
    |N(s) - mu(s)| <= (2/(3 pi) + eps) ln s."""
    return 2.0 / (3.0 * math.pi)
