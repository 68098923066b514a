"""Scalar special functions used throughout the package.

Provides the log-gamma function, the logarithm of the Barnes G function,
the Riemann zeta values and Euler's constant needed by the large-gap
constant, and the map from the thinning parameter gamma to the exponent
beta that controls all asymptotic formulas.

Everything here is deterministic and cheap; the zeta values and Euler's
constant are generated once at import time by Euler-Maclaurin summation
rather than being read from tables.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.special


@dataclass(frozen=True)
class PrecisionConfig:
    """Tolerances shared by the series evaluations in this module.

    series_tolerance is a relative stopping threshold and must lie in
    (0, 1e-6]; max_terms caps every power series defensively.
    """

    series_tolerance: float = 1e-16
    max_terms: int = 512

    def __post_init__(self) -> None:
        if not (0.0 < self.series_tolerance <= 1e-6):
            raise ValueError("series_tolerance must lie in (0, 1e-6]")
        if self.max_terms < 8:
            raise ValueError("max_terms too small")


DEFAULT_PRECISION = PrecisionConfig()


def _zeta_euler_maclaurin(k: int, cutoff: int = 64) -> float:
    # Euler-Maclaurin tail after an explicit partial sum.  For k >= 2 and
    # cutoff 64 the first three Bernoulli corrections leave an error far
    # below double rounding.
    partial = sum(n ** (-float(k)) for n in range(1, cutoff + 1))
    n = float(cutoff)
    tail = n ** (1.0 - k) / (k - 1.0) - 0.5 * n ** (-float(k))
    tail += (k / 12.0) * n ** (-(k + 1.0))
    tail -= (k * (k + 1) * (k + 2) / 720.0) * n ** (-(k + 3.0))
    tail += (k * (k + 1) * (k + 2) * (k + 3) * (k + 4) / 30240.0) * n ** (-(k + 5.0))
    return partial + tail


def _euler_constant(cutoff: int = 10_000) -> float:
    partial = sum(1.0 / n for n in range(1, cutoff + 1))
    n = float(cutoff)
    return partial - math.log(n) - 0.5 / n + 1.0 / (12.0 * n * n) - 1.0 / (120.0 * n ** 4)


_ZETA_MAX = 80
ZETA = {k: _zeta_euler_maclaurin(k) for k in range(2, _ZETA_MAX + 1)}
EULER_GAMMA = _euler_constant()


def ln_gamma(z: complex) -> complex:
    """Principal branch of ln Gamma(z).

    Raises ValueError on the poles (real nonpositive integers).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise ValueError(f"ln_gamma pole at z = {z}")
    return complex(scipy.special.loggamma(z))


def ln_barnes_g(one_plus_z: complex, config: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """ln G(1 + z) for the Barnes G function with G(1) = 1.

    The real part of the argument is first shifted into [-1/2, 1/2) with
    the recurrence G(1+z) = Gamma(z) G(z).  Inside the disc |z| < 0.95 the
    Taylor series

        ln G(1+z) = (ln(2 pi) - 1) z/2 - (1 + gamma_E) z^2/2
                    + sum_{k>=3} (-1)^(k-1) zeta(k-1) z^k / k

    is summed; outside it (large imaginary part) Alexeiewsky's theorem
    reduces ln G to a line integral of ln Gamma, evaluated by
    Gauss-Legendre quadrature.  Raises ValueError at the zeros of G
    (arguments 0, -1, -2, ...).
    """
    w = complex(one_plus_z)
    if w.imag == 0.0 and w.real <= 0.0 and w.real == round(w.real):
        raise ValueError(f"Barnes G vanishes at argument {w}")

    shift = 0.0 + 0.0j
    z = w - 1.0
    while z.real >= 0.5:
        # G(1+z) = Gamma(z) G(z)
        shift += ln_gamma(z)
        z -= 1.0
    while z.real < -0.5:
        # G(1+z) = G(2+z) / Gamma(1+z)
        shift -= ln_gamma(z + 1.0)
        z += 1.0

    # the zeta table reaches k = 80, so the series only closes to machine
    # precision for |z| <= 0.6 (0.6^80 ~ 2e-18); larger arguments take the
    # integral route
    if abs(z) >= 0.6:
        return shift + _ln_barnes_g_integral(z)

    total = 0.5 * (math.log(2.0 * math.pi) - 1.0) * z - 0.5 * (1.0 + EULER_GAMMA) * z * z
    term = z * z
    for k in range(3, config.max_terms):
        term *= z
        if k - 1 > _ZETA_MAX:
            raise ValueError("ln_barnes_g series needs more zeta values than precomputed")
        contrib = ((-1.0) ** (k - 1)) * ZETA[k - 1] * term / k
        total += contrib
        if abs(contrib) < config.series_tolerance * (abs(total) + 1e-300):
            break
    else:
        raise ValueError("ln_barnes_g series did not converge")
    return shift + total


def _ln_barnes_g_integral(z: complex) -> complex:
    """ln G(1+z) via Alexeiewsky's theorem,

        ln G(1+z) = z(1-z)/2 + (z/2) ln(2 pi) + z ln Gamma(z)
                    - integral_0^z ln Gamma(t) dt,

    with the integral taken along the straight segment from 0 to z.  The
    endpoint singularity is removed by writing
    ln Gamma(t) = ln Gamma(1+t) - ln t and integrating ln t in closed
    form.  Used for Re z in [-1/2, 1/2) away from the Taylor disc, where
    the segment stays clear of the poles of ln Gamma(1+t).
    """
    nodes, weights = np.polynomial.legendre.leggauss(96)
    # map [-1, 1] onto the segment [0, z]
    t = 0.5 * z * (nodes + 1.0)
    vals = scipy.special.loggamma(t + 1.0)
    integral = 0.5 * z * np.sum(weights * vals)
    integral -= z * cmath.log(z) - z
    return z * (1.0 - z) / 2.0 + 0.5 * z * math.log(2.0 * math.pi) + z * ln_gamma(z) - integral


def beta_of_gamma(gamma: float) -> complex:
    """beta = ln(1 - gamma) / (2 pi i), purely imaginary with Im beta > 0.

    Defined for thinning parameters 0 < gamma < 1.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError("beta_of_gamma requires 0 < gamma < 1")
    return cmath.log(1.0 - gamma) / (2.0j * math.pi)
