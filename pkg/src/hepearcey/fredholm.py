"""Fredholm determinants of the thinned hard-edge Pearcey operator.

The operator K_{s} acts on L^2(0, s) with kernel gamma K(x, y).  The gap
probability of the thinned process is det(I - gamma K_s) and

    F(s; gamma, rho) = ln det(I - gamma K_s)

is computed here with a Nystrom discretization.  The substitution
x = s u^2 on a Gauss-Legendre grid in u absorbs the x^alpha density
profile at the hard edge; the resulting m x m matrix is symmetrically
weighted so that the determinant is that of I - sqrt(W) A sqrt(W).

Since gamma enters the kernel only as an overall factor, the discretized
kernel is built once per (s, m, alpha, rho) and reused for every gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pearcey import (
    DEFAULT_PRECISION,
    KernelVectors,
    ModelParams,
    NumericalInstabilityError,
    kernel_vectors,
)

# largest tolerable |Im K| relative to max |Re K|: pure roundoff from
# the complex column recombination (worst at nearly coincident tiny
# nodes, where f.h cancels); 1e-8 contaminates log det well below the
# quadrature error while still catching genuine branch or contour bugs
_IMAG_RESIDUE_TOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Nystrom grid: m Gauss-Legendre nodes in u on (0, 1), mapped to
    x = s u^2."""

    m: int = 160

    def __post_init__(self) -> None:
        if self.m < 8:
            raise ValueError("grid needs at least 8 nodes")


def _gauss_legendre_01(m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


class DiscretizedOperator:
    """Kernel matrix of K_{s} (at gamma = 1) on the Nystrom grid.

    Attributes
    ----------
    s : float
        Right endpoint of the spectral interval (0, s).
    nodes, weights : ndarray
        Quadrature nodes x_i in (0, s) and weights for dx integration.
    kmat : ndarray
        K(x_i, x_j) at gamma = 1, real m x m matrix.
    """

    def __init__(self, s: float, params: ModelParams, grid: GridSpec):
        if not s > 0.0:
            raise ValueError("s must be positive")
        self.s = float(s)
        self.params = params
        self.grid = grid
        u, wu = _gauss_legendre_01(grid.m)
        self.nodes = s * u * u
        self.weights = 2.0 * s * u * wu

        vecs = [kernel_vectors(x, 1.0, params) for x in self.nodes]
        self._vecs = vecs
        self.kmat = self._assemble(vecs)

    def _assemble(self, vecs: list[KernelVectors]) -> np.ndarray:
        m = len(vecs)
        F = np.stack([v.f for v in vecs])  # (m, 3)
        H = np.stack([v.h for v in vecs])
        fe = np.array([v.f_exponent for v in vecs])
        he = np.array([v.h_exponent for v in vecs])
        num = (F @ H.T) * np.exp(fe[:, None] + he[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            kmat = num / (self.nodes[:, None] - self.nodes[None, :])
        for i, v in enumerate(vecs):
            kmat[i, i] = complex(np.dot(v.f_prime, v.h)) * math.exp(
                v.f_exponent + v.h_exponent
            )
        scale = float(np.max(np.abs(kmat.real)))
        if not np.isfinite(scale):
            raise NumericalInstabilityError("kernel matrix overflowed")
        if float(np.max(np.abs(kmat.imag))) > _IMAG_RESIDUE_TOL * scale:
            raise NumericalInstabilityError(
                "kernel matrix imaginary residue exceeds tolerance; "
                "the configuration needs extended precision"
            )
        return np.ascontiguousarray(kmat.real)

    def log_det(self, gamma: float) -> float:
        """F(s; gamma) = ln det(I - gamma K_s) on this grid."""
        if not (0.0 < gamma <= 1.0):
            raise ValueError("gamma must lie in (0, 1]")
        sq = np.sqrt(self.weights)
        mat = np.eye(self.grid.m) - gamma * sq[:, None] * self.kmat * sq[None, :]
        sign, logdet = np.linalg.slogdet(mat)
        if sign <= 0.0:
            raise NumericalInstabilityError(
                f"nonpositive Fredholm determinant at s={self.s}, gamma={gamma}"
            )
        return float(logdet)

    def resolvent_corner(self, gamma: float) -> float:
        """R(s, s) for the resolvent R = gamma K (I - gamma K)^(-1),
        evaluated at the right endpoint by Nystrom extension."""
        if not (0.0 < gamma <= 1.0):
            raise ValueError("gamma must lie in (0, 1]")
        end = kernel_vectors(self.s, 1.0, self.params)
        F = np.stack([v.f for v in self._vecs])
        H = np.stack([v.h for v in self._vecs])
        fe = np.array([v.f_exponent for v in self._vecs])
        he = np.array([v.h_exponent for v in self._vecs])
        # gamma K(s, x_j) and gamma K(x_i, s)
        k_left = gamma * (H @ end.f) * np.exp(end.f_exponent + he) / (self.s - self.nodes)
        k_right = gamma * (F @ end.h) * np.exp(fe + end.h_exponent) / (self.nodes - self.s)
        k_corner = gamma * complex(np.dot(end.f_prime, end.h)) * math.exp(
            end.f_exponent + end.h_exponent
        )
        a = gamma * self.kmat * self.weights[None, :]
        r = np.linalg.solve(np.eye(self.grid.m) - a, k_right.real)
        value = k_corner.real + float(np.dot(k_left.real * self.weights, r))
        residue = max(abs(k_corner.imag), float(np.max(np.abs(k_left.imag))))
        if residue > _IMAG_RESIDUE_TOL * max(1.0, abs(value)):
            raise NumericalInstabilityError("resolvent imaginary residue too large")
        return value


@lru_cache(maxsize=64)
def _operator_cached(s: float, alpha: float, rho: float, m: int) -> DiscretizedOperator:
    return DiscretizedOperator(s, ModelParams(alpha, rho), GridSpec(m))


def discretize(s: float, params: ModelParams, grid: GridSpec | None = None) -> DiscretizedOperator:
    """Cached Nystrom discretization of K_{s}."""
    grid = grid or GridSpec()
    return _operator_cached(float(s), params.alpha, params.rho, grid.m)


def gap_log_probability(
    s: float, gamma: float, params: ModelParams, grid: GridSpec | None = None
) -> float:
    """F(s; gamma, rho) = ln det(I - gamma K_s)."""
    return discretize(s, params, grid).log_det(gamma)


def resolvent_at_endpoint(
    s: float, gamma: float, params: ModelParams, grid: GridSpec | None = None
) -> float:
    """R(s, s); note dF/ds = -R(s, s)."""
    return discretize(s, params, grid).resolvent_corner(gamma)


def counting_mean(s: float, params: ModelParams, grid: GridSpec | None = None) -> float:
    """E N(s) = trace of K_s = integral of K(x, x) over (0, s)."""
    op = discretize(s, params, grid)
    return float(np.dot(op.weights, np.diag(op.kmat)))


def counting_variance(s: float, params: ModelParams, grid: GridSpec | None = None) -> float:
    """Var N(s) = tr K_s - tr K_s^2 for a determinantal process."""
    op = discretize(s, params, grid)
    w = op.weights
    tr = float(np.dot(w, np.diag(op.kmat)))
    tr2 = float(np.einsum("i,ij,j,ji->", w, op.kmat, w, op.kmat))
    return tr - tr2


def counting_mgf(
    s: float, nu: float, params: ModelParams, grid: GridSpec | None = None
) -> float:
    """E exp(-2 pi nu N(s)) = det(I - (1 - e^(-2 pi nu)) K_s), nu > 0."""
    if not nu > 0.0:
        raise ValueError("nu must be positive")
    gamma = 1.0 - math.exp(-2.0 * math.pi * nu)
    return math.exp(gap_log_probability(s, gamma, params, grid))


def convergence_pair(
    s: float, gamma: float, params: ModelParams, m: int
) -> tuple[float, float]:
    """F computed with m and 2m nodes, for grid-convergence checks."""
    f1 = gap_log_probability(s, gamma, params, GridSpec(m))
    f2 = gap_log_probability(s, gamma, params, GridSpec(2 * m))
    return f1, f2
