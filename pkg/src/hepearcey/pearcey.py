"""The hard-edge Pearcey kernel and its building blocks.

The kernel K(x, y) on (0, infinity) depends on a parameter alpha > -1 and
a real parameter rho.  It is integrable in the sense that

    gamma K(x, y) = f(x) . h(y) / (x - y)

where the vectors f and h are built from three solutions p1, p2, p3 of
the third order ODE

    x y''' + alpha y'' - rho y' - y = 0.

p1 and p2 are entire; p3 is analytic off the negative imaginary axis.
All three have contour integral representations

    p_k(z) = c_k * integral over Gamma_k of t^(alpha-3)
             * exp(z t + rho / t + 1 / (2 t^2)) dt

with c_1 = 1, c_2 = c_3 = exp(-alpha pi i), c_4 = exp(alpha pi i), each
contour carrying its own branch of t^alpha:

    Gamma_1: loop tangent to the imaginary axis at 0, enclosing t > 0,
             arg t in (-pi/2, pi/2);
    Gamma_2: mirror loop enclosing t < 0, arg t in (pi/2, 3 pi/2);
    Gamma_3: from infinity * e^(3 pi i / 4) to 0, arg t in (0, pi);
    Gamma_4: from 0 to infinity * e^(-3 pi i / 4), arg t in (-pi, 0).

Because the solutions grow or decay like exp(+-theta3(x)) the code keeps
every evaluated triple (p, p', p'') together with a scale exponent, so a
stored triple represents exp(scale_exponent) * (values).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .specialfn import DEFAULT_PRECISION, PrecisionConfig, ln_gamma

OMEGA = cmath.exp(2.0j * math.pi / 3.0)


class NumericalInstabilityError(RuntimeError):
    """Raised when a computed quantity fails an internal consistency check."""


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: hard-edge exponent alpha > -1 and drift rho."""

    alpha: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        if not self.alpha > -1.0:
            raise ValueError("alpha must exceed -1")
        if not (math.isfinite(self.alpha) and math.isfinite(self.rho)):
            raise ValueError("parameters must be finite")


def theta(k: int, z: complex, params: ModelParams) -> complex:
    """Phase function theta_k(z) = (3/2) w^(2k) z^(2/3) + rho w^k z^(1/3),
    w = exp(2 pi i / 3), with principal fractional powers."""
    z = complex(z)
    z13 = z ** (1.0 / 3.0)
    wk = OMEGA**k
    return 1.5 * wk * wk * z13 * z13 + params.rho * wk * z13


def theta3(s: float, params: ModelParams) -> float:
    """theta_3(s) = (3/2) s^(2/3) + rho s^(1/3), real for s > 0."""
    c = s ** (1.0 / 3.0)
    return 1.5 * c * c + params.rho * c


def theta3_prime(s: float, params: ModelParams) -> float:
    """d theta_3 / ds = s^(-1/3) + (rho/3) s^(-2/3)."""
    c = s ** (1.0 / 3.0)
    return 1.0 / c + params.rho / (3.0 * c * c)


def pi3(params: ModelParams) -> float:
    """Cubic polynomial rho (rho^2 + 9 alpha - 18) / 27."""
    a, r = params.alpha, params.rho
    return r * (r * r + 9.0 * a - 18.0) / 27.0


def pi6(params: ModelParams) -> float:
    """Sextic polynomial appearing beside pi3 in the outer conjugation."""
    a, r = params.alpha, params.rho
    r2 = r * r
    num = (
        r2 * r2 * r2
        + (18.0 * a - 45.0) * r2 * r2
        + (81.0 * a * a - 405.0 * a + 405.0) * r2
        - 243.0 * a * a
        + 729.0 * a
        - 405.0
    )
    return num / (2.0 * 3.0**6)


def c_psi(params: ModelParams) -> np.ndarray:
    """Unit upper triangular conjugation matrix built from pi3 and pi6."""
    p3 = pi3(params)
    return np.array(
        [
            [1.0, p3, pi6(params)],
            [0.0, 1.0, p3 + params.rho / 3.0],
            [0.0, 0.0, 1.0],
        ]
    )


@dataclass(frozen=True)
class PkTriple:
    """Value, first and second derivative of a p-function at one point.

    The actual triple is exp(scale_exponent) * (value, d1, d2); the split
    keeps entries representable when theta3 is large.
    """

    value: complex
    d1: complex
    d2: complex
    scale_exponent: float = 0.0

    def unscaled(self) -> tuple[complex, complex, complex]:
        s = cmath.exp(self.scale_exponent)
        return (self.value * s, self.d1 * s, self.d2 * s)

    def third_derivative(self, z: complex, params: ModelParams) -> complex:
        """p''' from the ODE, on the same scale as the stored triple."""
        if z == 0:
            raise ZeroDivisionError("third derivative via the ODE needs z != 0")
        return (params.rho * self.d1 + self.value - params.alpha * self.d2) / z


# ---------------------------------------------------------------------------
# initial values at z = 0 and power series for the entire solutions
# ---------------------------------------------------------------------------


def _p1_derivative_at_zero(k: int, params: ModelParams, config: PrecisionConfig) -> complex:
    # p1^(k)(0) = 2 pi i sum_j rho^j / j! * 2^(-(alpha+k-j)/2) / Gamma((alpha+k-j)/2)
    # The reciprocal Gamma factor is entire, so the sum converges for all rho.
    a, r = params.alpha, params.rho
    total = 0.0
    term_rho = 1.0
    prev_small = False
    for j in range(config.max_terms):
        e = 0.5 * (a + k - j)
        if e > 0.0 or e != round(e):
            rec_gamma = cmath.exp(-ln_gamma(e)).real
        else:
            rec_gamma = 0.0
        contrib = term_rho * 2.0 ** (-e) * rec_gamma
        total += contrib
        term_rho *= r / (j + 1.0)
        # 1/Gamma can vanish at isolated j, so require two consecutive
        # negligible terms before stopping
        small = j > 12 and abs(contrib) < config.series_tolerance * (abs(total) + 1e-300)
        if small and prev_small:
            break
        prev_small = small
    else:
        raise NumericalInstabilityError("initial value series did not converge")
    return 2.0j * math.pi * total


@lru_cache(maxsize=256)
def _initial_values_cached(alpha: float, rho: float, tol: float, max_terms: int):
    config = PrecisionConfig(series_tolerance=tol, max_terms=max_terms)
    params = ModelParams(alpha, rho)
    flipped = ModelParams(alpha, -rho)
    p1 = tuple(_p1_derivative_at_zero(k, params, config) for k in range(3))
    # p2(z; rho) = -p1(-z; -rho), hence p2^(k)(0) = (-1)^(k+1) p1^(k)(0; -rho)
    p2 = tuple((-1.0) ** (k + 1) * _p1_derivative_at_zero(k, flipped, config) for k in range(3))
    return p1, p2


def pk_initial_values(
    params: ModelParams, config: PrecisionConfig = DEFAULT_PRECISION
) -> tuple[PkTriple, PkTriple]:
    """(p1, p1', p1'') and (p2, p2', p2'') at z = 0, as PkTriples."""
    p1, p2 = _initial_values_cached(
        params.alpha, params.rho, config.series_tolerance, config.max_terms
    )
    return PkTriple(*p1), PkTriple(*p2)


def _series_coefficients(
    a0: complex, a1: complex, a2: complex, params: ModelParams, n_terms: int
) -> np.ndarray:
    # a_{m+2} = (rho (m+1) a_{m+1} + a_m) / ((m+2)(m+1)(m+alpha)), m >= 1
    coeffs = np.zeros(n_terms, dtype=complex)
    coeffs[0], coeffs[1], coeffs[2] = a0, a1, a2
    r, a = params.rho, params.alpha
    for m in range(1, n_terms - 2):
        coeffs[m + 2] = (r * (m + 1) * coeffs[m + 1] + coeffs[m]) / (
            (m + 2) * (m + 1) * (m + a)
        )
    return coeffs


def p_entire(
    z: complex,
    which: int,
    params: ModelParams,
    config: PrecisionConfig = DEFAULT_PRECISION,
) -> PkTriple:
    """Power series evaluation of p1 or p2 (which in {1, 2}) at z.

    Intended for |z| <= 3 where the series is short and cancellation-free.
    """
    if which not in (1, 2):
        raise ValueError("p_entire handles which in {1, 2}")
    triples = pk_initial_values(params, config)
    t0 = triples[which - 1]
    z = complex(z)
    n_terms = config.max_terms
    coeffs = _series_cached(params.alpha, params.rho, which, config.series_tolerance, n_terms)

    val = 0.0 + 0.0j
    d1 = 0.0 + 0.0j
    d2 = 0.0 + 0.0j
    zp = 1.0 + 0.0j  # z^m
    converged = False
    for m in range(n_terms):
        c = coeffs[m]
        val += c * zp
        if m >= 1:
            d1 += m * c * zp / z if z != 0 else (c if m == 1 else 0.0)
        if m >= 2:
            d2 += m * (m - 1) * c * zp / (z * z) if z != 0 else (2.0 * c if m == 2 else 0.0)
        if m > 8 and abs(c * zp) < config.series_tolerance * (abs(val) + abs(t0.value)):
            converged = True
            break
        zp *= z
    if not converged and abs(z) > 0:
        raise NumericalInstabilityError("p series did not converge; use the contour route")
    return PkTriple(val, d1, d2, 0.0)


@lru_cache(maxsize=256)
def _series_cached(alpha: float, rho: float, which: int, tol: float, n_terms: int):
    config = PrecisionConfig(series_tolerance=tol, max_terms=n_terms)
    params = ModelParams(alpha, rho)
    t1, t2 = pk_initial_values(params, config)
    t = t1 if which == 1 else t2
    return _series_coefficients(t.value, t.d1, 0.5 * t.d2, params, n_terms)


# ---------------------------------------------------------------------------
# contour quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContourSpec:
    """Quadrature layout for one of the contours Gamma_1 .. Gamma_4.

    contour: which Gamma (1-4).
    loop_nodes: trapezoid nodes on the loops (Gamma_1, Gamma_2).
    loop_radius: circle radius; None picks the saddle scale
        0.5 * max(|z|, 1)^(-1/3).
    junction_height: corner of Gamma_3 / Gamma_4 on the imaginary axis;
        None picks min(1, |z|^(-1/3)).
    panel_nodes: Gauss-Legendre nodes per panel on the open contours.
    max_panels: cap on the adaptive panel count.
    tail_tolerance: a panel whose contribution falls below this fraction
        of the accumulated integral terminates the sweep.
    """

    contour: int = 1
    loop_nodes: int = 400
    loop_radius: float | None = None
    junction_height: float | None = None
    panel_nodes: int = 32
    max_panels: int = 120
    tail_tolerance: float = 1e-18

    def __post_init__(self) -> None:
        if self.contour not in (1, 2, 3, 4):
            raise ValueError("contour must be 1, 2, 3 or 4")
        if self.loop_nodes < 16 or self.panel_nodes < 4:
            raise ValueError("too few quadrature nodes")


@lru_cache(maxsize=16)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _sum_scaled(exponents: np.ndarray, factors: np.ndarray, t: np.ndarray):
    """Accumulate (sum e^w f, sum e^w f t, sum e^w f t^2) with a shared
    scale pulled out.  Returns (triple ndarray, scale)."""
    m = float(np.max(exponents.real))
    base = np.exp(exponents - m) * factors
    return np.array([np.sum(base), np.sum(base * t), np.sum(base * t * t)]), m


def _combine(parts: list[tuple[np.ndarray, float]]) -> tuple[np.ndarray, float]:
    m = max(p[1] for p in parts)
    total = np.zeros(3, dtype=complex)
    for vec, e in parts:
        total += vec * math.exp(e - m)
    return total, m


def _loop_eval(z: complex, params: ModelParams, spec: ContourSpec, left: bool):
    """Trapezoid rule on the loop contours.

    Right loop (Gamma_1): t = r (1 + e^(i phi)), principal log.
    Left loop (Gamma_2): t = -r (1 + e^(i phi)), arg t = pi + phi / 2.
    Both are traversed counterclockwise; the integrand vanishes to all
    orders at the pinch point t = 0, so the periodic trapezoid rule is
    spectrally accurate.
    """
    n = spec.loop_nodes
    r = spec.loop_radius
    if r is None:
        r = 0.5 * max(abs(z), 1.0) ** (-1.0 / 3.0)
    phi = -math.pi + (np.arange(n) + 0.5) * (2.0 * math.pi / n)
    inner = 1.0 + np.exp(1j * phi)
    ring = np.exp(1j * phi)
    if left:
        # mirror image of the right loop; the mirror reverses orientation,
        # which matches the reference value p2(0) = -p1(0) at rho = 0
        t = -r * inner
        log_t = np.log(r * np.abs(inner)) + 1j * (math.pi + 0.5 * phi)
        dt = r * 1j * ring * (2.0 * math.pi / n)
    else:
        t = r * inner
        log_t = np.log(t)
        dt = r * 1j * ring * (2.0 * math.pi / n)
    w = z * t + (params.alpha - 3.0) * log_t + params.rho / t + 0.5 / (t * t)
    return _sum_scaled(w, dt, t)


def _panel_sweep(z, params, spec, t_of_u, dt_du, log_t_of, u_edges_iter):
    """Gauss-Legendre panels along an open contour, stopping once a panel
    is negligible relative to the running total."""
    xg, wg = _gl_nodes(spec.panel_nodes)
    parts: list[tuple[np.ndarray, float]] = []
    best = -math.inf
    acc = 0.0
    for u0, u1 in u_edges_iter:
        u = 0.5 * (u1 - u0) * xg + 0.5 * (u1 + u0)
        t = t_of_u(u)
        w = z * t + (params.alpha - 3.0) * log_t_of(t, u) + params.rho / t + 0.5 / (t * t)
        vec, m = _sum_scaled(w, wg * 0.5 * (u1 - u0) * dt_du(u), t)
        parts.append((vec, m))
        if m > best:
            if len(parts) > 1:
                acc *= math.exp(best - m)
            best = m
        rel = abs(vec[0]) * math.exp(m - best)
        acc += rel
        if acc > 0.0 and rel < spec.tail_tolerance * acc:
            break
    return _combine(parts)


def _ray_eval(z: complex, params: ModelParams, spec: ContourSpec, lower: bool):
    """The open contours Gamma_3 (upper) and Gamma_4 (lower).

    Gamma_3 runs from infinity * e^(3 pi i/4) to the junction i h, then
    down the imaginary axis to 0.  Gamma_4 is its mirror image through the
    real axis, traversed from 0 outward.  Both reduce to the same two
    quadrature sweeps up to orientation and conjugated geometry.
    """
    az = abs(z)
    h = spec.junction_height
    if h is None:
        h = min(1.0, az ** (-1.0 / 3.0)) if az > 0 else 1.0
    sgn = -1.0 if lower else 1.0  # reflects the contour into the lower half plane

    # vertical piece: t = sgn * i y, y from 0 to h, geometric panels toward 0
    def t_vert(y):
        return sgn * 1j * y

    def log_t_vert(t, y):
        return np.log(y) + sgn * 0.5j * math.pi

    def edges_vert():
        hi = h
        for _ in range(spec.max_panels):
            lo = 0.5 * hi
            yield lo, hi
            hi = lo

    vert_vec, vert_m = _panel_sweep(
        z, params, spec, t_vert, lambda y: sgn * 1j * np.ones_like(y), log_t_vert, edges_vert()
    )

    # ray piece: t = sgn i h + u e^(sgn 3 pi i / 4), u from 0 outward
    e_dir = cmath.exp(sgn * 0.75j * math.pi)
    t_j = sgn * 1j * h

    def t_ray(u):
        return t_j + u * e_dir

    def log_t_ray(t, u):
        # stays in one open half plane, principal log is the right branch
        return np.log(t)

    def edges_ray():
        step = min(h, 30.0 / (1.0 + az))
        lo = 0.0
        for _ in range(spec.max_panels):
            yield lo, lo + step
            lo += step
            step *= 1.7

    ray_vec, ray_m = _panel_sweep(
        z, params, spec, t_ray, lambda u: e_dir * np.ones_like(u), log_t_ray, edges_ray()
    )

    if lower:
        # Gamma_4: 0 -> junction -> infinity
        parts = [(vert_vec, vert_m), (ray_vec, ray_m)]
    else:
        # Gamma_3: infinity -> junction -> 0, so both sweeps enter negated
        parts = [(-vert_vec, vert_m), (-ray_vec, ray_m)]
    return _combine(parts)


def p_contour(
    z: complex,
    k: int,
    params: ModelParams,
    spec: ContourSpec | None = None,
) -> PkTriple:
    """Contour-integral evaluation of p_k(z), k in {1, 2, 3, 4}.

    Returns the triple (p_k, p_k', p_k'') with a shared scale exponent.
    For k in {3, 4} the point z must avoid the half axis where the
    solution branches (the negative, resp. positive, imaginary axis).
    """
    z = complex(z)
    if spec is None:
        spec = ContourSpec(contour=k)
    elif spec.contour != k:
        spec = ContourSpec(
            contour=k,
            loop_nodes=spec.loop_nodes,
            loop_radius=spec.loop_radius,
            junction_height=spec.junction_height,
            panel_nodes=spec.panel_nodes,
            max_panels=spec.max_panels,
            tail_tolerance=spec.tail_tolerance,
        )
    if k == 1:
        vec, m = _loop_eval(z, params, spec, left=False)
        pref = 1.0 + 0.0j
    elif k == 2:
        vec, m = _loop_eval(z, params, spec, left=True)
        pref = cmath.exp(-1j * math.pi * params.alpha)
    elif k == 3:
        if z.real == 0.0 and z.imag < 0.0:
            raise ValueError("p3 is not defined on the negative imaginary axis")
        vec, m = _ray_eval(z, params, spec, lower=False)
        pref = cmath.exp(-1j * math.pi * params.alpha)
    else:
        if z.real == 0.0 and z.imag > 0.0:
            raise ValueError("p4 is not defined on the positive imaginary axis")
        vec, m = _ray_eval(z, params, spec, lower=True)
        pref = cmath.exp(1j * math.pi * params.alpha)
    vec = vec * pref
    return PkTriple(vec[0], vec[1], vec[2], m)


_SERIES_RADIUS = 3.0


def p_k(z: complex, k: int, params: ModelParams, config: PrecisionConfig = DEFAULT_PRECISION) -> PkTriple:
    """Evaluate p_k with automatic method dispatch.

    The entire solutions use the power series inside |z| <= 3 and the
    loop contours outside; p3 and p4 always use their open contours.
    """
    if k in (1, 2) and abs(z) <= _SERIES_RADIUS:
        return p_entire(z, k, params, config)
    return p_contour(z, k, params)


# ---------------------------------------------------------------------------
# the matrix Psi-tilde and the kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledMatrix:
    """3x3 matrix with one scale exponent per column: the represented
    matrix is values @ diag(exp(col_exponents))."""

    values: np.ndarray
    col_exponents: np.ndarray

    def det(self) -> tuple[complex, float]:
        """Determinant as (mantissa, exponent): det = mantissa * exp(exponent)."""
        return complex(np.linalg.det(self.values)), float(np.sum(self.col_exponents))


def psi_tilde(x: float, params: ModelParams, config: PrecisionConfig = DEFAULT_PRECISION) -> ScaledMatrix:
    """The 3x3 solution matrix at x > 0, columns (p2, p3, p1), rows
    (value, d/dx, d^2/dx^2), together with the normalizing prefactor
    exp(rho^2 / 6) / sqrt(2 pi).  Its determinant is x^(-alpha)."""
    if not x > 0.0:
        raise ValueError("psi_tilde is evaluated on the positive axis")
    cols = [p_k(x, 2, params, config), p_k(x, 3, params, config), p_k(x, 1, params, config)]
    values = np.empty((3, 3), dtype=complex)
    exps = np.empty(3)
    for j, tr in enumerate(cols):
        col = np.array([tr.value, tr.d1, tr.d2])
        # renormalize so each stored column is O(1)
        peak = float(np.max(np.abs(col)))
        if peak == 0.0 or not np.isfinite(peak):
            raise NumericalInstabilityError(f"degenerate p-column at x={x}")
        shift = math.log(peak)
        values[:, j] = col / peak
        exps[j] = tr.scale_exponent + shift
    values /= math.sqrt(2.0 * math.pi)
    exps += params.rho**2 / 6.0
    return ScaledMatrix(values, exps)


@dataclass(frozen=True)
class KernelVectors:
    """The integrable-kernel data at one point: f carries the first
    column of Psi-tilde plus its derivative extension, h the second row
    of the (transposed) inverse, each with a scale exponent."""

    f: np.ndarray  # (f1, f2, f3) = (p2, p2', p2'') scaled
    f_prime: np.ndarray  # (p2', p2'', p2''') on the same scale
    h: np.ndarray
    f_exponent: float
    h_exponent: float


def kernel_vectors(
    x: float,
    gamma: float,
    params: ModelParams,
    config: PrecisionConfig = DEFAULT_PRECISION,
) -> KernelVectors:
    """f(x) and h(x) with gamma K(x, y) = f(x) . h(y) / (x - y)."""
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must lie in (0, 1]")
    m = psi_tilde(x, params, config)
    f = m.values[:, 0]
    f3 = (params.rho * f[1] + f[0] - params.alpha * f[2]) / x
    f_prime = np.array([f[1], f[2], f3])
    # h = (gamma / 2 pi i) * row 2 of Psi-tilde^(-1), transposed
    inv = np.linalg.inv(m.values)
    h = inv[1, :] * (gamma / (2.0j * math.pi))
    return KernelVectors(
        f=f,
        f_prime=f_prime,
        h=h,
        f_exponent=float(m.col_exponents[0]),
        h_exponent=float(-m.col_exponents[1]),
    )


_DIAGONAL_CUTOFF = 1e-5


def kernel_point(
    x: float,
    y: float,
    gamma: float,
    params: ModelParams,
    config: PrecisionConfig = DEFAULT_PRECISION,
) -> float:
    """gamma K(x, y) as a real number.

    Near the diagonal (|x - y| below 1e-5 max(1, x)) the quotient is
    replaced by the limit f'(m) . h(m) at the midpoint, accurate to
    O((x - y)^2).  Raises NumericalInstabilityError if the imaginary
    residue of the complex arithmetic is out of proportion.
    """
    vx = kernel_vectors(x, gamma, params, config)
    if abs(x - y) < _DIAGONAL_CUTOFF * max(1.0, abs(x)):
        mid = 0.5 * (x + y)
        vm = kernel_vectors(mid, gamma, params, config)
        value = complex(np.dot(vm.f_prime, vm.h)) * math.exp(vm.f_exponent + vm.h_exponent)
        ref = abs(value)
    else:
        vy = kernel_vectors(y, gamma, params, config)
        scale = math.exp(vx.f_exponent + vy.h_exponent)
        value = complex(np.dot(vx.f, vy.h)) * scale / (x - y)
        ref = (
            float(np.linalg.norm(vx.f) * np.linalg.norm(vy.h)) * scale / abs(x - y)
        )
    if abs(value.imag) > 1e-9 * max(abs(value), ref):
        raise NumericalInstabilityError(
            f"kernel imaginary residue {value.imag:.3e} at ({x}, {y})"
        )
    return value.real


# ---------------------------------------------------------------------------
# independent double-contour oracle
# ---------------------------------------------------------------------------


def kernel_contour_oracle(
    x: float,
    y: float,
    gamma: float,
    params: ModelParams,
    loop_nodes: int = 1200,
    arc_nodes: int = 1600,
    panel_nodes: int = 40,
    as_complex: bool = False,
) -> float | complex:
    """gamma K(x, y) from the defining double contour integral

        K(x, y) = (2 pi i)^(-2) * oint ds oint dt
                  e^(rho/s + 1/(2 s^2) - rho/t - 1/(2 t^2) + x s - y t)
                  * (s/t)^alpha / (t - s),

    where s runs over a closed loop tangent to the imaginary axis at 0
    enclosing s < 0 (arg s in (pi/2, 3 pi/2)) and t over an open contour
    from infinity e^(i pi/4) counterclockwise around the origin to
    infinity e^(-i pi/4) (arg t continuous from pi/4 to 7 pi/4).

    This shares nothing with the p-function route and serves as the
    cross-validation oracle.  Accurate for moderate x, y (up to ~60).
    """
    if x <= 0 or y <= 0:
        raise ValueError("oracle requires x, y > 0")
    a, r = params.alpha, params.rho

    # s loop: tangent left loop, traversed clockwise, with the real
    # saddle scale x^(-1/3) setting the radius
    rs = 0.4 * x ** (-1.0 / 3.0)
    phi = -math.pi + (np.arange(loop_nodes) + 0.5) * (2.0 * math.pi / loop_nodes)
    inner = 1.0 + np.exp(1j * phi)
    s = -rs * inner
    log_s = np.log(rs * np.abs(inner)) + 1j * (math.pi + 0.5 * phi)
    ds = rs * 1j * np.exp(1j * phi) * (2.0 * math.pi / loop_nodes)
    ws = r / s + 0.5 / (s * s) + x * s + a * log_s

    # t contour: circle of radius R swept counterclockwise from pi/4 to
    # 7 pi/4, plus straight rays to infinity at both ends
    R = max(1.35 * y ** (-1.0 / 3.0), 2.6 * rs)
    ang = math.pi / 4.0 + (np.arange(arc_nodes) + 0.5) * (1.5 * math.pi / arc_nodes)
    t_arc = R * np.exp(1j * ang)
    log_arc = math.log(R) + 1j * ang
    dt_arc = 1j * t_arc * (1.5 * math.pi / arc_nodes)

    xg, wg = _gl_nodes(panel_nodes)
    t_rays = []
    log_rays = []
    dt_rays = []
    for end_angle, orientation in ((math.pi / 4.0, -1.0), (7.0 * math.pi / 4.0, +1.0)):
        e_dir = cmath.exp(1j * end_angle)
        step = min(1.0, 30.0 / (1.0 + y))
        lo = 0.0
        acc = 0.0
        for _ in range(200):
            u = 0.5 * step * (xg + 1.0) + lo
            t = (R + u) * e_dir
            log_t = np.log(R + u) + 1j * end_angle
            wexp = -r / t - 0.5 / (t * t) - y * t - a * log_t
            t_rays.append(t)
            log_rays.append(log_t)
            dt_rays.append(orientation * e_dir * wg * 0.5 * step)
            contrib = float(np.sum(np.exp(np.clip(wexp.real, -745.0, 300.0))))
            acc = max(acc, contrib)
            if contrib < 1e-18 * acc:
                break
            lo += step
            step *= 1.6

    t_all = np.concatenate([t_arc] + t_rays)
    log_all = np.concatenate([log_arc] + log_rays)
    dt_all = np.concatenate([dt_arc] + dt_rays)
    wt = -r / t_all - 0.5 / (t_all * t_all) - y * t_all - a * log_all

    ms = float(np.max(ws.real))
    mt = float(np.max(wt.real))
    es = np.exp(ws - ms) * ds
    et = np.exp(wt - mt) * dt_all
    denom = t_all[None, :] - s[:, None]
    if np.min(np.abs(denom)) < 0.05 * R:
        raise NumericalInstabilityError("oracle contours too close")
    total = complex(np.sum(es[:, None] * et[None, :] / denom))
    value = gamma * total * math.exp(ms + mt) / (2.0j * math.pi) ** 2
    return value if as_complex else value.real
