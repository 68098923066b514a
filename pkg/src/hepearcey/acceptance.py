"""Acceptance suite: every headline numerical claim as a pass/fail check.

Each criterion is an independent, self-contained verification with its
own tolerance budget; together they cover the special-function layer,
the two kernel routes, the Fredholm determinants, the closed-form
asymptotics, the counting statistics, the Hamiltonian dynamics, and the
small-s behaviour.  The suite backs both ``hepearcey verify`` and the
test module; results carry a human-readable detail line.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import (
    counting_mean_expansion,
    counting_variance_expansion,
    gap_log_expansion,
    oscillation_amplitude,
    phase,
)
from .fredholm import (
    GridSpec,
    convergence_pair,
    counting_mean,
    counting_mgf,
    counting_variance,
    gap_log_probability,
    resolvent_at_endpoint,
)
from .pearcey import (
    ModelParams,
    kernel_contour_oracle,
    kernel_point,
    p_k,
    pk_initial_values,
    psi_tilde,
)
from .specialfn import ln_gamma


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    detail: str
    seconds: float


# ---------------------------------------------------------------------------
# 1. special-function limits
# ---------------------------------------------------------------------------


def _crit_special_limits() -> tuple[bool, str]:
    """Wronskian of the entire pair at 0, the alpha = 0 difference
    quotient, and the integer-alpha endpoint limit."""
    worst = 0.0
    for alpha in (0.25, 0.5, 1.0, 1.5, 2.5):
        for rho in (-2.0, -1.0, 0.0, 1.0, 2.0):
            p1, p2 = pk_initial_values(ModelParams(alpha, rho))
            w = p1.value * p2.d1 - p1.d1 * p2.value
            wp = p1.value * p2.d2 - p1.d2 * p2.value
            pref = -((2.0 * math.pi) ** 1.5) * math.exp(-0.5 * rho * rho)
            w_ref = pref / cmath.exp(ln_gamma(alpha)).real
            wp_ref = pref * rho / cmath.exp(ln_gamma(alpha + 1.0)).real
            worst = max(worst, abs(w - w_ref) / abs(w_ref))
            if rho != 0.0:
                worst = max(worst, abs(wp - wp_ref) / abs(wp_ref))
            elif abs(wp) > 1e-9 * abs(w_ref):
                return False, f"W'(0;0) = {wp:.3e}, expected 0"
    if worst > 1e-9:
        return False, f"Wronskian closed forms: worst relative error {worst:.3e}"

    # at rho = 0 the next term of p1 - p2 is O(z^4), so the quotient
    # isolates the pi i limit (a rho != 0 choice adds rho z / 3)
    z = 1e-3
    params = ModelParams(0.0, 0.0)
    t1, t2 = p_k(z, 1, params), p_k(z, 2, params)
    quot = (
        t1.value * cmath.exp(t1.scale_exponent) - t2.value * cmath.exp(t2.scale_exponent)
    ) / z**2
    err0 = abs(quot - 1j * math.pi) / math.pi
    if err0 > 1e-4:
        return False, f"(p1-p2)/z^2 at z=1e-3: error {err0:.3e} > 1e-4"

    errs = []
    for alpha in (1.0, 2.0):
        t3 = p_k(1e-4, 3, ModelParams(alpha, 0.3))
        val = t3.d2 * cmath.exp(t3.scale_exponent) * (1e-4) ** alpha
        tgt = -cmath.exp(ln_gamma(alpha)).real
        errs.append(abs(val - tgt) / abs(tgt))
    if max(errs) > 1e-2:
        return False, f"x^a p3'' limit: errors {errs}"
    return True, (
        f"Wronskian worst {worst:.1e}; quotient err {err0:.1e}; "
        f"p3'' errs {max(errs):.1e}"
    )


# ---------------------------------------------------------------------------
# 2. kernel cross-oracle
# ---------------------------------------------------------------------------


def _crit_kernel_oracle() -> tuple[bool, str]:
    """Integrable-structure kernel vs the double-contour kernel."""
    pts = np.linspace(2.0, 20.0, 6)
    worst, worst_at = 0.0, ""
    for alpha in (0.0, 0.5, 1.0):
        for rho in (-1.0, 0.0, 1.0):
            params = ModelParams(alpha, rho)
            for x in pts:
                for y in pts:
                    k = kernel_point(float(x), float(y), 1.0, params)
                    o = kernel_contour_oracle(float(x), float(y), 1.0, params)
                    rel = abs(k - o) / max(abs(o), 1e-300)
                    if rel > 2.5e-7:
                        # the oracle's own quadrature error at wide
                        # (x, y) separation converges ~4x per node
                        # doubling and can exceed the gate; re-evaluate
                        # the few offending pairs at 3x the nodes
                        o = kernel_contour_oracle(
                            float(x), float(y), 1.0, params,
                            loop_nodes=3600, arc_nodes=4800,
                        )
                        rel = abs(k - o) / max(abs(o), 1e-300)
                    if rel > worst:
                        worst, worst_at = rel, f"(a={alpha}, r={rho}, x={x:g}, y={y:g})"
    ok = worst <= 1e-6
    return ok, f"worst relative difference {worst:.3e} at {worst_at}"


# ---------------------------------------------------------------------------
# 3. unimodularity of the solution matrix
# ---------------------------------------------------------------------------


def _crit_unimodular() -> tuple[bool, str]:
    """det PsiTilde(x) * x^alpha = 1 on a log grid."""
    xs = np.geomspace(1e-2, 1e2, 20)
    worst = 0.0
    for alpha in (0.0, 0.5, 1.0):
        for rho in (-1.0, 0.0, 1.0):
            params = ModelParams(alpha, rho)
            for x in xs:
                mant, expo = psi_tilde(float(x), params).det()
                val = mant * cmath.exp(expo + alpha * math.log(x))
                worst = max(worst, abs(val - 1.0))
    return worst <= 1e-8, f"worst |det PsiTilde x^alpha - 1| = {worst:.3e}"


# ---------------------------------------------------------------------------
# 4. Fredholm grid convergence
# ---------------------------------------------------------------------------


def _crit_fredholm_convergence() -> tuple[bool, str]:
    params = ModelParams(0.0, 0.0)
    worst = 0.0
    for s in (20.0, 40.0, 60.0):
        for gamma in (0.25, 0.5, 0.9):
            f1, f2 = convergence_pair(s, gamma, params, 160)
            worst = max(worst, abs(f2 - f1))
    return worst <= 1e-9, f"worst |F_2m - F_m| = {worst:.3e} at m=160"


# ---------------------------------------------------------------------------
# 5. large-gap expansion remainder scaling
# ---------------------------------------------------------------------------


def _crit_gap_expansion() -> tuple[bool, str]:
    """residual(s) * s^(1/3) has a flat upper envelope over s (within a
    factor 3) and residual(60) is small, across the (gamma, rho, alpha)
    compact.

    The remainder of the expansion carries an oscillatory component that
    passes through zeros, so a pointwise max/min ratio at a handful of s
    values is dominated by where those zeros happen to land (observed
    spreads up to x30 from near-zeros alone).  The scaling claim is an
    upper bound, so it is tested on the envelope: the maximum of the
    scaled residual over the lower half of a denser s-grid must agree
    with the maximum over the upper half within the factor 3."""
    svals = np.linspace(20.0, 60.0, 9)
    grid = GridSpec(m=160)
    worst_ratio, worst_r60, worst_at = 1.0, 0.0, ""
    for gamma in (0.25, 0.5, 0.9):
        for rho in (-1.0, 0.0, 1.0):
            for alpha in (0.0, 0.5, 1.0):
                params = ModelParams(alpha, rho)
                scaled = []
                for s in svals:
                    s = float(s)
                    f_num = gap_log_probability(s, gamma, params, grid)
                    f_asy = gap_log_expansion(s, gamma, params)
                    r = abs(f_num - f_asy)
                    scaled.append(r * s ** (1.0 / 3.0))
                    if s == 60.0:
                        worst_r60 = max(worst_r60, r)
                half = len(scaled) // 2 + 1
                env_lo, env_hi = max(scaled[:half]), max(scaled[half - 1 :])
                ratio = max(env_lo, env_hi) / min(env_lo, env_hi)
                if ratio > worst_ratio:
                    worst_ratio = ratio
                    worst_at = f"(g={gamma}, r={rho}, a={alpha})"
    ok = worst_ratio <= 3.0 and worst_r60 <= 0.1
    return ok, (
        f"worst scaled-residual envelope spread x{worst_ratio:.2f} at {worst_at}; "
        f"max residual(60) = {worst_r60:.3e}"
    )


# ---------------------------------------------------------------------------
# 6. resolvent endpoint identity
# ---------------------------------------------------------------------------


def _crit_resolvent_identity() -> tuple[bool, str]:
    """dF/ds by central differences equals -R(s, s)."""
    params = ModelParams(0.0, 0.0)
    grid = GridSpec(m=160)
    gamma, h = 0.5, 1e-3
    worst = 0.0
    for s in (20.0, 40.0, 60.0):
        dfds = (
            gap_log_probability(s + h, gamma, params, grid)
            - gap_log_probability(s - h, gamma, params, grid)
        ) / (2.0 * h)
        rss = resolvent_at_endpoint(s, gamma, params, grid)
        worst = max(worst, abs(dfds + rss) / abs(rss))
    return worst <= 1e-5, f"worst relative |dF/ds + R(s,s)| = {worst:.3e}"


# ---------------------------------------------------------------------------
# 7. oscillatory term of the Hamiltonian
# ---------------------------------------------------------------------------


def _crit_oscillation() -> tuple[bool, str]:
    """s x (the numerically computed H minus its three non-oscillatory
    terms) must be the cosine term: amplitude 2|beta|/(3 sqrt 3) and
    zero-crossings aligned with cos(2 psi)."""
    from .asymptotics import hamiltonian_expansion

    params = ModelParams(0.0, 0.0)
    gamma = 0.5
    grid = GridSpec(m=160)
    svals = np.linspace(40.0, 60.0, 81)
    osc = np.array(
        [
            (
                -resolvent_at_endpoint(float(s), gamma, params, grid)
                - hamiltonian_expansion(float(s), gamma, params, terms=3)
            )
            * s
            for s in svals
        ]
    )
    cosv = np.array([math.cos(2.0 * phase(float(s), gamma, params)) for s in svals])

    def crossings(vals: np.ndarray) -> list[float]:
        out = []
        for i in range(len(vals) - 1):
            if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0.0:
                t = vals[i] / (vals[i] - vals[i + 1])
                out.append(float(svals[i] + t * (svals[i + 1] - svals[i])))
        return out

    zc_osc, zc_cos = crossings(osc), crossings(cosv)
    if not zc_osc or not zc_cos:
        return False, "no zero crossings found on [40, 60]"
    # half the cosine period at the midpoint, measured from its crossings
    if len(zc_cos) >= 2:
        half_period = zc_cos[1] - zc_cos[0]
    else:
        half_period = 7.0
    worst_off = max(
        min(abs(z - c) for c in zc_cos) for z in zc_osc
    )
    amp = float(np.max(np.abs(osc)))
    amp_ref = oscillation_amplitude(gamma)
    amp_err = abs(amp - amp_ref) / amp_ref
    # the remainder of the expansion is O(s^(-1/3)) ~ 0.27 relative here
    ok = worst_off <= 0.02 * 2.0 * half_period and amp_err <= 0.35
    return ok, (
        f"crossing misalignment {worst_off:.3f} (2% of period = "
        f"{0.02 * 2.0 * half_period:.3f}); amplitude {amp:.4f} vs "
        f"{amp_ref:.4f} ({amp_err:.1%})"
    )


# ---------------------------------------------------------------------------
# 8. counting statistics
# ---------------------------------------------------------------------------


def _crit_counting() -> tuple[bool, str]:
    params = ModelParams(0.0, 0.0)
    grid = GridSpec(m=160)
    mean100 = counting_mean(100.0, params, grid)
    var100 = counting_variance(100.0, params, grid)
    mean_ref = counting_mean_expansion(100.0, params)
    var_ref = counting_variance_expansion(100.0, params)
    if abs(mean100 - mean_ref) > 0.1:
        return False, f"mean(100) = {mean100:.4f} vs {mean_ref:.4f}"
    if abs(var100 - var_ref) > 0.03:
        return False, f"var(100) = {var100:.4f} vs {var_ref:.4f}"
    d30 = abs(counting_mean(30.0, params, grid) - counting_mean_expansion(30.0, params))
    d100 = abs(mean100 - mean_ref)
    v30 = abs(
        counting_variance(30.0, params, grid) - counting_variance_expansion(30.0, params)
    )
    v100 = abs(var100 - var_ref)
    if not (d100 < d30 and v100 < v30):
        return False, (
            f"asymptotic gaps did not shrink: mean {d30:.2e}->{d100:.2e}, "
            f"var {v30:.2e}->{v100:.2e}"
        )
    # small-nu moment generating function: ln E e^(-2 pi nu N) is
    # -2 pi nu mean + (2 pi nu)^2 var / 2 + O(nu^3)
    s, nu = 50.0, 2e-3
    lp = math.log(counting_mgf(s, nu, params, grid))
    lm = math.log(counting_mgf(s, 2.0 * nu, params, grid))
    u1, u2 = 2.0 * math.pi * nu, 4.0 * math.pi * nu
    # solve the 2x2 system for (mean, var) from the two samples
    det = -u1 * u2**2 / 2.0 + u2 * u1**2 / 2.0
    mean_fit = (lp * u2**2 / 2.0 - lm * u1**2 / 2.0) / det
    var_fit = (lm * (-u1) - lp * (-u2)) / det
    m_true = counting_mean(s, params, grid)
    v_true = counting_variance(s, params, grid)
    em = abs(mean_fit - m_true) / m_true
    ev = abs(var_fit - v_true) / v_true
    ok = em <= 0.01 and ev <= 0.01
    return ok, (
        f"mean(100) {mean100:.4f} (asy {mean_ref:.4f}); var(100) {var100:.4f} "
        f"(asy {var_ref:.4f}); MGF fit errors mean {em:.2%}, var {ev:.2%}"
    )


# ---------------------------------------------------------------------------
# 9. Hamiltonian dynamics suite
# ---------------------------------------------------------------------------


def _crit_dynamics() -> tuple[bool, str]:
    from .dynamics import (
        first_integral_residuals,
        identity_report,
        rhs,
        seed_large_s,
        solve_hamiltonian_flow,
    )

    params = ModelParams(0.0, 0.0)
    gamma, s0 = 0.5, 1e4
    rtol, atol = 1e-12, 1e-14
    seed = seed_large_s(s0, gamma, params)
    seed_res = max(first_integral_residuals(seed, params).values())
    traj = solve_hamiltonian_flow(s0, 20.0, gamma, params, rtol=rtol, atol=atol)

    drift_bound = 100.0 * (rtol + seed_res)
    worst_drift = 0.0
    for s in np.geomspace(2500.0, s0 * 0.999, 12):
        st = traj.state_at(float(s))
        worst_drift = max(worst_drift, max(first_integral_residuals(st, params).values()))
    if worst_drift > drift_bound:
        return False, f"first-integral drift {worst_drift:.3e} > {drift_bound:.3e}"

    worst_s_rel, worst_flow_rel = 0.0, 0.0
    for s in (25.0, 40.0, 60.0, 100.0, 300.0, 1000.0, 5000.0):
        rep = identity_report(traj, np.array([s]))
        state = traj.state_at(s)
        pure = abs(state.v[0] * state.u[1] + state.v[1] * state.u[2])
        rhs_scale = float(np.abs(rhs(state, params).pack()).max())
        worst_s_rel = max(worst_s_rel, rep["s_identity"] / pure)
        worst_flow_rel = max(worst_flow_rel, rep["hamilton_flow"] / rhs_scale)
    if worst_s_rel > 1e-6:
        return False, f"d/ds(sH) relative residual {worst_s_rel:.3e} > 1e-6"
    if worst_flow_rel > 1e-8:
        return False, f"Hamilton-equation relative residual {worst_flow_rel:.3e} > 1e-8"

    grid = GridSpec(m=160)
    worst_h = 0.0
    for s in (20.0, 30.0, 40.0, 50.0, 60.0):
        h_traj = traj.hamiltonian_at(s)
        r = resolvent_at_endpoint(s, gamma, params, grid)
        gate = 5.0 * s ** (-2.0 / 3.0)
        if abs(h_traj + r) > gate:
            return False, f"|H({s}) + R| = {abs(h_traj + r):.3e} > {gate:.3e}"
        worst_h = max(worst_h, abs(h_traj + r) / gate)
    return True, (
        f"drift {worst_drift:.2e} (bound {drift_bound:.2e}); d/ds(sH) rel "
        f"{worst_s_rel:.2e}; Hamilton rel {worst_flow_rel:.2e}; "
        f"worst |H+R|/gate = {worst_h:.2f}"
    )


# ---------------------------------------------------------------------------
# 10. small-s power law
# ---------------------------------------------------------------------------


def _crit_small_s() -> tuple[bool, str]:
    grid = GridSpec(m=40)
    xs = np.geomspace(1e-3, 1e-1, 7)
    details = []
    for alpha in (0.0, 0.5, 1.0):
        for gamma in (0.5, 1.0):
            params = ModelParams(alpha, 0.0)
            fs = [abs(gap_log_probability(float(s), gamma, params, grid)) for s in xs]
            slope = float(np.polyfit(np.log(xs), np.log(fs), 1)[0])
            details.append(f"a={alpha},g={gamma}: {slope:.3f}")
            if slope < alpha + 0.9:
                return False, f"slope {slope:.3f} < {alpha + 0.9} at alpha={alpha}, gamma={gamma}"
    return True, "log-log slopes " + "; ".join(details)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_CRITERIA: dict[str, tuple[str, Callable[[], tuple[bool, str]]]] = {
    "1": ("special-function limits", _crit_special_limits),
    "2": ("kernel cross-oracle", _crit_kernel_oracle),
    "3": ("solution-matrix unimodularity", _crit_unimodular),
    "4": ("Fredholm grid convergence", _crit_fredholm_convergence),
    "5": ("large-gap expansion remainder", _crit_gap_expansion),
    "6": ("resolvent endpoint identity", _crit_resolvent_identity),
    "7": ("Hamiltonian oscillatory term", _crit_oscillation),
    "8": ("counting statistics", _crit_counting),
    "9": ("Hamiltonian dynamics suite", _crit_dynamics),
    "10": ("small-s power law", _crit_small_s),
}


def criterion_ids() -> list[str]:
    return list(_CRITERIA)


def run_criterion(cid: str) -> CriterionResult:
    if cid not in _CRITERIA:
        raise KeyError(f"unknown criterion id {cid!r}; valid: {', '.join(_CRITERIA)}")
    title, fn = _CRITERIA[cid]
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure, not an abort
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(cid, title, passed, detail, time.perf_counter() - t0)


def run_suite(ids: list[str] | None = None) -> list[CriterionResult]:
    return [run_criterion(c) for c in (ids or criterion_ids())]
