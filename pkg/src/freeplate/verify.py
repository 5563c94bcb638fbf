"""Independent validation of computed modes.

Everything here deliberately avoids the determinant machinery in
spectrum.py: the Rayleigh quotient is assembled by quadrature from the
explicit l-dependent numerator, boundary operators are evaluated from their
closed forms, and the PDE residual applies the radial bi-Laplacian to
series-evaluated derivatives.  Agreement between these checks and the
W-root route is the artifact's two-path guarantee.

The Rayleigh-numerator integrand carries 1/r^4 factors that cancel only in
combination.  With g = R/r, g' = (R' - g)/r the angular part regroups
exactly as

    (k-1)(k-d+1) g^2/r^2 + 2(d-1-k) g g'/r + (2k+d-1) g'^2,

whose first two coefficients vanish identically at l = 1 (k = d-1); the
regrouped form is cancellation-safe on all of (0, 1] and is used for every
l >= 1.  l = 0 keeps the direct form (R'' ^2 + (d-1)(R'/r)^2 + tau R'^2),
which has no cancelling singular parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bessel import (
    DEFAULT_POLICY,
    DimensionContext,
    SeriesPolicy,
    p11,
    series_coeffs,
    ultra_i_deriv,
    ultra_i_scaled,
    ultra_j_deriv,
)
from .errors import DomainError, QuadratureConvergenceError
from .modes import RadialProfile
from .quadrature import DEFAULT_RULE, QuadratureRule
from .spectrum import SpectrumEntry, W

__all__ = [
    "ResidualReport",
    "LemmaVerdict",
    "rayleigh_numerator",
    "rayleigh_denominator",
    "rayleigh_quotient",
    "numerator_monotonicity",
    "boundary_residuals",
    "pde_residual",
    "residual_report",
    "lemma_suite",
]


@dataclass(frozen=True)
class ResidualReport:
    """Relative residuals of one mode; None marks a field not yet computed."""

    m_residual: float
    v_residual: float
    pde_residual: Optional[float] = None
    rayleigh_gap: Optional[float] = None

    def __post_init__(self):
        for name in ("m_residual", "v_residual", "pde_residual", "rayleigh_gap"):
            val = getattr(self, name)
            if val is not None and not (math.isfinite(val) and val >= 0.0):
                raise DomainError(f"{name} must be finite and nonnegative, got {val}")


@dataclass(frozen=True)
class LemmaVerdict:
    """Grid-verification verdict; margin > 0 means the strict claim held
    (boundary-attaining bounds pass at margin == 0)."""

    name: str
    dimension: int
    passed: bool
    margin: float
    worst_z: float
    n_points: int


# ---------------------------------------------------------------------------
# Rayleigh quotient machinery


def _numerator_value(profile, ctx: DimensionContext, l: int, tau: float,
                     rule: QuadratureRule) -> float:
    d = ctx.d
    k = float(l * (l + d - 2))
    r = rule.nodes
    r0 = np.asarray(profile(r, 0), dtype=float)
    r1 = np.asarray(profile(r, 1), dtype=float)
    r2 = np.asarray(profile(r, 2), dtype=float)
    if l == 0:
        integrand = r2 ** 2 + (d - 1) * (r1 / r) ** 2 + tau * r1 ** 2
    else:
        g = r0 / r
        gp = (r1 - g) / r
        angular = ((k - 1.0) * (k - d + 1.0) * (g / r) ** 2
                   + 2.0 * (d - 1.0 - k) * g * gp / r
                   + (2.0 * k + d - 1.0) * gp ** 2)
        integrand = r2 ** 2 + angular + tau * (r1 ** 2 + k * g ** 2)
    return rule.integrate_values(integrand * r ** (d - 1))


def rayleigh_numerator(profile, ctx: DimensionContext, l: int, tau: float,
                       rule: QuadratureRule = DEFAULT_RULE,
                       refine: bool = True) -> float:
    """Quadrature value of N[R Y_l] = int |D^2 u|^2 + tau |D u|^2.

    profile is a callable (r, m) -> m-th derivative, defined on (0, 1].
    With refine=True the rule is doubled once and a relative change above
    1e-6 raises QuadratureConvergenceError (guards divergent integrands).
    """
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau}")
    coarse = _numerator_value(profile, ctx, l, tau, rule)
    if not refine:
        return coarse
    fine = _numerator_value(profile, ctx, l, tau, rule.refined())
    if abs(fine - coarse) > 1e-6 * max(abs(fine), 1e-300):
        raise QuadratureConvergenceError(
            f"numerator quadrature did not converge: {coarse} -> {fine} "
            f"(l={l}, d={ctx.d})"
        )
    return fine


def rayleigh_denominator(profile, ctx: DimensionContext,
                         rule: QuadratureRule = DEFAULT_RULE) -> float:
    r = rule.nodes
    r0 = np.asarray(profile(r, 0), dtype=float)
    return rule.integrate_values(r0 ** 2 * r ** (ctx.d - 1))


def rayleigh_quotient(mode, radius: float = 1.0,
                      rule: QuadratureRule = DEFAULT_RULE,
                      policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Q[u] by quadrature; contract: equals mode.omega within the combined
    root/quadrature tolerance.  Never touches the determinant W."""
    params = mode.params if isinstance(mode, SpectrumEntry) else mode
    if params is None:
        return 0.0  # constant mode: all numerator terms vanish identically
    profile = RadialProfile(params, 1.0, policy)
    tension = params.b ** 2 - params.a ** 2
    num = rayleigh_numerator(profile, params.dim, params.l, tension, rule)
    den = rayleigh_denominator(profile, params.dim, rule)
    return (num / den) / radius ** 4


def numerator_monotonicity(profile, ctx: DimensionContext, tau: float,
                           l_range: Sequence[int],
                           rule: QuadratureRule = DEFAULT_RULE):
    """N[R Y_l] over l_range for a fixed profile, single fixed rule.

    No refinement guard: for profiles that do not vanish fast enough at the
    origin the integral diverges for l >= 2 and only the fixed-rule value is
    well-defined (the integrand is pointwise increasing in l either way).
    """
    return [rayleigh_numerator(profile, ctx, l, tau, rule, refine=False)
            for l in l_range]


# ---------------------------------------------------------------------------
# boundary and PDE residuals


def boundary_residuals(mode, policy: SeriesPolicy = DEFAULT_POLICY) -> ResidualReport:
    """Relative residuals of the two natural boundary conditions at r = R.

    M: a^2 j_l''(a) + gamma b^2 i_l''(b) (zero by the gamma construction).
    V: the closed forms from the Helmholtz factorization,
       V j_l(a) = tau a j_l'(a) + k (a j_l'(a) - j_l(a)) + a^3 j_l'(a),
       V i_l(b) = tau b i_l'(b) + k (b i_l'(b) - i_l(b)) - b^3 i_l'(b);
    third derivatives never appear.  Both residuals are scaled by the largest
    participating term.
    """
    params = mode.params if isinstance(mode, SpectrumEntry) else mode
    if params is None:
        return ResidualReport(0.0, 0.0)
    ctx, l = params.dim, params.l
    a, b, gs = params.a, params.b, params.gamma_scaled
    k = float(params.k_sep)
    tension = b * b - a * a

    mj = a * a * ultra_j_deriv(ctx, l, a, 2, policy)
    mi = gs * b * b * ultra_i_scaled(ctx, l, b, 2, policy)
    m_res = abs(mj + mi) / max(abs(mj), abs(mi), 1e-300)

    ja = ultra_j_deriv(ctx, l, a, 0, policy)
    jpa = ultra_j_deriv(ctx, l, a, 1, policy)
    ib = ultra_i_scaled(ctx, l, b, 0, policy)
    ipb = ultra_i_scaled(ctx, l, b, 1, policy)
    vj = tension * a * jpa + k * (a * jpa - ja) + a ** 3 * jpa
    vi = gs * (tension * b * ipb + k * (b * ipb - ib) - b ** 3 * ipb)
    v_res = abs(vj + vi) / max(abs(vj), abs(vi), 1e-300)
    return ResidualReport(m_residual=m_res, v_residual=v_res)


def pde_residual(mode, grid=None, policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """sup over the grid of |Lap^2 R - tau Lap R - omega R| relative to
    omega |R| (floored at 1% of the profile's sup to keep interior zeros of
    R from inflating the ratio); unit-ball variables."""
    params = mode.params if isinstance(mode, SpectrumEntry) else mode
    if params is None:
        return 0.0
    rho = np.asarray(grid, dtype=float) if grid is not None \
        else np.linspace(0.05, 1.0, 64)
    if np.any(rho <= 0.0) or np.any(rho > 1.0 + 1e-12):
        raise DomainError("pde grid must lie inside (0, 1]")
    d = params.dim.d
    k = float(params.k_sep)
    tension = params.b ** 2 - params.a ** 2
    omega_unit = (params.a * params.b) ** 2
    profile = RadialProfile(params, 1.0, policy)
    f0, f1, f2, f3, f4 = (np.asarray(profile(rho, m), dtype=float)
                          for m in range(5))
    lap = f2 + (d - 1) / rho * f1 - k / rho ** 2 * f0
    lap1 = (f3 + (d - 1) / rho * f2 - (d - 1 + k) / rho ** 2 * f1
            + 2.0 * k / rho ** 3 * f0)
    lap2 = (f4 + (d - 1) / rho * f3 - (2.0 * (d - 1) + k) / rho ** 2 * f2
            + (2.0 * (d - 1) + 4.0 * k) / rho ** 3 * f1
            - 6.0 * k / rho ** 4 * f0)
    bilap = lap2 + (d - 1) / rho * lap1 - k / rho ** 2 * lap
    resid = np.abs(bilap - tension * lap - omega_unit * f0)
    floor = 0.01 * np.max(np.abs(f0))
    denom = omega_unit * np.maximum(np.abs(f0), floor)
    return float(np.max(resid / denom))


def residual_report(mode, radius: float = 1.0,
                    rule: QuadratureRule = DEFAULT_RULE, grid=None,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> ResidualReport:
    """Full per-mode report: boundary residuals, PDE residual, Rayleigh gap."""
    params = mode.params if isinstance(mode, SpectrumEntry) else mode
    if params is None:
        return ResidualReport(0.0, 0.0, 0.0, 0.0)
    bc = boundary_residuals(params, policy)
    pde = pde_residual(params, grid, policy)
    q = rayleigh_quotient(params, radius, rule, policy)
    gap = abs(q - params.omega) / abs(params.omega)
    return ResidualReport(
        m_residual=bc.m_residual,
        v_residual=bc.v_residual,
        pde_residual=pde,
        rayleigh_gap=gap,
    )


# ---------------------------------------------------------------------------
# lemma suite


def _interior_grid(hi: float, n: int) -> np.ndarray:
    return np.linspace(0.0, hi, n + 1)[1:]


def lemma_suite(ctx: DimensionContext, n_points: int = 1000,
                taus=(0.1, 1.0, 10.0, 100.0),
                policy: SeriesPolicy = DEFAULT_POLICY):
    """Grid verdicts for the sign/bound facts underpinning the fundamental-
    mode argument; failures are report entries, not exceptions."""
    d = ctx.d
    p = p11(ctx)
    verdicts = []

    def add(name, values, grid, strict=True):
        values = np.asarray(values, dtype=float)
        worst = int(np.argmin(values))
        margin = float(values[worst])
        passed = margin > 0.0 if strict else margin >= 0.0
        verdicts.append(LemmaVerdict(name, d, bool(passed), margin,
                                     float(grid[worst]), len(grid)))

    z_incl = _interior_grid(p, n_points)          # (0, p11]
    z_excl = z_incl[:-1]                          # (0, p11)

    for l in range(1, 6):
        add(f"j_{l} > 0 on (0, p11]",
            ultra_j_deriv(ctx, l, z_incl, 0, policy), z_incl)
    add("j_1' > 0 on (0, p11)",
        ultra_j_deriv(ctx, 1, z_excl, 1, policy), z_excl)
    add("j_2' > 0 on (0, p11]",
        ultra_j_deriv(ctx, 2, z_incl, 1, policy), z_incl)
    add("j_1'' < 0 on (0, p11]",
        -ultra_j_deriv(ctx, 1, z_incl, 2, policy), z_incl)
    add("j_1'''' > 0 on (0, p11]",
        ultra_j_deriv(ctx, 1, z_incl, 4, policy), z_incl)

    z_dom = _interior_grid(12.0, max(200, n_points // 2))
    dom_min, dom_where = math.inf, 0.0
    for l in range(0, 4):
        for m in range(0, 5):
            gap = (ultra_i_deriv(ctx, l, z_dom, m, policy)
                   - np.abs(ultra_j_deriv(ctx, l, z_dom, m, policy)))
            i = int(np.argmin(gap))
            if gap[i] < dom_min:
                dom_min, dom_where = float(gap[i]), float(z_dom[i])
    verdicts.append(LemmaVerdict("|j_l^(m)| < i_l^(m) for z > 0, l<=3, m<=4",
                                 d, dom_min > 0.0, dom_min, dom_where,
                                 len(z_dom)))

    coeffs = series_coeffs(ctx, 3)
    d1, d2 = coeffs.d_k[0], coeffs.d_k[1]
    zj = np.linspace(0.0, math.sqrt(3.0 * (d + 2) / (d + 5)), n_points)
    add("-d1 z + d2 z^3 >= j_1'' on [0, sqrt(3(d+2)/(d+5))]",
        (-d1 * zj + d2 * zj ** 3) - ultra_j_deriv(ctx, 1, zj, 2, policy),
        zj, strict=False)
    zi = np.linspace(0.0, math.sqrt(3.0), n_points)
    add("d1 z + (6/5) d2 z^3 >= i_1'' on [0, sqrt(3)]",
        (d1 * zi + 1.2 * d2 * zi ** 3) - ultra_i_deriv(ctx, 1, zi, 2, policy),
        zi, strict=False)

    a_grid = _interior_grid(p, max(500, n_points // 2))[:-1]  # (0, p11)
    for tau in taus:
        add(f"W_0 > 0 on (0, p11), tau={tau}",
            W(ctx, 0, float(tau), a_grid, policy), a_grid)

    return verdicts
