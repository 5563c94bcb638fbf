"""Eigenvalue machinery for the free plate on a ball.

A positive number is an eigenvalue of order l exactly when the boundary
determinant

    W_l(a) = a^2 j_l''(a) (-a^2 b i_l'(b) + k (b i_l'(b) - i_l(b)))
           - b^2 i_l''(b) ( a b^2 j_l'(a) + k (a j_l'(a) - j_l(a)))

vanishes, where b = sqrt(a^2 + tau) and k = l(l+d-2) (unit ball; radii are
handled by the tension/eigenvalue scaling relations b^2-a^2 = R^2 tau,
a^2 b^2 = R^4 omega).  Every additive term of W is degree one in the i-type
factors, so evaluating with e^(-b)-scaled i-functions multiplies W by
e^(-b) > 0: roots and sign structure are preserved while tensions up to ~1e6
stay finite.  W here always denotes that scaled determinant.

Root scanning is a uniform sign-change scan refined by bisection; tangential
(double) roots are invisible to it — recorded in table metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bessel import (
    DEFAULT_POLICY,
    UNSCALED_Z_MAX,
    BesselOrder,
    DimensionContext,
    SeriesPolicy,
    p11,
    ultra_i_scaled,
    ultra_j_deriv,
)
from .errors import DomainError, InvariantViolationError, TensionMismatchError

__all__ = [
    "PlateProblem",
    "ModeParams",
    "RootScanConfig",
    "SpectrumEntry",
    "SpectrumTable",
    "split_omega",
    "omega_of",
    "gamma_of",
    "gamma_scaled_of",
    "W",
    "scan_roots",
    "eigenvalues",
    "fundamental",
    "fundamental_report",
    "rescale",
    "multiplicity",
]

DEFAULT_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class PlateProblem:
    """Physical instance: dimension, tension/rigidity ratio tau > 0, radius."""

    dim: DimensionContext
    tau: float
    radius: float = 1.0

    def __post_init__(self):
        if not self.tau > 0.0:
            raise DomainError(
                f"tau must be positive (free plate under tension), got {self.tau}"
            )
        if not self.radius > 0.0:
            raise DomainError(f"radius must be positive, got {self.radius}")

    @classmethod
    def create(cls, d: int, tau: float, radius: float = 1.0) -> "PlateProblem":
        return cls(DimensionContext(int(d)), float(tau), float(radius))

    @property
    def unit_tension(self) -> float:
        """Effective tension of the equivalent unit-ball problem, R^2 tau."""
        return self.radius * self.radius * self.tau


@dataclass(frozen=True)
class ModeParams:
    """One eigenvalue with its wavenumbers and coupling constant.

    a, b, gamma are the unit-ball quantities of the radial profile
    j_l(a r/R) + gamma i_l(b r/R); gamma_scaled = gamma e^b stays
    representable when b is large and gamma underflows.
    """

    dim: DimensionContext
    l: int
    a: float
    b: float
    gamma: float
    gamma_scaled: float
    omega: float
    w_residual: float = 0.0

    @property
    def order(self) -> BesselOrder:
        return self.dim.order(self.l)

    @property
    def k_sep(self) -> int:
        return self.l * (self.l + self.dim.d - 2)


@dataclass(frozen=True)
class RootScanConfig:
    """Scan ceiling, grid spacing and bisection tolerance on a."""

    a_max: float
    step: float
    root_tol: float = DEFAULT_ROOT_TOL

    def __post_init__(self):
        if not 0.0 < self.step < self.a_max:
            raise DomainError(
                f"need 0 < step < a_max, got step={self.step}, a_max={self.a_max}"
            )
        if not 0.0 < self.root_tol <= 1e-10 * self.a_max:
            raise DomainError(
                f"root_tol must lie in (0, 1e-10*a_max], got {self.root_tol}"
            )


@dataclass(frozen=True)
class SpectrumEntry:
    omega: float
    l: int
    multiplicity: int
    params: Optional[ModeParams]  # None for the constant omega=0 mode


@dataclass(frozen=True)
class SpectrumTable:
    entries: tuple
    problem: PlateProblem
    scan: RootScanConfig
    metadata: dict = field(default_factory=dict)


def split_omega(tau: float, omega: float):
    """Wavenumbers (a, b) with b^2-a^2 = tau and a^2 b^2 = omega (unit ball)."""
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau}")
    if not omega > 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    s = math.sqrt(0.25 * tau * tau + omega)
    b = math.sqrt(s + 0.5 * tau)
    # a = sqrt(omega)/b avoids the cancellation in sqrt(s - tau/2)
    return math.sqrt(omega) / b, b


def omega_of(a: float, tau: float) -> float:
    """Eigenvalue from a root of W: omega = a^2 (a^2 + tau), increasing in a."""
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau}")
    return (a * a) * (a * a + tau)


def gamma_scaled_of(ctx: DimensionContext, l: int, a: float, b: float,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """gamma e^b = -a^2 j_l''(a) / (b^2 e^(-b) i_l''(b)); i_l'' > 0 keeps it finite."""
    if not b > 0.0:
        raise DomainError(f"b must be positive, got {b}")
    mj = a * a * ultra_j_deriv(ctx, l, a, 2, policy)
    mi_scaled = b * b * ultra_i_scaled(ctx, l, b, 2, policy)
    return -mj / mi_scaled


def gamma_of(ctx: DimensionContext, l: int, a: float, b: float,
             policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Coupling constant gamma = -a^2 j_l''(a) / (b^2 i_l''(b))."""
    return gamma_scaled_of(ctx, l, a, b, policy) * math.exp(-b)


def _w_terms(ctx: DimensionContext, l: int, tau: float, a,
             policy: SeriesPolicy = DEFAULT_POLICY):
    """The two additive pieces of the e^(-b)-scaled determinant."""
    b = (a * a + tau) ** 0.5
    k = float(l * (l + ctx.d - 2))
    j0 = ultra_j_deriv(ctx, l, a, 0, policy)
    j1 = ultra_j_deriv(ctx, l, a, 1, policy)
    j2 = ultra_j_deriv(ctx, l, a, 2, policy)
    i0 = ultra_i_scaled(ctx, l, b, 0, policy)
    i1 = ultra_i_scaled(ctx, l, b, 1, policy)
    i2 = ultra_i_scaled(ctx, l, b, 2, policy)
    t1 = (a * a) * j2 * (-(a * a) * b * i1 + k * (b * i1 - i0))
    t2 = (b * b) * i2 * (a * b * b * j1 + k * (a * j1 - j0))
    return t1, t2


def W(ctx: DimensionContext, l: int, tau: float, a,
      policy: SeriesPolicy = DEFAULT_POLICY):
    """Scaled determinant e^(-b) W_l(a); zero exactly at the order-l eigenvalues."""
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau}")
    t1, t2 = _w_terms(ctx, l, tau, a, policy)
    return t1 - t2


def _w_residual(ctx, l, tau, a, policy=DEFAULT_POLICY) -> float:
    t1, t2 = _w_terms(ctx, l, tau, a, policy)
    scale = max(abs(t1), abs(t2))
    if scale == 0.0:
        return 0.0
    return abs(t1 - t2) / scale


def _bisect_root(ctx, l, tau, lo, hi, flo, tol, policy) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = W(ctx, l, tau, mid, policy)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(ctx: DimensionContext, l: int, tau: float, cfg: RootScanConfig,
               policy: SeriesPolicy = DEFAULT_POLICY):
    """Ascending sign-change roots of a -> W_l(a) on (0, a_max].

    Uniform grid at cfg.step plus a geometric prefix below the first grid
    point (guards a first root smaller than the step at tiny tension).
    Deterministic for fixed cfg; an empty list is a valid result.
    """
    prefix = cfg.step * 2.0 ** -np.arange(20, 0, -1, dtype=float)
    n = int(math.floor(cfg.a_max / cfg.step + 1e-9))
    uniform = cfg.step * np.arange(1, n + 1, dtype=float)
    grid = np.concatenate([prefix, uniform])
    vals = W(ctx, l, tau, grid, policy)
    roots = []
    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            if not roots or grid[i] - roots[-1] > cfg.root_tol:
                roots.append(float(grid[i]))
        elif (f1 != 0.0) and ((f0 > 0.0) != (f1 > 0.0)):
            roots.append(
                _bisect_root(ctx, l, tau, float(grid[i]), float(grid[i + 1]),
                             float(f0), cfg.root_tol, policy)
            )
    if len(vals) and vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def multiplicity(d: int, l: int) -> int:
    """Dimension of the space of degree-l spherical harmonics in d dimensions."""
    if l == 0:
        return 1
    if l == 1:
        return d
    return math.comb(l + d - 1, l) - math.comb(l + d - 3, l - 2)


def _mode_from_root(problem: PlateProblem, l: int, a: float,
                    policy: SeriesPolicy = DEFAULT_POLICY) -> ModeParams:
    T = problem.unit_tension
    b = math.sqrt(a * a + T)
    gs = gamma_scaled_of(problem.dim, l, a, b, policy)
    r4 = problem.radius ** 4
    return ModeParams(
        dim=problem.dim,
        l=l,
        a=a,
        b=b,
        gamma=gs * math.exp(-b),
        gamma_scaled=gs,
        omega=omega_of(a, T) / r4,
        w_residual=_w_residual(problem.dim, l, T, a, policy),
    )


def _zero_entry() -> SpectrumEntry:
    return SpectrumEntry(omega=0.0, l=0, multiplicity=1, params=None)


def eigenvalues(problem: PlateProblem, l_max: int, count: int,
                cfg: Optional[RootScanConfig] = None,
                policy: SeriesPolicy = DEFAULT_POLICY) -> SpectrumTable:
    """Sorted spectrum: omega = 0 plus the mapped roots of W_0..W_(l_max).

    With cfg=None the scan ceiling is extended until the requested count of
    entries is certified complete below it (any unscanned root would map to a
    larger eigenvalue, since omega increases with a).  Completeness holds only
    up to (a_max, l_max); both are recorded in the metadata.
    """
    if l_max < 1:
        raise DomainError(f"l_max must be >= 1, got {l_max}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    ctx = problem.dim
    T = problem.unit_tension
    r4 = problem.radius ** 4
    step = min(0.05, p11(ctx) / 50.0)
    adaptive = cfg is None
    if adaptive:
        a_max = 1.3 * p11(ctx)
        cfg = RootScanConfig(a_max=a_max, step=step, root_tol=DEFAULT_ROOT_TOL)
    # the j-series budget bounds how far the ceiling may grow
    a_cap = 0.999 * UNSCALED_Z_MAX

    for _ in range(60):
        found = []
        for l in range(l_max + 1):
            for a in scan_roots(ctx, l, T, cfg, policy):
                found.append((omega_of(a, T) / r4, l, a))
        found.sort(key=lambda t: (t[0], t[1]))
        entries = [_zero_entry()]
        for om, l, a in found:
            entries.append(
                SpectrumEntry(om, l, multiplicity(ctx.d, l),
                              _mode_from_root(problem, l, a, policy))
            )
        ceiling = omega_of(cfg.a_max, T) / r4
        certified = len(entries) >= count and entries[count - 1].omega < ceiling
        if certified or not adaptive or cfg.a_max >= a_cap:
            break
        cfg = RootScanConfig(a_max=min(1.6 * cfg.a_max, a_cap), step=cfg.step,
                             root_tol=cfg.root_tol)

    metadata = {
        "a_max": cfg.a_max,
        "step": cfg.step,
        "root_tol": cfg.root_tol,
        "l_max": l_max,
        "requested_count": count,
        "omega_ceiling": omega_of(cfg.a_max, T) / r4,
        "certified_complete": bool(
            len(entries) >= count and entries[count - 1].omega
            < omega_of(cfg.a_max, T) / r4
        ),
        "note": "complete only up to the scan ceiling and l_max; "
                "tangential (double) roots of W_l are invisible to sign scans",
    }
    return SpectrumTable(entries=tuple(entries[:count]), problem=problem,
                         scan=cfg, metadata=metadata)


def fundamental_report(problem: PlateProblem, l_guard: int = 6,
                       policy: SeriesPolicy = DEFAULT_POLICY):
    """Fundamental mode plus the cross-check verdicts that operationalize the
    fundamental-mode theorem (first W_1 root below every competitor)."""
    ctx = problem.dim
    T = problem.unit_tension
    p = p11(ctx)
    step = min(0.05, p / 50.0)
    cfg = RootScanConfig(a_max=p, step=step, root_tol=DEFAULT_ROOT_TOL)
    roots1 = scan_roots(ctx, 1, T, cfg, policy)
    checks = {"l_equals_1": bool(roots1), "p11": p}
    a1 = roots1[0] if roots1 else math.nan
    checks["a1"] = a1
    checks["a1_below_p11"] = bool(roots1) and a1 < p

    # W_0 must stay positive on (0, p11) — no smaller radial root
    grid = np.linspace(p / 500.0, p * (1.0 - 1e-12), 500)
    w0 = W(ctx, 0, T, grid, policy)
    checks["w0_positive_on_bracket"] = bool(np.all(w0 > 0.0))
    roots0 = scan_roots(ctx, 0, T, cfg, policy)
    checks["w0_first_root_exceeds_a1"] = (not roots0) or (roots0[0] > a1)

    higher_ok = True
    if roots1:
        for l in range(2, l_guard + 1):
            sub = RootScanConfig(a_max=a1, step=min(step, a1 / 10.0),
                                 root_tol=min(DEFAULT_ROOT_TOL, 1e-11 * a1))
            if scan_roots(ctx, l, T, sub, policy):
                higher_ok = False
                break
    checks["higher_l_first_roots_exceed_a1"] = higher_ok
    checks["l_guard"] = l_guard

    ok = (checks["l_equals_1"] and checks["a1_below_p11"]
          and checks["w0_positive_on_bracket"]
          and checks["w0_first_root_exceeds_a1"] and higher_ok)
    if not ok:
        raise InvariantViolationError(
            f"fundamental-mode cross-checks failed (kernel bug?): {checks}"
        )
    return _mode_from_root(problem, 1, a1, policy), checks


def fundamental(problem: PlateProblem, l_guard: int = 6,
                policy: SeriesPolicy = DEFAULT_POLICY) -> ModeParams:
    """ModeParams of the fundamental tone omega_1 (always order l = 1)."""
    mode, _ = fundamental_report(problem, l_guard, policy)
    return mode


def rescale(unit_solution: ModeParams, problem: PlateProblem) -> ModeParams:
    """Map a unit-ball solution with tension R^2 tau to the ball of radius R:
    same (a, b, gamma, l), omega = a^2 b^2 / R^4."""
    if unit_solution.dim != problem.dim:
        raise TensionMismatchError(
            f"dimension mismatch: mode d={unit_solution.dim.d}, "
            f"problem d={problem.dim.d}"
        )
    T = problem.unit_tension
    have = unit_solution.b ** 2 - unit_solution.a ** 2
    if abs(have - T) > 1e-10 * max(T, 1.0):
        raise TensionMismatchError(
            f"unit solution has b^2-a^2={have}, expected R^2 tau={T}"
        )
    r4 = problem.radius ** 4
    return ModeParams(
        dim=unit_solution.dim,
        l=unit_solution.l,
        a=unit_solution.a,
        b=unit_solution.b,
        gamma=unit_solution.gamma,
        gamma_scaled=unit_solution.gamma_scaled,
        omega=(unit_solution.a ** 2) * (unit_solution.b ** 2) / r4,
        w_residual=unit_solution.w_residual,
    )
