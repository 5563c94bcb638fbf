"""Eigenfunction construction: u = R_l(r) Y_l(theta_hat).

Radial part R_l(r) = j_l(a r/R) + gamma i_l(b r/R) with derivatives to order
4, evaluated through the scaled i-route (gamma_scaled e^(z-b)) so large
tensions never overflow.  Angular factors: cos/sin pairs on the circle,
real-form associated-Legendre harmonics on the 2-sphere (complex convention
behind a flag), zonal Gegenbauer harmonics for d >= 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy.special import eval_gegenbauer, lpmv, sph_harm_y

from .bessel import DEFAULT_POLICY, DimensionContext, SeriesPolicy, ultra_i_scaled, ultra_j_deriv
from .errors import DomainError, UnsupportedRangeError
from .quadrature import QuadratureRule
from .spectrum import ModeParams, SpectrumEntry

__all__ = [
    "RadialProfile",
    "AngularFactor",
    "GridSpec",
    "ModeGrid",
    "radial_profile",
    "angular_eval",
    "sample_mode",
]


@dataclass(frozen=True)
class RadialProfile:
    """Callable radial factor; (r, m) -> m-th derivative of R_l at r in [0, R].

    gamma i_l^(m)(b r/R) is assembled as gamma_scaled * e^(z-b) * e^(-z) i^(m)(z)
    with z = b r/R <= b, so no intermediate quantity overflows.
    """

    mode: ModeParams
    radius: float
    policy: SeriesPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if not self.radius > 0.0:
            raise DomainError(f"radius must be positive, got {self.radius}")

    def __call__(self, r, m: int = 0):
        mode = self.mode
        scalar = not isinstance(r, (np.ndarray, list, tuple))
        r = np.asarray(r, dtype=float)
        if np.any(r < 0.0) or np.any(r > self.radius * (1.0 + 1e-12)):
            raise DomainError("radial argument outside [0, R]")
        zj = mode.a * r / self.radius
        zi = mode.b * r / self.radius
        jpart = (mode.a / self.radius) ** m * ultra_j_deriv(
            mode.dim, mode.l, zj, m, self.policy
        )
        ipart = (
            mode.gamma_scaled
            * (mode.b / self.radius) ** m
            * ultra_i_scaled(mode.dim, mode.l, zi, m, self.policy)
            * np.exp(zi - mode.b)
        )
        out = jpart + ipart
        return float(out) if scalar else out


def radial_profile(mode: ModeParams, radius: float = 1.0,
                   policy: SeriesPolicy = DEFAULT_POLICY) -> RadialProfile:
    return RadialProfile(mode=mode, radius=radius, policy=policy)


def _sphere_area(n: int) -> float:
    """Surface area of the unit n-sphere S^n embedded in R^(n+1)."""
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


@lru_cache(maxsize=None)
def _zonal_norm(d: int, l: int) -> float:
    """1 / L2-norm of C_l^((d-2)/2)(cos theta_1) over S^(d-1), by quadrature."""
    alpha = (d - 2) / 2.0
    rule = QuadratureRule.gauss_legendre(64 + 8 * l)
    theta = math.pi * rule.nodes
    vals = eval_gegenbauer(l, alpha, np.cos(theta)) ** 2 * np.sin(theta) ** (d - 2)
    integral = math.pi * float(np.dot(rule.weights, vals)) * _sphere_area(d - 2)
    return 1.0 / math.sqrt(integral)


@dataclass(frozen=True)
class AngularFactor:
    """Normalized spherical harmonic factor Y_l.

    variant: d=2 -> "cos" | "sin"; d=3 -> integer order m in -l..l (or
    "zonal", an alias for m=0); d>=4 -> "zonal" only.  complex_form switches
    the d=3 factor to the complex exponential convention (interoperability
    only; excluded from the invariant suites).
    """

    dim: DimensionContext
    l: int
    variant: Union[str, int] = "zonal"
    complex_form: bool = False

    def __post_init__(self):
        d, l, v = self.dim.d, self.l, self.variant
        if l < 0:
            raise DomainError(f"angular order must be >= 0, got {l}")
        if d == 2:
            if v not in ("cos", "sin", "zonal"):
                raise DomainError(f"d=2 variant must be 'cos' or 'sin', got {v!r}")
        elif d == 3:
            if v == "zonal":
                v = 0
            if not isinstance(v, int) or abs(v) > l:
                raise DomainError(f"d=3 variant must be an order |m| <= {l}, got {v!r}")
            object.__setattr__(self, "variant", v)
        else:
            if v != "zonal":
                raise UnsupportedRangeError(
                    f"only zonal harmonics are supported for d={d} >= 4"
                )
        if self.complex_form and d != 3:
            raise UnsupportedRangeError("complex convention exists only for d=3")

    @property
    def normalization(self) -> float:
        d, l = self.dim.d, self.l
        if d == 2:
            return 1.0 / math.sqrt(2.0 * math.pi) if l == 0 \
                else 1.0 / math.sqrt(math.pi)
        if d == 3:
            m = abs(int(self.variant))
            base = math.sqrt(
                (2 * l + 1)
                / (4.0 * math.pi)
                * math.factorial(l - m)
                / math.factorial(l + m)
            )
            return base if (m == 0 or self.complex_form) else math.sqrt(2.0) * base
        return _zonal_norm(d, l)


def _split_theta_phi(theta_hat):
    if isinstance(theta_hat, (tuple, list)) and len(theta_hat) == 2:
        return np.asarray(theta_hat[0], dtype=float), np.asarray(theta_hat[1], dtype=float)
    return np.asarray(theta_hat, dtype=float), None


def angular_eval(factor: AngularFactor, theta_hat):
    """Value of the normalized harmonic at angular coordinates.

    d=2: theta_hat is the angle on the circle.  d=3: (theta, phi) with polar
    theta in [0, pi] (a bare theta means phi = 0).  d>=4: the polar angle.
    """
    d, l = factor.dim.d, factor.l
    if d == 2:
        theta = np.asarray(theta_hat, dtype=float)
        if l == 0:
            out = np.full_like(theta, factor.normalization)
        elif factor.variant == "sin":
            out = np.sin(l * theta) * factor.normalization
        else:
            out = np.cos(l * theta) * factor.normalization
        return out if out.ndim else float(out)
    if d == 3:
        theta, phi = _split_theta_phi(theta_hat)
        if phi is None:
            phi = np.zeros_like(theta)
        m = int(factor.variant)
        if factor.complex_form:
            out = sph_harm_y(l, m, theta, phi)
            return out if np.ndim(out) else complex(out)
        am = abs(m)
        leg = lpmv(am, l, np.cos(theta))
        if m > 0:
            out = factor.normalization * leg * np.cos(am * phi)
        elif m < 0:
            out = factor.normalization * leg * np.sin(am * phi)
        else:
            out = factor.normalization * leg
        return out if np.ndim(out) else float(out)
    theta = np.asarray(theta_hat, dtype=float)
    out = factor.normalization * eval_gegenbauer(l, (d - 2) / 2.0, np.cos(theta))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GridSpec:
    """Tensor sampling resolution: nr radial x ntheta angular nodes."""

    nr: int
    ntheta: int

    def __post_init__(self):
        if self.nr < 2 or self.ntheta < 2:
            raise DomainError("grid resolution must be >= 2 per axis")


@dataclass(frozen=True)
class ModeGrid:
    radial_nodes: np.ndarray
    angular_nodes: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (len(self.radial_nodes), len(self.angular_nodes)):
            raise DomainError("value matrix must be nr x ntheta")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("mode grid contains non-finite values")


def sample_mode(mode: Union[ModeParams, SpectrumEntry], radius: float,
                grid: GridSpec, factor: Optional[AngularFactor] = None,
                policy: SeriesPolicy = DEFAULT_POLICY) -> ModeGrid:
    """u(r, theta) = radial x angular on the tensor grid.

    The angular axis is the circle angle for d=2 and the polar angle for
    d >= 3 (azimuthal dependence of the d=3 m-variants is available through
    angular_eval directly).
    """
    params = mode.params if isinstance(mode, SpectrumEntry) else mode
    if params is None:
        raise DomainError(
            "the omega=0 entry has no ModeParams; use sample_constant_mode"
        )
    return _sample(params, radius, grid, factor, policy)


def sample_constant_mode(dim: DimensionContext, radius: float,
                         grid: GridSpec) -> ModeGrid:
    """Grid of the omega = 0 eigenfunction (the normalized constant)."""
    factor = AngularFactor(dim, 0, "zonal" if dim.d != 2 else "cos")
    r = np.linspace(0.0, radius, grid.nr)
    theta = _angular_nodes(dim.d, grid.ntheta)
    value = factor.normalization
    values = np.full((grid.nr, grid.ntheta), value)
    return ModeGrid(
        radial_nodes=r,
        angular_nodes=theta,
        values=values,
        metadata={"omega": 0.0, "l": 0, "normalization": factor.normalization,
                  "variant": "constant"},
    )


def _angular_nodes(d: int, ntheta: int) -> np.ndarray:
    if d == 2:
        return np.linspace(0.0, 2.0 * math.pi, ntheta, endpoint=False)
    return np.linspace(0.0, math.pi, ntheta)


def _sample(params: ModeParams, radius: float, grid: GridSpec,
            factor: Optional[AngularFactor], policy: SeriesPolicy) -> ModeGrid:
    d = params.dim.d
    if factor is None:
        factor = AngularFactor(params.dim, params.l,
                               "cos" if d == 2 else ("zonal" if d > 3 else 0))
    if factor.l != params.l or factor.dim != params.dim:
        raise DomainError("angular factor order/dimension must match the mode")
    profile = RadialProfile(params, radius, policy)
    r = np.linspace(0.0, radius, grid.nr)
    theta = _angular_nodes(d, grid.ntheta)
    radial = profile(r)
    angular = angular_eval(factor, theta)
    values = np.outer(radial, angular)
    return ModeGrid(
        radial_nodes=r,
        angular_nodes=theta,
        values=values,
        metadata={
            "omega": params.omega,
            "l": params.l,
            "a": params.a,
            "b": params.b,
            "gamma": params.gamma,
            "variant": str(factor.variant),
            "normalization": factor.normalization,
        },
    )
