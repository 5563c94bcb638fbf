"""Ultraspherical Bessel kernel.

Public evaluation surface for the dimension-shifted Bessel functions
j_l(z) = z^(-s) J_(s+l)(z) and i_l(z) = z^(-s) I_(s+l)(z), s = (d-2)/2,
their derivatives to order 4, the first zero p_{1,1} of j_1', the
Lorch-Szego zero brackets, and the d_k/c_k coefficients of the j_1''/i_1''
series bounds.

All operations are pure functions of their arguments; cached values
(coefficient seeds, p_{1,1} per dimension) are read-only after first use, so
unlimited concurrent invocation is safe.  Same inputs and the same
SeriesPolicy yield bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BracketError, DomainError, UnsupportedRangeError
from .series import (
    DEFAULT_POLICY,
    SeriesPolicy,
    UNSCALED_Z_MAX,
    gamma_value,
    i_scaled_eval,
    series_eval,
)

__all__ = [
    "DimensionContext",
    "BesselOrder",
    "SeriesCoefficients",
    "SeriesPolicy",
    "DEFAULT_POLICY",
    "UNSCALED_Z_MAX",
    "ultra_j",
    "ultra_i",
    "ultra_j_deriv",
    "ultra_i_deriv",
    "ultra_i_scaled",
    "p11",
    "pl1_bracket",
    "series_coeffs",
]


@dataclass(frozen=True)
class DimensionContext:
    """Ambient dimension d >= 2 and the derived order shift s = (d-2)/2."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.d!r}")

    @property
    def s(self) -> float:
        return (self.d - 2) / 2

    def order(self, l: int) -> "BesselOrder":
        return BesselOrder(l, l * (l + self.d - 2))


@dataclass(frozen=True)
class BesselOrder:
    """Angular order l with its separation constant k = l(l+d-2)."""

    l: int
    k_sep: int

    def __post_init__(self):
        if self.l < 0:
            raise DomainError(f"angular order must be >= 0, got {self.l}")
        if (self.k_sep == 0) != (self.l == 0):
            raise DomainError(
                f"separation constant {self.k_sep} inconsistent with l={self.l}"
            )


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients d_k of the j_1''/i_1'' expansions and ratios c_k.

    d_k = (2k+1) 2^(1-2k-d/2) / ((k-1)! Gamma(k+1+d/2)), k >= 1, so that
    j_1''(z) = sum_k (-1)^k d_k z^(2k-1); c_k = d_{k+1}/d_k.
    """

    d_k: tuple
    c_k: tuple


def _order_int(l) -> int:
    if isinstance(l, BesselOrder):
        return l.l
    l = int(l)
    if l < 0:
        raise DomainError(f"angular order must be >= 0, got {l}")
    return l


def ultra_j(ctx: DimensionContext, l, z, policy: SeriesPolicy = DEFAULT_POLICY):
    """j_l(z) by the ascending series; equals classical J_l(z) for d=2."""
    return series_eval(ctx.d, _order_int(l), z, 0, -1, policy)


def ultra_i(ctx: DimensionContext, l, z, policy: SeriesPolicy = DEFAULT_POLICY):
    """i_l(z) by the ascending series (all-positive terms)."""
    return series_eval(ctx.d, _order_int(l), z, 0, 1, policy)


def _check_m(m: int) -> int:
    m = int(m)
    if not 0 <= m <= 4:
        raise DomainError(f"derivative order must be in 0..4, got {m}")
    return m


def ultra_j_deriv(ctx: DimensionContext, l, z, m,
                  policy: SeriesPolicy = DEFAULT_POLICY):
    """m-th derivative of j_l, term-wise differentiated series (m <= 4)."""
    return series_eval(ctx.d, _order_int(l), z, _check_m(m), -1, policy)


def ultra_i_deriv(ctx: DimensionContext, l, z, m,
                  policy: SeriesPolicy = DEFAULT_POLICY):
    """m-th derivative of i_l; positive for z > 0."""
    return series_eval(ctx.d, _order_int(l), z, _check_m(m), 1, policy)


def ultra_i_scaled(ctx: DimensionContext, l, z, m=0,
                   policy: SeriesPolicy = DEFAULT_POLICY):
    """e^(-z) i_l^(m)(z) without intermediate overflow (for large arguments)."""
    return i_scaled_eval(ctx.d, _order_int(l), z, _check_m(m), policy)


@lru_cache(maxsize=None)
def _p11_cached(d: int, tol: float) -> float:
    ctx = DimensionContext(d)
    lo = math.sqrt(d)
    hi = math.sqrt(d + 2.0)
    flo = ultra_j_deriv(ctx, 1, lo, 1)
    fhi = ultra_j_deriv(ctx, 1, hi, 1)
    if not (flo > 0.0 and fhi < 0.0):
        raise BracketError(
            f"proven bracket (sqrt({d}), sqrt({d + 2})) for p11 failed: "
            f"j1'({lo})={flo}, j1'({hi})={fhi}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = ultra_j_deriv(ctx, 1, mid, 1)
        if fm == 0.0:
            return mid
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def p11(ctx: DimensionContext, tol: float = 1e-12) -> float:
    """First positive zero of j_1', bisected on the proven bracket
    sqrt(d) < p_{1,1} < sqrt(d+2)."""
    return _p11_cached(ctx.d, float(tol))


def pl1_bracket(ctx: DimensionContext, l: int):
    """Lorch-Szego bracket (lo, hi) with lo < p_{l,1} < hi.

    General bound for d >= 3, l >= 1:
        l(d+2l)(d+2l+2)/(d+4l+2) < p_{l,1}^2 < l(d+2l);
    for d = 2 only the specialized l = 1 bound d < p^2 < d+2 is available.
    """
    l = _order_int(l)
    if l < 1:
        raise DomainError(f"zero bracket requires l >= 1, got {l}")
    d = ctx.d
    if d == 2:
        if l == 1:
            return math.sqrt(2.0), math.sqrt(4.0)
        raise UnsupportedRangeError(
            f"no proven p_(l,1) bracket for d=2 with l={l} >= 2"
        )
    lo_sq = l * (d + 2 * l) * (d + 2 * l + 2) / (d + 4 * l + 2)
    hi_sq = float(l * (d + 2 * l))
    return math.sqrt(lo_sq), math.sqrt(hi_sq)


def series_coeffs(ctx: DimensionContext, k_max: int) -> SeriesCoefficients:
    """d_k and c_k for k = 1..k_max."""
    if k_max < 3:
        raise DomainError(f"k_max must be >= 3, got {k_max}")
    d = ctx.d
    d_k = []
    for k in range(1, k_max + 1):
        d_k.append((2 * k + 1) * math.ldexp(1.0, 1 - 2 * k) * 2.0 ** (-d / 2.0)
                   / (math.factorial(k - 1) * gamma_value(k + 1 + d / 2.0)))
    c_k = [(2 * k + 3) / (2 * k * (2 * k + 1) * (2 * k + d + 2))
           for k in range(1, k_max + 1)]
    return SeriesCoefficients(d_k=tuple(d_k), c_k=tuple(c_k))
