"""Gauss-Legendre quadrature on the open interval (0, 1).

Nodes are strictly interior, which matters here: the Rayleigh-numerator
integrands carry 1/r^4 factors whose singular parts cancel only in
combination, so r = 0 must never be evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-type rule: exact for polynomials up to degree 2*order - 1."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise DomainError("node/weight count must equal order")
        if not (np.all(self.nodes > 0.0) and np.all(self.nodes < 1.0)):
            raise DomainError("quadrature nodes must lie strictly inside (0, 1)")
        if not np.all(self.weights > 0.0):
            raise DomainError("quadrature weights must be positive")

    @classmethod
    def gauss_legendre(cls, order: int) -> "QuadratureRule":
        if order < 2:
            raise DomainError(f"order must be >= 2, got {order}")
        x, w = np.polynomial.legendre.leggauss(order)
        return cls(nodes=0.5 * (x + 1.0), weights=0.5 * w, order=order)

    def refined(self) -> "QuadratureRule":
        return QuadratureRule.gauss_legendre(2 * self.order)

    def integrate_values(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def integrate(self, f) -> float:
        return self.integrate_values(f(self.nodes))


DEFAULT_RULE = QuadratureRule.gauss_legendre(64)
