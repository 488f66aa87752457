"""Hermitian conjugation relative to a metric ``Theta``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotPositiveDefinite
from .matkernel import (
    Tolerance,
    adjoint,
    as_matrix,
    check_same_dim,
    frobenius,
    hermiticity_residual,
    inverse,
    min_hermitian_eigenvalue,
)


@dataclass(frozen=True, eq=False)
class MetricContext:
    theta: np.ndarray
    theta_inv: np.ndarray

    @classmethod
    def from_metric(cls, theta, tol: Tolerance | None = None) -> "MetricContext":
        tol = tol or Tolerance.default()
        theta = as_matrix(theta, "metric")
        res = hermiticity_residual(theta)
        if res > tol.rel_eq:
            raise NotHermitian(f"metric hermiticity residual {res:.3g}")
        theta = 0.5 * (theta + adjoint(theta))
        lo = min_hermitian_eigenvalue(theta)
        if lo <= 0:
            raise NotPositiveDefinite(f"metric minimum eigenvalue {lo:.3g}")
        return cls(theta, inverse(theta, tol))

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True)
class ResidualReport:
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold

    def __bool__(self):
        return self.passed


def sharp(A, ctx: MetricContext) -> np.ndarray:
    """``Theta^{-1} A^dagger Theta``."""
    A = as_matrix(A)
    check_same_dim(A, ctx.theta)
    return ctx.theta_inv @ adjoint(A) @ ctx.theta


def quasi_hermiticity_residual(A, theta) -> float:
    """``||A^dagger Theta - Theta A||_F / ||Theta A||_F``; a zero ``A`` gives 0."""
    TA = theta @ A
    scale = frobenius(TA)
    if scale == 0.0:
        return 0.0
    return frobenius(adjoint(A) @ theta - TA) / scale


def is_quasi_hermitian(A, ctx: MetricContext, tol: Tolerance | None = None) -> ResidualReport:
    tol = tol or Tolerance.default()
    A = as_matrix(A)
    check_same_dim(A, ctx.theta)
    return ResidualReport(quasi_hermiticity_residual(A, ctx.theta), tol.rel_eq)


def check_observable(L, ctx: MetricContext, tol: Tolerance | None = None) -> ResidualReport:
    """Admissibility of a candidate observable: it must be ``Theta``-quasi-Hermitian."""
    return is_quasi_hermitian(L, ctx, tol)


def transported_metric(theta, V, tol: Tolerance | None = None) -> np.ndarray:
    """``V^{-dagger} Theta V^{-1}``, the metric that makes ``V A V^{-1}`` quasi-Hermitian."""
    Vi = inverse(V, tol)
    return adjoint(Vi) @ theta @ Vi
