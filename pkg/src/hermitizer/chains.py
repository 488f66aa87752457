"""Dyson-factor and metric-factor chains.

Both chains store their factors in *descending* index order,
``factors[0]`` being the factor with the highest index ``N``.  The
accessor :meth:`DysonChain.factor` takes the 1-based index used in the
product notation ``Omega = Omega_N ... Omega_1``.

The two chains are tied together by the cumulative products

    Y_j = (Omega_N ... Omega_j)^dagger (Omega_N ... Omega_j) = Z_N ... Z_j

so that ``Y_1`` is the full metric ``Theta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IllConditioned,
    IndexOutOfRange,
    NotPositiveDefinite,
    ValidationError,
)
from .matkernel import (
    Tolerance,
    adjoint,
    as_matrix,
    condition_number,
    frobenius,
    hermitian_sqrt,
    hermiticity_residual,
    min_hermitian_eigenvalue,
    product,
    solve,
    upper_cholesky,
)

FACTOR_ORDER = "descending"


def _as_factor_tuple(factors, what):
    mats = tuple(as_matrix(f, f"{what} factor") for f in factors)
    if not mats:
        raise ValidationError(f"{what} chain needs at least one factor")
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"{what} factors have different dimensions: {sorted(dims)}")
    for m in mats:
        m.setflags(write=False)
    return mats


class _Chain:
    factors: tuple

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return self.factors[0].shape[0]

    def factor(self, j: int) -> np.ndarray:
        """Factor with 1-based product index ``j`` (``1 <= j <= N``)."""
        if not 1 <= j <= self.n_factors:
            raise IndexOutOfRange(f"factor index {j} outside 1..{self.n_factors}")
        return self.factors[self.n_factors - j]

    def span(self, hi: int, lo: int) -> np.ndarray:
        """Ordered product ``F_hi F_{hi-1} ... F_lo``; identity when ``hi < lo``."""
        if hi < lo:
            return np.eye(self.dim, dtype=np.complex128)
        return product([self.factor(j) for j in range(hi, lo - 1, -1)])


@dataclass(frozen=True, eq=False)
class DysonChain(_Chain):
    """Factors ``[Omega_N, ..., Omega_1]`` of a Dyson map; all must be invertible."""

    factors: tuple
    tol: Tolerance = field(default_factory=Tolerance.default, compare=False, repr=False)

    def __init__(self, factors: Sequence, tol: Tolerance | None = None):
        tol = tol or Tolerance.default()
        mats = _as_factor_tuple(factors, "Dyson")
        for idx, m in enumerate(mats):
            cond = condition_number(m)
            if cond > tol.cond_max:
                raise IllConditioned(
                    f"Dyson factor Omega_{len(mats) - idx} has condition number {cond:.3g}"
                )
        object.__setattr__(self, "factors", mats)
        object.__setattr__(self, "tol", tol)

    @classmethod
    def identity(cls, n_factors: int, dim: int) -> "DysonChain":
        return cls([np.eye(dim)] * n_factors)


@dataclass(frozen=True, eq=False)
class MetricChain(_Chain):
    """Factors ``[Z_N, ..., Z_1]`` of a metric ``Theta = Z_N ... Z_1``.

    Construction only checks shapes; use :func:`validate` for the
    Hermiticity/positivity certificate of the cumulative products.
    """

    factors: tuple

    def __init__(self, factors: Sequence):
        object.__setattr__(self, "factors", _as_factor_tuple(factors, "metric"))

    def cumulative(self, j: int) -> np.ndarray:
        """``Y_j = Z_N ... Z_j``; ``Y_{N+1}`` is the identity."""
        if not 1 <= j <= self.n_factors + 1:
            raise IndexOutOfRange(f"cumulative index {j} outside 1..{self.n_factors + 1}")
        return self.span(self.n_factors, j)

    def theta(self) -> np.ndarray:
        return self.cumulative(1)


@dataclass(frozen=True)
class CumulativeCertificate:
    """Per-level diagnostics of ``Y_j``, listed for ``j = N, N-1, ..., 1``."""

    levels: tuple
    hermiticity_residuals: tuple
    min_eigenvalues: tuple
    rel_eq: float

    @property
    def passed(self) -> bool:
        return all(r < self.rel_eq for r in self.hermiticity_residuals) and all(
            e > 0 for e in self.min_eigenvalues
        )

    def failures(self) -> list[int]:
        return [
            j
            for j, r, e in zip(self.levels, self.hermiticity_residuals, self.min_eigenvalues)
            if not (r < self.rel_eq and e > 0)
        ]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rel_eq": self.rel_eq,
            "levels": [
                {"j": j, "hermiticity_residual": r, "min_eigenvalue": e}
                for j, r, e in zip(self.levels, self.hermiticity_residuals, self.min_eigenvalues)
            ],
        }


def total_dyson(chain: DysonChain) -> np.ndarray:
    """``Omega = Omega_N Omega_{N-1} ... Omega_1``."""
    return product(chain.factors)


def cumulative_dyson(chain: DysonChain, j: int) -> np.ndarray:
    """Partial product ``Omega_N ... Omega_j`` (the tilded sub-map)."""
    return chain.span(chain.n_factors, j)


def metrics_from_dyson(chain: DysonChain) -> MetricChain:
    """Metric factors with ``Z_N ... Z_j = (Omega_N ... Omega_j)^dagger (Omega_N ... Omega_j)``.

    ``Z_N = Omega_N^dagger Omega_N`` and ``Z_j = Y_{j+1}^{-1} Y_j`` below it.
    """
    n = chain.n_factors
    Y = {n + 1: np.eye(chain.dim, dtype=np.complex128)}
    for j in range(n, 0, -1):
        O = cumulative_dyson(chain, j)
        Y[j] = adjoint(O) @ O
    Z = []
    for j in range(n, 0, -1):
        Z.append(solve(Y[j + 1], Y[j], chain.tol))
    return MetricChain(Z)


def validate(chain: MetricChain, tol: Tolerance | None = None) -> CumulativeCertificate:
    """Check every ``Y_j = Z_N ... Z_j`` for Hermiticity and positivity.

    Failures are reported in the certificate, never raised.
    """
    tol = tol or Tolerance.default()
    levels, res, mins = [], [], []
    for j in range(chain.n_factors, 0, -1):
        Y = chain.cumulative(j)
        levels.append(j)
        res.append(hermiticity_residual(Y))
        mins.append(min_hermitian_eigenvalue(Y))
    return CumulativeCertificate(tuple(levels), tuple(res), tuple(mins), tol.rel_eq)


def consistency_residuals(chain: MetricChain) -> dict[int, float]:
    """Relative residuals of ``Z_j^dagger Y_{j+1} = Y_{j+1} Z_j`` for ``j < N``.

    For ``N = 2`` this is the single condition ``Z_1^dagger Z_2 = Z_2 Z_1``;
    for ``N = 3`` the pair of conditions on ``Z_2`` and ``Z_1``.
    """
    out = {}
    for j in range(chain.n_factors - 1, 0, -1):
        Z = chain.factor(j)
        Y = chain.cumulative(j + 1)
        lhs = adjoint(Z) @ Y
        rhs = Y @ Z
        scale = max(frobenius(rhs), frobenius(lhs))
        out[j] = 0.0 if scale == 0.0 else frobenius(lhs - rhs) / scale
    return out


def dyson_from_metrics(
    chain: MetricChain, mode: str = "canonical", tol: Tolerance | None = None
) -> DysonChain:
    """Recover Dyson factors from a metric chain.

    ``mode="canonical"`` takes the Hermitian positive root of each ``Y_j``,
    ``mode="cholesky"`` its upper-triangular Cholesky factor.  The result
    reproduces every ``Y_j`` but generally differs from any particular
    Dyson chain that produced ``chain`` by a left unitary factor.
    """
    tol = tol or Tolerance.default()
    if mode == "canonical":
        root = hermitian_sqrt
    elif mode == "cholesky":
        root = upper_cholesky
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'canonical' or 'cholesky'")
    cert = validate(chain, tol)
    if not cert.passed:
        bad = cert.failures()
        raise NotPositiveDefinite(
            f"cumulative metric products Y_j fail Hermiticity/positivity at j={bad}"
        )
    n = chain.n_factors
    tilde = {n + 1: np.eye(chain.dim, dtype=np.complex128)}
    for j in range(n, 0, -1):
        tilde[j] = root(chain.cumulative(j), tol)
    factors = [solve(tilde[j + 1], tilde[j], tol) for j in range(n, 0, -1)]
    return DysonChain(factors, tol)
