"""Dense complex matrix kernel shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_matrix` is the single entry point that validates and converts
user input.  Equality is always measured by relative Frobenius distance.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    DimensionMismatch,
    IllConditioned,
    NoConvergence,
    NotHermitian,
    NotPositiveDefinite,
    ValidationError,
)

DEFAULT_REL_EQ = 1e-10
DEFAULT_ZERO_ABS = 1e-12
DEFAULT_COND_MAX = 1e12
TOL_ENV_VAR = "HERMITIZER_TOL"


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rel_eq
        relative Frobenius distance below which two matrices are equal
    zero_abs
        entry-zero threshold, relative to the largest entry magnitude
    cond_max
        largest admissible 2-norm condition number
    """

    rel_eq: float = DEFAULT_REL_EQ
    zero_abs: float = DEFAULT_ZERO_ABS
    cond_max: float = DEFAULT_COND_MAX

    def __post_init__(self):
        if not (self.rel_eq > 0 and self.zero_abs > 0 and self.cond_max > 1):
            raise ValidationError(
                f"invalid tolerance: rel_eq={self.rel_eq}, zero_abs={self.zero_abs}, "
                f"cond_max={self.cond_max}"
            )

    @classmethod
    def default(cls) -> "Tolerance":
        """Defaults, with ``rel_eq`` overridable through ``HERMITIZER_TOL``."""
        raw = os.environ.get(TOL_ENV_VAR)
        if raw:
            try:
                return cls(rel_eq=float(raw))
            except ValueError as exc:
                raise ValidationError(f"{TOL_ENV_VAR}={raw!r} is not a number") from exc
        return cls()


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite square complex128 array, or raise."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    return M


def check_same_dim(*mats) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def adjoint(A) -> np.ndarray:
    return np.conj(np.asarray(A)).T


def frobenius(A) -> float:
    return float(np.linalg.norm(np.ravel(A)))


def rel_distance(A, B) -> float:
    """``||A - B||_F / max(||A||_F, ||B||_F)``; zero when both vanish."""
    scale = max(frobenius(A), frobenius(B))
    if scale == 0.0:
        return 0.0
    return frobenius(np.asarray(A) - np.asarray(B)) / scale


def is_close(A, B, tol: Tolerance | None = None) -> bool:
    tol = tol or Tolerance.default()
    return rel_distance(A, B) < tol.rel_eq


def hermiticity_residual(A) -> float:
    """``||A - A^dagger||_F / ||A||_F`` (zero for the zero matrix)."""
    norm = frobenius(A)
    if norm == 0.0:
        return 0.0
    return frobenius(A - adjoint(A)) / norm


def condition_number(A) -> float:
    with np.errstate(all="ignore"):
        c = np.linalg.cond(A)
    return float(c) if np.isfinite(c) else float("inf")


def inverse(A, tol: Tolerance | None = None) -> np.ndarray:
    tol = tol or Tolerance.default()
    A = as_matrix(A)
    cond = condition_number(A)
    if cond > tol.cond_max:
        raise IllConditioned(f"condition number {cond:.3g} exceeds cond_max={tol.cond_max:.3g}")
    return np.linalg.inv(A)


def solve(A, B, tol: Tolerance | None = None) -> np.ndarray:
    """``A^{-1} B`` by LU solve, with the same condition guard as :func:`inverse`."""
    tol = tol or Tolerance.default()
    A = as_matrix(A)
    cond = condition_number(A)
    if cond > tol.cond_max:
        raise IllConditioned(f"condition number {cond:.3g} exceeds cond_max={tol.cond_max:.3g}")
    return np.linalg.solve(A, B)


def conjugate_by(V, A, tol: Tolerance | None = None) -> np.ndarray:
    """Similarity transform ``V A V^{-1}``, computed without forming the inverse."""
    VA = np.asarray(V) @ np.asarray(A)
    return solve(adjoint(V), adjoint(VA), tol).conj().T


def _hermitian_part_checked(A, tol: Tolerance) -> np.ndarray:
    res = hermiticity_residual(A)
    if res > tol.rel_eq:
        raise NotHermitian(f"hermiticity residual {res:.3g} exceeds {tol.rel_eq:.3g}")
    return 0.5 * (A + adjoint(A))


def hermitian_sqrt(A, tol: Tolerance | None = None) -> np.ndarray:
    """Unique Hermitian positive-definite square root of ``A``.

    Computed from the Hermitian eigendecomposition ``A = U diag(w) U^dagger``
    as ``U diag(sqrt(w)) U^dagger``.

    Raises
    ------
    NotHermitian
        if ``A`` deviates from its adjoint by more than ``tol.rel_eq``
    NotPositiveDefinite
        if the smallest eigenvalue is not positive
    """
    tol = tol or Tolerance.default()
    A = _hermitian_part_checked(as_matrix(A), tol)
    w, U = np.linalg.eigh(A)
    if w[0] <= 0.0:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[0]:.3g} is not positive")
    S = (U * np.sqrt(w)) @ adjoint(U)
    return 0.5 * (S + adjoint(S))


def upper_cholesky(A, tol: Tolerance | None = None) -> np.ndarray:
    """Upper-triangular ``R`` with ``R^dagger R = A``."""
    tol = tol or Tolerance.default()
    A = _hermitian_part_checked(as_matrix(A), tol)
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return adjoint(L)


def min_hermitian_eigenvalue(A) -> float:
    A = np.asarray(A)
    return float(np.linalg.eigvalsh(0.5 * (A + adjoint(A)))[0])


def sort_spectrum(values) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    return values[np.lexsort((values.imag, values.real))]


def eigenvalues(A) -> np.ndarray:
    """Full spectrum with multiplicity, sorted by (real part, imaginary part)."""
    A = as_matrix(A)
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return sort_spectrum(w)


def spectrum_distance(a, b) -> float:
    """Largest relative deviation between two spectra under the best pairing.

    The pairing is an optimal assignment, so near-degenerate eigenvalues that
    sort in a different order in the two lists still compare correctly.
    Deviations are relative to ``max(1, spectral radius)``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionMismatch(f"spectra of different sizes: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(cost[rows, cols].max()) / scale


def product(factors, dim: int | None = None) -> np.ndarray:
    """Left-to-right matrix product; the empty product is the identity of size ``dim``."""
    factors = list(factors)
    if not factors:
        if dim is None:
            raise ValueError("dim is required for an empty product")
        return np.eye(dim, dtype=np.complex128)
    out = np.array(factors[0], dtype=np.complex128)
    for f in factors[1:]:
        out = out @ f
    return out
