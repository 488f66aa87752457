"""Finite-difference spectra of the Buslaev-Grecchi oscillator and its double-well partner.

    H_eta(ig, j) = -d^2/dx^2 + V(r)/4,   r = x - i*eta,
    V(r)         = (j^2 - 1)/r^2 + r^2 - g^2 r^4

    Q(g, j)      = -d^2/dx^2 + (g x - 1)^2 x^2 + j (1/2 - g x)

Both are discretized with the three-point Laplacian on a uniform grid with
Dirichlet ends.  The double well has its minima at ``x = 0`` and
``x = 1/g`` and is mirror-symmetric about ``x = 1/(2g)`` (up to ``j -> -j``),
so its grid is centred there; the oscillator grid is centred at 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NoConvergence, SingularPotential, ValidationError
from .kernels import edge_mass
from .matkernel import Tolerance

EDGE_FRACTION = 0.05
EDGE_MASS_MAX = 1e-6
MAX_SUPPORTED_G = 0.2


@dataclass(frozen=True)
class GridSpec:
    half_width: float = 12.0
    n_points: int = 2000

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValidationError(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 50:
            raise ValidationError(f"n_points must be at least 50, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.n_points + 1)

    def points(self, center: float = 0.0) -> np.ndarray:
        """Interior nodes of ``[center - L, center + L]``."""
        return center - self.half_width + self.spacing * np.arange(1, self.n_points + 1)

    def refined(self) -> "GridSpec":
        return GridSpec(self.half_width, 2 * self.n_points + 1)


@dataclass(frozen=True)
class BGParams:
    g: float = 0.1
    j: float = 1.0
    eta: float = 1.0

    @property
    def supported(self) -> bool:
        return abs(self.g) <= MAX_SUPPORTED_G


def bg_potential(x, params: BGParams) -> np.ndarray:
    r = np.asarray(x) - 1j * params.eta
    g, j = params.g, params.j
    return (j * j - 1.0) / r**2 + r**2 - g * g * r**4


def q_potential(x, params: BGParams) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g, j = params.g, params.j
    return (g * x - 1.0) ** 2 * x**2 + j * (0.5 - g * x)


def q_center(g: float) -> float:
    return 0.0 if g == 0 else 0.5 / g


def _tridiagonal(diag, h, dtype):
    n = diag.size
    off = np.full(n - 1, -1.0 / h**2, dtype=dtype)
    return sp.diags([off, diag.astype(dtype) + 2.0 / h**2, off], [-1, 0, 1], format="csr")


def discretize_bg(params: BGParams, grid: GridSpec, tol: Tolerance | None = None) -> sp.csr_matrix:
    """Sparse complex-symmetric tridiagonal matrix of ``H_eta(ig, j)``."""
    tol = tol or Tolerance.default()
    if params.eta <= tol.zero_abs:
        raise SingularPotential(f"eta={params.eta} puts the grid on the 1/r^2 singularity")
    x = grid.points()
    return _tridiagonal(0.25 * bg_potential(x, params), grid.spacing, np.complex128)


def discretize_q(params: BGParams, grid: GridSpec) -> sp.csr_matrix:
    """Sparse real-symmetric tridiagonal matrix of ``Q(g, j)`` on the centred grid."""
    x = grid.points(q_center(params.g))
    return _tridiagonal(q_potential(x, params), grid.spacing, np.float64)


def q_levels(params: BGParams, grid: GridSpec, n_levels: int) -> np.ndarray:
    x = grid.points(q_center(params.g))
    h = grid.spacing
    d = q_potential(x, params) + 2.0 / h**2
    e = np.full(grid.n_points - 1, -1.0 / h**2)
    try:
        return sla.eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, n_levels - 1))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NoConvergence(str(exc)) from exc


def bg_levels(
    params: BGParams, grid: GridSpec, n_levels: int, shift: float = 0.0, tol: Tolerance | None = None
) -> np.ndarray:
    """Lowest ``n_levels`` box-artifact-free eigenvalues of the oscillator, by real part.

    Eigenpairs are computed by shift-invert Arnoldi around ``shift``.  An
    eigenvalue is kept only if its eigenvector has less than ``1e-6`` of its
    squared norm on the outermost 5% of the grid.  The number of requested
    eigenpairs grows until the kept set is provably the lowest one inside
    the explored disc.
    """
    A = discretize_bg(params, grid, tol).tocsc()
    x = grid.points()
    edge = np.abs(x) > (1.0 - EDGE_FRACTION) * grid.half_width
    n = grid.n_points
    k = min(n - 2, 4 * n_levels + 20)
    while True:
        try:
            w, v = spla.eigs(A, k=k, sigma=shift, which="LM")
        except spla.ArpackNoConvergence as exc:
            raise NoConvergence(f"ARPACK did not converge for k={k}") from exc
        mass = edge_mass(np.ascontiguousarray(v), edge)
        radius = float(np.max(np.abs(w - shift)))
        kept = w[mass < EDGE_MASS_MAX]
        kept = kept[np.lexsort((kept.imag, kept.real))]
        if kept.size >= n_levels and abs(kept[n_levels - 1] - shift) < 0.95 * radius:
            return kept[:n_levels]
        if k >= n - 2:
            raise NoConvergence(f"only {kept.size} clean levels found among {k} eigenpairs")
        k = min(n - 2, 2 * k)


@dataclass(frozen=True)
class SpectralReport:
    params: BGParams
    grid: GridSpec
    bg: np.ndarray
    q: np.ndarray

    @property
    def imag_ratio(self) -> np.ndarray:
        """``|Im| / |Re|`` for every oscillator level."""
        return np.abs(self.bg.imag) / np.abs(self.bg.real)

    @property
    def gaps(self) -> np.ndarray:
        """Level-by-level difference between the real oscillator levels and the double-well levels."""
        return self.bg.real - self.q

    @property
    def relative_gaps(self) -> np.ndarray:
        return np.abs(self.gaps) / np.abs(self.q)

    def rows(self) -> list[dict]:
        return [
            {
                "level": i,
                "bg_re": float(b.real),
                "bg_im": float(b.imag),
                "q": float(q),
                "imag_ratio": float(ir),
                "gap": float(gp),
                "relative_gap": float(rg),
            }
            for i, (b, q, ir, gp, rg) in enumerate(
                zip(self.bg, self.q, self.imag_ratio, self.gaps, self.relative_gaps)
            )
        ]

    def to_dict(self) -> dict:
        return {
            "g": self.params.g,
            "j": self.params.j,
            "eta": self.params.eta,
            "half_width": self.grid.half_width,
            "n_points": self.grid.n_points,
            "levels": self.rows(),
        }


def compare_spectra(
    params: BGParams, grid: GridSpec, n_levels: int, tol: Tolerance | None = None
) -> SpectralReport:
    if not 1 <= n_levels <= grid.n_points // 10:
        raise ValidationError(f"n_levels={n_levels} outside 1..{grid.n_points // 10}")
    return SpectralReport(
        params, grid, bg_levels(params, grid, n_levels, tol=tol), q_levels(params, grid, n_levels)
    )
