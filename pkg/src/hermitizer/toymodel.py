"""Three-level (r, s, t) model with a diagonal, equidistant BGI target.

The Dyson factors are

    Omega_3 = [[1,0,0],[r,1,r],[0,0,1]]
    Omega_2 = [[1,0,0],[s,1,0],[0,s,1]]
    Omega_1 = [[1,t,0],[0,1,t],[0,0,1]]

and the working Hamiltonian is ``H = Omega^{-1} diag(1,3,5) Omega``.
Closed-form matrices are kept as fixtures and compared against values
recomputed through :mod:`chains` and :mod:`lattice`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chains import DysonChain, cumulative_dyson, metrics_from_dyson, total_dyson
from .errors import ValidationError
from .lattice import build_lattice, diagonal_map, representation
from .matkernel import Tolerance, rel_distance, solve

TARGET_SPECTRUM = (1.0, 3.0, 5.0)

# number of free parameters of each physical Hamiltonian, by metric depth k
DECLARED_N_PAR = (0, 1, 2, 3)

GENERIC_MARGIN = 0.05


@dataclass(frozen=True)
class ToyParams:
    r: float
    s: float
    t: float

    def __post_init__(self):
        if not all(np.isfinite([self.r, self.s, self.t])):
            raise ValidationError(f"non-finite toy parameters {self}")

    def singular_loci(self) -> dict[str, float]:
        r, s, t = self.r, self.s, self.t
        return {
            "r": r,
            "s": s,
            "t": t,
            "r+s": r + s,
            "1+sr": 1 + s * r,
            "1-ts": 1 - t * s,
            "ts+1": t * s + 1,
        }

    def is_generic(self, margin: float = GENERIC_MARGIN) -> bool:
        """True when no structural entry of the fixtures is (nearly) zero."""
        return all(abs(v) > margin for v in self.singular_loci().values())


def dyson_factors(p: ToyParams) -> list[np.ndarray]:
    """``[Omega_3, Omega_2, Omega_1]``."""
    r, s, t = p.r, p.s, p.t
    O3 = np.array([[1, 0, 0], [r, 1, r], [0, 0, 1]], dtype=np.complex128)
    O2 = np.array([[1, 0, 0], [s, 1, 0], [0, s, 1]], dtype=np.complex128)
    O1 = np.array([[1, t, 0], [0, 1, t], [0, 0, 1]], dtype=np.complex128)
    return [O3, O2, O1]


def closed_forms(p: ToyParams) -> dict[str, np.ndarray]:
    """Reference matrices, written out entry by entry.

    ``Theta_first_column`` is a 3-vector; ``H_first_two_columns`` is 3x2.
    """
    r, s, t = p.r, p.s, p.t
    a = r + s
    b = 1 + s * r
    forms = {
        "Omega321": [[1, t, 0], [a, a * t + 1 + s * r, b * t + r], [0, s, t * s + 1]],
        "Omega32": [[1, 0, 0], [a, b, r], [0, s, 1]],
        "Omega21": [[1 - t * s, t, 0], [0, 1, t], [t * s**3, -t * s**2, t * s + 1]],
        "Z3": [[1 + r**2, r, r**2], [r, 1, r], [r**2, r, 1 + r**2]],
        "Z3Z2": [
            [1 + a**2, a * b, a * r],
            [a * b, b**2 + s**2, r + s * r**2 + s],
            [a * r, r + s * r**2 + s, 1 + r**2],
        ],
        "Theta_first_column": [1 + a**2, t * (1 + a**2) + a * b, a * (t + r * t * s + r)],
        "h1": [
            [1, 0, 0],
            [2 * r + 2 * s, 3 - 2 * s * r, -2 * r],
            [-2 * a * s, 2 * s + 2 * s**2 * r, 2 * s * r + 5],
        ],
        "h21": [[1, 0, 0], [2 * r, 3, -2 * r], [0, 0, 5]],
        "H_first_two_columns": [
            [
                -2 * r * t**2 * s - 2 * t * r - 2 * t**2 * s**2 - 2 * t * s + 1,
                -2 * r * t**3 * s - 2 * t**2 * r - 2 * t**3 * s**2 - 2 * t
                + 2 * t**2 * s**2 * r + 2 * r * t * s,
            ],
            [
                2 * r * t * s + 2 * r + 2 * t * s**2 + 2 * s,
                2 * r * t**2 * s + 2 * t * r + 2 * t**2 * s**2 - 2 * s**2 * r * t + 3 - 2 * s * r,
            ],
            [-2 * a * s, -2 * r * t * s - 2 * t * s**2 + 2 * s + 2 * s**2 * r],
        ],
    }
    return {k: np.array(v, dtype=np.complex128) for k, v in forms.items()}


@dataclass(frozen=True, eq=False)
class ToyModelInstance:
    params: ToyParams
    chain: DysonChain
    target: np.ndarray
    H: np.ndarray
    fixtures: dict = field(repr=False)

    @property
    def declared_n_par(self) -> tuple:
        return DECLARED_N_PAR


def build(params: ToyParams, tol: Tolerance | None = None) -> ToyModelInstance:
    tol = tol or Tolerance.default()
    chain = DysonChain(dyson_factors(params), tol)
    target = np.diag(np.array(TARGET_SPECTRUM, dtype=np.complex128))
    Om = total_dyson(chain)
    H = solve(Om, target @ Om, tol)
    return ToyModelInstance(params, chain, target, H, closed_forms(params))


def recompute(inst: ToyModelInstance, tol: Tolerance | None = None) -> dict[str, np.ndarray]:
    """The fixture quantities, obtained through the generic chain/lattice code.

    The displayed ``Omega32`` coincides with the cumulative Dyson product
    ``Omega_3 Omega_2`` and is recomputed as such; the conjugated sub-map
    ``Omega_3 Omega_2 Omega_3^{-1}`` of the lattice is reported separately
    under ``Omega32_submap``.
    """
    tol = tol or inst.chain.tol
    chain = inst.chain
    lat = build_lattice(inst.H, chain, tol)
    Z = metrics_from_dyson(chain)
    return {
        "Omega321": total_dyson(chain),
        "Omega32": cumulative_dyson(chain, 2),
        "Omega32_submap": diagonal_map(lat[(2, 1)], chain, tol),
        "Omega21": diagonal_map(lat[(1, 1)], chain, tol),
        "Z3": Z.cumulative(3),
        "Z3Z2": Z.cumulative(2),
        "Theta_first_column": Z.theta()[:, 0],
        "h1": representation(inst.H, chain, 2, tol).physical_hamiltonian,
        "h21": representation(inst.H, chain, 1, tol).physical_hamiltonian,
        "H_first_two_columns": inst.H[:, :2],
    }


def verify_fixtures(inst: ToyModelInstance, tol: Tolerance | None = None) -> dict[str, float]:
    """Relative residual between each closed form and its recomputation."""
    values = recompute(inst, tol)
    return {name: rel_distance(values[name], ref) for name, ref in inst.fixtures.items()}
