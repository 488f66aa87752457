"""Complexity scores of physical representations and their ranking."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptyInput, ValidationError
from .lattice import Representation
from .matkernel import Tolerance, condition_number, hermiticity_residual

DEFAULT_WEIGHTS = (1.0, 1.0, 0.1)


@dataclass(frozen=True)
class ComplexityScore:
    n_zero: int
    nonhermiticity: float
    metric_condition: float
    bandwidth: int
    n_par: int | None = None
    metric_depth: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ComplexityScore":
        return cls(**data)


def count_zeros(A, zero_abs: float) -> int:
    """Entries below ``zero_abs`` times the largest entry magnitude."""
    mag = np.abs(np.asarray(A))
    peak = mag.max()
    if peak == 0.0:
        return int(mag.size)
    return int(np.count_nonzero(mag < zero_abs * peak))


def bandwidth(A, zero_abs: float) -> int:
    """Largest ``|i - j|`` over entries that are not zero in the sense of :func:`count_zeros`."""
    mag = np.abs(np.asarray(A))
    peak = mag.max()
    if peak == 0.0:
        return 0
    i, j = np.nonzero(mag >= zero_abs * peak)
    return int(np.max(np.abs(i - j)))


def score(
    rep: Representation, tol: Tolerance | None = None, declared_n_par: int | None = None
) -> ComplexityScore:
    tol = tol or Tolerance.default()
    h = rep.physical_hamiltonian
    return ComplexityScore(
        n_zero=count_zeros(h, tol.zero_abs),
        nonhermiticity=hermiticity_residual(h),
        metric_condition=condition_number(rep.physical_metric),
        bandwidth=bandwidth(h, tol.zero_abs),
        n_par=declared_n_par,
        metric_depth=rep.metric_depth,
    )


def preference(s: ComplexityScore, weights=DEFAULT_WEIGHTS) -> float:
    """Weighted figure of merit; larger is preferred."""
    w_zero, w_herm, w_cond = weights
    return (
        w_zero * s.n_zero
        - w_herm * s.nonhermiticity
        - w_cond * math.log10(max(s.metric_condition, 1.0))
    )


def _check_weights(weights):
    weights = tuple(float(w) for w in weights)
    if len(weights) != 3:
        raise ValidationError(f"expected three weights, got {len(weights)}")
    if not all(math.isfinite(w) and w >= 0 for w in weights) or not any(weights):
        raise ValidationError(f"weights must be finite, nonnegative and not all zero: {weights}")
    return weights


def rank(scores, weights=DEFAULT_WEIGHTS) -> list[int]:
    """Indices of ``scores`` from most to least preferred.

    Ties go to the lower metric depth, then to the earlier position.
    """
    scores = list(scores)
    if not scores:
        raise EmptyInput("nothing to rank")
    weights = _check_weights(weights)
    keyed = []
    for idx, s in enumerate(scores):
        depth = s.metric_depth if s.metric_depth is not None else math.inf
        keyed.append((-preference(s, weights), depth, idx))
    return [idx for _, _, idx in sorted(keyed)]
