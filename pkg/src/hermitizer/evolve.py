"""Schrödinger evolution in a chosen representation (hbar = 1).

The physical norm of a state is ``<psi|P|psi>`` with ``P`` the metric of
the representation.  For a quasi-Hermitian pair it is conserved even though
``H`` itself is not Hermitian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .chains import DysonChain
from .errors import DimensionMismatch, NotDiagonalizable, StepTooLarge, ValidationError
from .kernels import rk4_integrate
from .lattice import representation
from .matkernel import (
    Tolerance,
    as_matrix,
    check_same_dim,
    condition_number,
    conjugate_by,
    hermiticity_residual,
    min_hermitian_eigenvalue,
)

METHODS = ("exact_diagonalization", "rk4")

# |h * lambda| beyond this leaves the RK4 stability region on the imaginary axis
RK4_STABILITY_LIMIT = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class EvolutionSpec:
    hamiltonian: np.ndarray
    metric: np.ndarray
    initial_state: np.ndarray
    t_final: float
    n_samples: int = 201
    method: str = "exact_diagonalization"
    step: float = 1e-3

    def __post_init__(self):
        H = as_matrix(self.hamiltonian, "hamiltonian")
        P = as_matrix(self.metric, "metric")
        psi = np.array(self.initial_state, dtype=np.complex128).ravel()
        check_same_dim(H, P)
        if psi.size != H.shape[0]:
            raise DimensionMismatch(f"state has {psi.size} components, H is {H.shape[0]}-dimensional")
        if not np.any(psi):
            raise ValidationError("initial state is zero")
        if hermiticity_residual(P) > Tolerance.default().rel_eq or min_hermitian_eigenvalue(P) <= 0:
            raise ValidationError("metric is not Hermitian positive definite")
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not (self.t_final >= 0 and math.isfinite(self.t_final)):
            raise ValidationError(f"t_final must be finite and nonnegative, got {self.t_final}")
        if self.n_samples < 1 or (self.n_samples == 1 and self.t_final > 0):
            raise ValidationError("need at least two samples for t_final > 0")
        if self.method == "rk4" and not self.step > 0:
            raise ValidationError(f"rk4 step must be positive, got {self.step}")
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(self, "metric", P)
        object.__setattr__(self, "initial_state", psi)


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    times: np.ndarray
    states: np.ndarray
    physical_norms: np.ndarray
    max_norm_drift: float
    metric: np.ndarray = field(repr=False, default=None)

    def expectation(self, observable) -> np.ndarray:
        """``<psi|P L|psi> / <psi|P|psi>`` at every sample."""
        L = np.asarray(observable)
        PL = self.metric @ L
        num = np.einsum("ti,ij,tj->t", self.states.conj(), PL, self.states)
        return num / self.physical_norms


def physical_norms(states, metric) -> np.ndarray:
    return np.real(np.einsum("ti,ij,tj->t", states.conj(), metric, states))


def _sample_times(spec):
    if spec.n_samples == 1:
        return np.zeros(1)
    return np.linspace(0.0, spec.t_final, spec.n_samples)


def _propagate_exact(spec, times, tol):
    w, V = np.linalg.eig(spec.hamiltonian)
    if condition_number(V) > tol.cond_max:
        raise NotDiagonalizable("eigenvector matrix is numerically singular (defective Hamiltonian)")
    coeff = np.linalg.solve(V, spec.initial_state)
    phases = np.exp(-1j * np.outer(times, w))
    states = (phases * coeff[None, :]) @ V.T
    states[times == 0] = spec.initial_state
    return states


def _propagate_rk4(spec, times):
    n_intervals = spec.n_samples - 1
    if n_intervals == 0 or spec.t_final == 0:
        return np.repeat(spec.initial_state[None, :], spec.n_samples, axis=0)
    interval = spec.t_final / n_intervals
    steps_per_sample = max(1, math.ceil(interval / spec.step - 1e-9))
    h = interval / steps_per_sample
    radius = float(np.max(np.abs(np.linalg.eigvals(spec.hamiltonian))))
    if h * radius > RK4_STABILITY_LIMIT:
        raise StepTooLarge(
            f"step {h:.3g} times spectral radius {radius:.3g} exceeds the RK4 stability limit"
        )
    A = np.ascontiguousarray(-1j * spec.hamiltonian)
    return rk4_integrate(A, spec.initial_state, h, steps_per_sample, spec.n_samples)


def propagate(spec: EvolutionSpec, tol: Tolerance | None = None) -> EvolutionTrace:
    tol = tol or Tolerance.default()
    times = _sample_times(spec)
    if spec.method == "exact_diagonalization":
        states = _propagate_exact(spec, times, tol)
    else:
        states = _propagate_rk4(spec, times)
    norms = physical_norms(states, spec.metric)
    drift = float(np.max(np.abs(norms - norms[0])) / norms[0])
    return EvolutionTrace(times, states, norms, drift, spec.metric)


@dataclass(frozen=True, eq=False)
class AgreementReport:
    metric_depths: tuple
    traces: dict
    expectations: dict
    max_norm_deviation: float
    max_expectation_deviation: float

    def passed(self, threshold: float = 1e-8) -> bool:
        return self.max_norm_deviation < threshold and self.max_expectation_deviation < threshold


def compare_representations(
    H,
    chain: DysonChain,
    k_list,
    state,
    t_final: float,
    observable=None,
    n_samples: int = 201,
    method: str = "exact_diagonalization",
    step: float = 1e-3,
    tol: Tolerance | None = None,
) -> AgreementReport:
    """Evolve the same physical state in several representations and compare.

    ``state`` and ``observable`` live in the working representation of
    ``H``; representation ``k`` receives ``V_k state`` and
    ``V_k observable V_k^{-1}``.  Deviations are relative to the largest
    norm / expectation magnitude seen.
    """
    tol = tol or chain.tol
    H = as_matrix(H, "Hamiltonian")
    L = H if observable is None else as_matrix(observable, "observable")
    state = np.asarray(state, dtype=np.complex128)
    traces, expectations = {}, {}
    for k in k_list:
        rep = representation(H, chain, k, tol)
        V = rep.transform
        spec = EvolutionSpec(
            rep.physical_hamiltonian, rep.physical_metric, V @ state, t_final, n_samples, method, step
        )
        tr = propagate(spec, tol)
        traces[k] = tr
        expectations[k] = tr.expectation(conjugate_by(V, L, tol))
    norm_scale = max(float(np.max(np.abs(t.physical_norms))) for t in traces.values())
    exp_scale = max(1.0, max(float(np.max(np.abs(e))) for e in expectations.values()))
    norm_dev = exp_dev = 0.0
    for a, b in combinations(list(traces), 2):
        norm_dev = max(norm_dev, float(np.max(np.abs(traces[a].physical_norms - traces[b].physical_norms))))
        exp_dev = max(exp_dev, float(np.max(np.abs(expectations[a] - expectations[b]))))
    return AgreementReport(
        tuple(k_list), traces, expectations, norm_dev / norm_scale, exp_dev / exp_scale
    )
