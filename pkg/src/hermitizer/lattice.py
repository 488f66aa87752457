"""Triangular lattice of representation spaces and its Hermitization paths.

A node ``R_k^(d)`` is labelled by ``k`` (steps still to take) and ``d``
(Dyson steps already taken), ``k + d <= N``.  Starting from ``R_N^(0)``
every path takes ``N`` steps, each either

* an *amendment* ``(k, d) -> (k-1, d)``, which multiplies the node metric
  by one more metric factor, or
* a *Dyson* step ``(k, d) -> (k-1, d+1)``, which conjugates the Hamiltonian
  by one more Dyson factor.

Only the terminal nodes ``k = 0`` carry a physical (Hamiltonian, metric)
pair.  Two depth counters appear in reports: ``dyson_depth`` ``d`` and
``metric_depth = N - d``, the number of metric factors kept at the
terminal node.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb

import numpy as np

from .chains import DysonChain, MetricChain, metrics_from_dyson
from .errors import IndexOutOfRange, LimitExceeded, TerminalNode
from .kernels import path_table
from .matkernel import Tolerance, as_matrix, check_same_dim, conjugate_by

MAX_PATH_STEPS = 20


class Step(str, enum.Enum):
    AMEND = "amend"
    DYSON = "dyson"


@dataclass(frozen=True, eq=False)
class LatticeNode:
    """One representation space ``R_k^(d)``.

    ``W = Omega_{k+d} ... Omega_{k+1}`` is the ket transform,
    ``P = Z_N ... Z_{k+d+1}`` the node metric, ``H_node = W H W^{-1}``.
    """

    k: int
    d: int
    n_factors: int
    W: np.ndarray
    P: np.ndarray
    H_node: np.ndarray

    @property
    def key(self) -> tuple[int, int]:
        return (self.k, self.d)

    @property
    def physical(self) -> bool:
        return self.k == 0

    @property
    def metric_depth(self) -> int:
        return self.n_factors - self.d

    @property
    def label(self) -> str:
        return f"R_{self.k}^({self.d})"


@dataclass(frozen=True)
class HermitizationPath:
    choices: tuple
    superscripts: tuple
    positions: tuple

    @classmethod
    def from_choices(cls, choices) -> "HermitizationPath":
        choices = tuple(Step(c) for c in choices)
        n = len(choices)
        sup = [0]
        pos = [(n, 0)]
        for i, c in enumerate(choices):
            d = sup[-1] + (c is Step.DYSON)
            sup.append(d)
            pos.append((n - i - 1, d))
        return cls(choices, tuple(sup), tuple(pos))

    @property
    def n_steps(self) -> int:
        return len(self.choices)

    @property
    def dyson_depth(self) -> int:
        return self.superscripts[-1]

    @property
    def metric_depth(self) -> int:
        return self.n_steps - self.dyson_depth

    def nodes(self, lattice: "Lattice") -> list[LatticeNode]:
        return [lattice[p] for p in self.positions]

    def describe(self) -> str:
        return " -> ".join(f"R_{k}^({d})" for k, d in self.positions)


@dataclass(frozen=True, eq=False)
class Lattice:
    H: np.ndarray
    chain: DysonChain
    metrics: MetricChain
    nodes: dict

    @property
    def n_factors(self) -> int:
        return self.chain.n_factors

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, key) -> LatticeNode:
        return self.nodes[tuple(key)]

    def __iter__(self):
        return iter(self.nodes.values())

    def terminals(self) -> list[LatticeNode]:
        return [self.nodes[(0, d)] for d in range(self.n_factors + 1)]


@dataclass(frozen=True, eq=False)
class Representation:
    """Physical pair ``(V H V^{-1}, Theta_k)`` with ``V = Omega_{N-k} ... Omega_1``."""

    metric_depth: int
    n_factors: int
    physical_hamiltonian: np.ndarray
    physical_metric: np.ndarray
    transform: np.ndarray

    @property
    def dyson_depth(self) -> int:
        return self.n_factors - self.metric_depth


def _check_inputs(H, chain):
    H = as_matrix(H, "Hamiltonian")
    check_same_dim(H, chain.factors[0])
    return H


def build_lattice(H, chain: DysonChain, tol: Tolerance | None = None) -> Lattice:
    """All ``(N+1)(N+2)/2`` nodes, memoized by ``(k, d)``."""
    tol = tol or chain.tol
    H = _check_inputs(H, chain)
    metrics = metrics_from_dyson(chain)
    n = chain.n_factors
    nodes = {}
    for s in range(n, -1, -1):  # s = k + d
        P = metrics.cumulative(s + 1)
        for d in range(s + 1):
            k = s - d
            W = chain.span(k + d, k + 1)
            H_node = conjugate_by(W, H, tol)
            nodes[(k, d)] = LatticeNode(k, d, n, W, P, H_node)
    return Lattice(H, chain, metrics, nodes)


def diagonal_map(node: LatticeNode, chain: DysonChain, tol: Tolerance | None = None) -> np.ndarray:
    """Dyson sub-map ``M = W Omega_k W^{-1}`` leading from ``(k, d)`` to ``(k-1, d+1)``.

    It satisfies ``M W(k, d) = W(k-1, d+1)``.
    """
    if node.k == 0:
        raise TerminalNode(f"{node.label} is terminal and has no diagonal successor")
    tol = tol or chain.tol
    return conjugate_by(node.W, chain.factor(node.k), tol)


def _check_n_steps(n_steps: int):
    if not 1 <= n_steps <= MAX_PATH_STEPS:
        raise LimitExceeded(f"N={n_steps} outside the supported range 1..{MAX_PATH_STEPS}")


def enumerate_paths(n_steps: int) -> list[HermitizationPath]:
    """All ``2**N`` Hermitization paths, amendment-first lexicographic order."""
    _check_n_steps(n_steps)
    table = path_table(n_steps)
    paths = []
    for row in table:
        sup = tuple(int(v) for v in row)
        choices = tuple(Step.DYSON if b > a else Step.AMEND for a, b in zip(sup, sup[1:]))
        positions = tuple((n_steps - i, d) for i, d in enumerate(sup))
        paths.append(HermitizationPath(choices, sup, positions))
    return paths


def terminal_path_counts(n_steps: int) -> list[int]:
    """Number of paths ending at ``R_0^(d)``, for ``d = 0..N``."""
    _check_n_steps(n_steps)
    table = path_table(n_steps)
    return np.bincount(table[:, -1], minlength=n_steps + 1).tolist()


def node_count(n_steps: int) -> int:
    return comb(n_steps + 2, 2)


def edge_path_counts(n_steps: int) -> dict:
    """Number of paths through each lattice edge.

    An edge leaving ``(k, d)`` is reached by ``C(N-k, d)`` path prefixes and
    continued by ``2**(k-1)`` suffixes.
    """
    _check_n_steps(n_steps)
    out = {}
    for k in range(n_steps, 0, -1):
        for d in range(n_steps - k + 1):
            through = comb(n_steps - k, d) * 2 ** (k - 1)
            out[((k, d), (k - 1, d))] = through
            out[((k, d), (k - 1, d + 1))] = through
    return out


def representation(H, chain: DysonChain, k: int, tol: Tolerance | None = None) -> Representation:
    """Physical representation with ``k`` metric factors kept.

    ``k = N`` returns ``(H, Z_N ... Z_1)``, ``k = 0`` returns ``(Omega H Omega^{-1}, I)``.
    """
    n = chain.n_factors
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"metric depth k={k} outside 0..{n}")
    tol = tol or chain.tol
    H = _check_inputs(H, chain)
    metrics = metrics_from_dyson(chain)
    V = chain.span(n - k, 1)
    h = conjugate_by(V, H, tol)
    theta = metrics.cumulative(n - k + 1)
    return Representation(k, n, h, theta, V)


def representations(H, chain: DysonChain, tol: Tolerance | None = None) -> list[Representation]:
    return [representation(H, chain, k, tol) for k in range(chain.n_factors + 1)]
