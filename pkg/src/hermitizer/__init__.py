"""Quasi-Hermitian representations of non-Hermitian Hamiltonians.

Builds every physical (Hamiltonian, metric) pair generated by an N-term
factorization of a Dyson map, checks them, scores them and evolves states
in them.
"""
from ._accel import USE_NUMBA, backend_name
from .chains import (
    CumulativeCertificate,
    DysonChain,
    MetricChain,
    consistency_residuals,
    dyson_from_metrics,
    metrics_from_dyson,
    total_dyson,
    validate,
)
from .conjugation import MetricContext, check_observable, is_quasi_hermitian, sharp
from .lattice import (
    HermitizationPath,
    Lattice,
    LatticeNode,
    Representation,
    Step,
    build_lattice,
    diagonal_map,
    enumerate_paths,
    representation,
    representations,
)
from .matkernel import Tolerance, adjoint, eigenvalues, hermitian_sqrt, inverse

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA",
    "backend_name",
    "CumulativeCertificate",
    "DysonChain",
    "MetricChain",
    "consistency_residuals",
    "dyson_from_metrics",
    "metrics_from_dyson",
    "total_dyson",
    "validate",
    "MetricContext",
    "check_observable",
    "is_quasi_hermitian",
    "sharp",
    "HermitizationPath",
    "Lattice",
    "LatticeNode",
    "Representation",
    "Step",
    "build_lattice",
    "diagonal_map",
    "enumerate_paths",
    "representation",
    "representations",
    "Tolerance",
    "adjoint",
    "eigenvalues",
    "hermitian_sqrt",
    "inverse",
]
