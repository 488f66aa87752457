import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermitizer.chains import metrics_from_dyson, total_dyson
from hermitizer.conjugation import (
    MetricContext,
    check_observable,
    is_quasi_hermitian,
    quasi_hermiticity_residual,
    sharp,
    transported_metric,
)
from hermitizer.errors import NotHermitian, NotPositiveDefinite
from hermitizer.matkernel import rel_distance

from helpers import quasi_hermitian_model, random_factor


def _context(seed, dim):
    rng = np.random.default_rng(seed)
    O = random_factor(rng, dim)
    return MetricContext.from_metric(O.conj().T @ O), rng


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 5))
def test_sharp_is_an_involutive_antilinear_anti_homomorphism(seed, dim):
    ctx, rng = _context(seed, dim)
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    B = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    c = complex(*rng.normal(size=2))
    assert rel_distance(sharp(sharp(A, ctx), ctx), A) < 1e-9
    assert rel_distance(sharp(A @ B, ctx), sharp(B, ctx) @ sharp(A, ctx)) < 1e-9
    assert rel_distance(sharp(c * A, ctx), np.conj(c) * sharp(A, ctx)) < 1e-9


def test_sharp_with_trivial_metric_is_adjoint():
    ctx = MetricContext.from_metric(np.eye(2))
    A = np.array([[1, 2j], [3, 4]])
    np.testing.assert_allclose(sharp(A, ctx), A.conj().T)


def test_model_hamiltonian_is_quasi_hermitian():
    H, chain = quasi_hermitian_model(np.random.default_rng(5), 2, 4)
    theta = metrics_from_dyson(chain).theta()
    ctx = MetricContext.from_metric(theta)
    assert is_quasi_hermitian(H, ctx)
    assert rel_distance(sharp(H, ctx), H) < 1e-10
    # the same H with the wrong metric fails
    assert not is_quasi_hermitian(H, MetricContext.from_metric(np.eye(4)))


def test_observable_check():
    H, chain = quasi_hermitian_model(np.random.default_rng(6), 1, 3)
    Om = total_dyson(chain)
    ctx = MetricContext.from_metric(Om.conj().T @ Om)
    L = np.linalg.solve(Om, np.diag([1.0, -2.0, 0.5]) @ Om)
    assert check_observable(L, ctx).passed
    assert not check_observable(L + 1j * np.eye(3), ctx).passed


def test_residual_edge_cases():
    assert quasi_hermiticity_residual(np.zeros((2, 2)), np.eye(2)) == 0.0
    report = is_quasi_hermitian(np.diag([1.0, 2.0]), MetricContext.from_metric(np.eye(2)))
    assert report.residual == 0.0 and bool(report)


def test_metric_context_validation():
    with pytest.raises(NotHermitian):
        MetricContext.from_metric([[1, 1], [0, 1]])
    with pytest.raises(NotPositiveDefinite):
        MetricContext.from_metric(np.diag([1.0, 0.0]))


def test_transported_metric():
    rng = np.random.default_rng(7)
    O = random_factor(rng, 3)
    V = random_factor(rng, 3)
    theta = O.conj().T @ O
    moved = transported_metric(theta, V)
    # (V^{-1})^dagger Theta V^{-1}
    Vi = np.linalg.inv(V)
    assert rel_distance(moved, Vi.conj().T @ theta @ Vi) < 1e-12
