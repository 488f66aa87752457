"""Hot numeric kernels with numba and pure-numpy implementations.

Each kernel exists twice, ``<name>_numba`` and ``<name>_numpy``; the public
name is bound to one of them according to :data:`hermitizer._accel.USE_NUMBA`.
Both variants must agree to rounding error, which the test-suite checks.
"""
import numpy as np

from ._accel import USE_NUMBA, njit


# --------------------------------------------------------------------------
# classical RK4 for d/dt psi = A psi with constant A
# --------------------------------------------------------------------------

def rk4_integrate_numpy(A, psi0, h, steps_per_sample, n_samples):
    """Integrate ``psi' = A psi`` and record the state every ``steps_per_sample`` steps.

    Returns an ``(n_samples, dim)`` array whose first row is ``psi0``.
    """
    A = np.ascontiguousarray(A, dtype=np.complex128)
    psi = np.array(psi0, dtype=np.complex128)
    out = np.empty((n_samples, psi.size), dtype=np.complex128)
    out[0] = psi
    half = 0.5 * h
    for i in range(1, n_samples):
        for _ in range(steps_per_sample):
            k1 = A @ psi
            k2 = A @ (psi + half * k1)
            k3 = A @ (psi + half * k2)
            k4 = A @ (psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i] = psi
    return out


@njit
def _matvec(A, x, out):
    n = x.shape[0]
    for i in range(n):
        acc = 0j
        for j in range(n):
            acc += A[i, j] * x[j]
        out[i] = acc


@njit
def rk4_integrate_numba(A, psi0, h, steps_per_sample, n_samples):
    n = psi0.shape[0]
    out = np.empty((n_samples, n), dtype=np.complex128)
    psi = psi0.copy()
    out[0, :] = psi
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    half = 0.5 * h
    sixth = h / 6.0
    for i in range(1, n_samples):
        for _ in range(steps_per_sample):
            _matvec(A, psi, k1)
            for m in range(n):
                tmp[m] = psi[m] + half * k1[m]
            _matvec(A, tmp, k2)
            for m in range(n):
                tmp[m] = psi[m] + half * k2[m]
            _matvec(A, tmp, k3)
            for m in range(n):
                tmp[m] = psi[m] + h * k3[m]
            _matvec(A, tmp, k4)
            for m in range(n):
                psi[m] = psi[m] + sixth * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])
        out[i, :] = psi
    return out


# --------------------------------------------------------------------------
# Hermitization-path table: one row of superscripts per choice sequence
# --------------------------------------------------------------------------

def path_table_numpy(n_steps):
    """Superscript sequences of all ``2**n_steps`` paths.

    Row ``m`` encodes the choice sequence whose step ``s`` (0-based) is a
    Dyson step iff bit ``n_steps - 1 - s`` of ``m`` is set, so rows come in
    lexicographic order with the amendment step sorting first.
    """
    masks = np.arange(2 ** n_steps, dtype=np.int64)
    shifts = np.arange(n_steps - 1, -1, -1, dtype=np.int64)
    bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.int16)
    table = np.zeros((masks.size, n_steps + 1), dtype=np.int16)
    np.cumsum(bits, axis=1, out=table[:, 1:])
    return table


@njit
def path_table_numba(n_steps):
    n_paths = 1 << n_steps
    table = np.zeros((n_paths, n_steps + 1), dtype=np.int16)
    for m in range(n_paths):
        depth = 0
        for s in range(n_steps):
            depth += (m >> (n_steps - 1 - s)) & 1
            table[m, s + 1] = depth
    return table


# --------------------------------------------------------------------------
# relative eigenvector mass on a subset of grid points
# --------------------------------------------------------------------------

def edge_mass_numpy(vectors, edge):
    """Fraction of each column's squared norm that sits on rows where ``edge`` is true."""
    w = np.abs(vectors) ** 2
    return w[edge].sum(axis=0) / w.sum(axis=0)


@njit
def edge_mass_numba(vectors, edge):
    n, m = vectors.shape
    out = np.empty(m, dtype=np.float64)
    for j in range(m):
        total = 0.0
        part = 0.0
        for i in range(n):
            v = vectors[i, j]
            a = v.real * v.real + v.imag * v.imag
            total += a
            if edge[i]:
                part += a
        out[j] = part / total
    return out


if USE_NUMBA:
    rk4_integrate = rk4_integrate_numba
    path_table = path_table_numba
    edge_mass = edge_mass_numba
else:
    rk4_integrate = rk4_integrate_numpy
    path_table = path_table_numpy
    edge_mass = edge_mass_numpy

BACKENDS = {
    "numpy": {
        "rk4_integrate": rk4_integrate_numpy,
        "path_table": path_table_numpy,
        "edge_mass": edge_mass_numpy,
    },
    "numba": {
        "rk4_integrate": rk4_integrate_numba,
        "path_table": path_table_numba,
        "edge_mass": edge_mass_numba,
    },
}
