"""Random model generators shared by the test modules."""
import numpy as np

from hermitizer.chains import DysonChain, total_dyson
from hermitizer.toymodel import ToyParams, build


def random_factor(rng, dim, spread=0.4):
    """Well-conditioned complex matrix close to the identity."""
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return np.eye(dim) + spread * X / np.sqrt(dim)


def random_hermitian(rng, dim):
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (X + X.conj().T)


def random_chain(rng, n_factors, dim):
    return DysonChain([random_factor(rng, dim) for _ in range(n_factors)])


def quasi_hermitian_model(rng, n_factors, dim):
    """``(H, chain)`` with ``H = Omega^{-1} h Omega`` for a random Hermitian ``h``."""
    chain = random_chain(rng, n_factors, dim)
    Om = total_dyson(chain)
    h = random_hermitian(rng, dim)
    H = np.linalg.solve(Om, h @ Om)
    return H, chain


def instance_set(seed=2024, n_random=20):
    """The toy model at a generic point plus ``n_random`` random chains.

    Chain lengths cycle through 1..4 and dimensions through 2..6, so every
    value of each appears.
    """
    toy = build(ToyParams(0.3, 0.2, 0.1))
    out = [("toy(0.3,0.2,0.1)", toy.H, toy.chain)]
    rng = np.random.default_rng(seed)
    for i in range(n_random):
        n = 1 + i % 4
        dim = 2 + i % 5
        H, chain = quasi_hermitian_model(rng, n, dim)
        out.append((f"random#{i}(N={n},dim={dim})", H, chain))
    return out


def generic_toy_params(rng, count, margin=0.05):
    out = []
    while len(out) < count:
        p = ToyParams(*rng.uniform(-2.0, 2.0, size=3))
        if p.is_generic(margin):
            out.append(p)
    return out
