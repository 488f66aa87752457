import itertools
from math import comb

import numpy as np
import pytest

from hermitizer.chains import DysonChain, metrics_from_dyson, total_dyson
from hermitizer.errors import IndexOutOfRange, LimitExceeded, TerminalNode
from hermitizer.lattice import (
    HermitizationPath,
    Step,
    build_lattice,
    diagonal_map,
    edge_path_counts,
    enumerate_paths,
    node_count,
    representation,
    representations,
    terminal_path_counts,
)
from hermitizer.matkernel import rel_distance, spectrum_distance, eigenvalues

from helpers import quasi_hermitian_model


@pytest.fixture(scope="module")
def model():
    return quasi_hermitian_model(np.random.default_rng(11), 3, 4)


def test_node_set(model):
    H, chain = model
    lat = build_lattice(H, chain)
    assert len(lat) == node_count(3) == 10
    assert {n.key for n in lat} == {(k, d) for k in range(4) for d in range(4) if k + d <= 3}
    assert [n.label for n in lat.terminals()] == ["R_0^(0)", "R_0^(1)", "R_0^(2)", "R_0^(3)"]
    assert [n.metric_depth for n in lat.terminals()] == [3, 2, 1, 0]


def test_every_node_is_isospectral(model):
    H, chain = model
    ref = eigenvalues(H)
    for node in build_lattice(H, chain):
        assert spectrum_distance(eigenvalues(node.H_node), ref) < 1e-9


def test_amend_and_dyson_steps(model):
    H, chain = model
    lat = build_lattice(H, chain)
    Z = lat.metrics
    for node in lat:
        if node.k == 0:
            continue
        k, d = node.key
        amended = lat[(k - 1, d)]
        # an amendment appends the next metric factor; W slides down one index
        assert rel_distance(amended.P, node.P @ Z.factor(k + d)) < 1e-10
        assert rel_distance(amended.W, chain.span(k + d - 1, k)) < 1e-14
        # a Dyson step maps W through the sub-map and keeps the metric
        M = diagonal_map(node, chain)
        nxt = lat[(k - 1, d + 1)]
        assert rel_distance(M @ node.W, nxt.W) < 1e-12
        assert rel_distance(M @ node.H_node, nxt.H_node @ M) < 1e-10
        assert rel_distance(nxt.P, node.P) < 1e-14


def test_sub_maps_telescope_along_bgi_path(model):
    H, chain = model
    lat = build_lattice(H, chain)
    acc = np.eye(chain.dim)
    for k in range(3, 0, -1):
        acc = diagonal_map(lat[(k, 3 - k)], chain) @ acc
    assert rel_distance(acc, total_dyson(chain)) < 1e-12


def test_terminal_has_no_diagonal_map(model):
    H, chain = model
    lat = build_lattice(H, chain)
    with pytest.raises(TerminalNode):
        diagonal_map(lat[(0, 2)], chain)


def test_terminal_metric_identity(model):
    H, chain = model
    lat = build_lattice(H, chain)
    theta = metrics_from_dyson(chain).theta()
    for node in lat.terminals():
        assert rel_distance(node.W.conj().T @ node.P @ node.W, theta) < 1e-10


def test_representation_ends(model):
    H, chain = model
    Om = total_dyson(chain)
    top = representation(H, chain, 3)
    assert rel_distance(top.physical_hamiltonian, H) < 1e-14
    assert rel_distance(top.physical_metric, Om.conj().T @ Om) < 1e-12
    bottom = representation(H, chain, 0)
    assert rel_distance(bottom.physical_metric, np.eye(chain.dim)) == 0.0
    h = bottom.physical_hamiltonian
    assert rel_distance(h, h.conj().T) < 1e-10
    assert [r.dyson_depth for r in representations(H, chain)] == [3, 2, 1, 0]
    with pytest.raises(IndexOutOfRange):
        representation(H, chain, 4)


def test_representations_match_terminal_nodes(model):
    H, chain = model
    lat = build_lattice(H, chain)
    for rep in representations(H, chain):
        node = lat[(0, rep.dyson_depth)]
        assert rel_distance(rep.physical_hamiltonian, node.H_node) < 1e-12
        assert rel_distance(rep.physical_metric, node.P) < 1e-12


def test_path_listing_order_and_endpoints():
    paths = enumerate_paths(3)
    assert len(paths) == 8
    assert paths[0].choices == (Step.AMEND,) * 3
    assert paths[-1].choices == (Step.DYSON,) * 3
    assert paths[0].dyson_depth == 0 and paths[0].metric_depth == 3
    assert paths[1].superscripts == (0, 0, 0, 1)
    assert paths[-1].describe() == "R_3^(0) -> R_2^(1) -> R_1^(2) -> R_0^(3)"
    for p in paths:
        s = p.superscripts
        assert s[0] == 0 and all(b - a in (0, 1) for a, b in zip(s, s[1:]))
        assert HermitizationPath.from_choices(p.choices) == p


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_against_brute_force(n):
    ends = [0] * (n + 1)
    edges = {}
    for choice in itertools.product((0, 1), repeat=n):
        k, d = n, 0
        for c in choice:
            edge = ((k, d), (k - 1, d + c))
            edges[edge] = edges.get(edge, 0) + 1
            k, d = k - 1, d + c
        ends[d] += 1
    assert terminal_path_counts(n) == ends == [comb(n, d) for d in range(n + 1)]
    assert edge_path_counts(n) == edges
    assert len(enumerate_paths(n)) == 2**n


def test_path_limit():
    with pytest.raises(LimitExceeded):
        enumerate_paths(0)
    with pytest.raises(LimitExceeded):
        terminal_path_counts(21)
    assert terminal_path_counts(20)[10] == comb(20, 10)


def test_one_factor_chain():
    chain = DysonChain([[[1, 0.5], [0, 1]]])
    H = np.linalg.solve(chain.factor(1), np.diag([1.0, 2.0]) @ chain.factor(1))
    lat = build_lattice(H, chain)
    assert len(lat) == 3
    assert rel_distance(diagonal_map(lat[(1, 0)], chain), chain.factor(1)) == 0.0
