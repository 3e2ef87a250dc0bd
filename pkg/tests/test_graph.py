import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from energy_coverage.graph import (
    CommGraph,
    DisconnectedGraphError,
    GraphPolicy,
    algebraic_connectivity,
    build_graph,
    jacobi_eigenvalues,
    laplacian,
)

LINE3 = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]


def test_complete_graph_degrees():
    g = build_graph(np.random.default_rng(0).uniform(0, 6, (6, 2)))
    assert list(g.degree()) == [5] * 6


def test_disk_graph_path():
    g = build_graph(LINE3, GraphPolicy("disk", 1.0))
    assert g.adjacency.astype(int).tolist() == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


def test_disk_graph_disconnected_rejected():
    with pytest.raises(DisconnectedGraphError):
        build_graph(LINE3, GraphPolicy("disk", 0.5))


def test_laplacians():
    k2 = build_graph([(0, 0), (1, 0)])
    assert laplacian(k2).tolist() == [[1, -1], [-1, 1]]
    p3 = build_graph(LINE3, GraphPolicy("disk", 1.0))
    assert laplacian(p3).tolist() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]
    k6 = laplacian(build_graph(np.arange(12.0).reshape(6, 2)))
    assert np.all(np.diag(k6) == 5) and np.all(k6[~np.eye(6, dtype=bool)] == -1)


def test_path3_spectrum():
    # characteristic polynomial of the P3 Laplacian is lambda (lambda - 1)(lambda - 3)
    p3 = build_graph(LINE3, GraphPolicy("disk", 1.0))
    assert jacobi_eigenvalues(laplacian(p3)) == pytest.approx([0.0, 1.0, 3.0], abs=1e-12)
    assert algebraic_connectivity(p3) == pytest.approx(1.0, abs=1e-12)


def test_complete_graph_lambda2_is_n():
    g = build_graph(np.arange(12.0).reshape(6, 2))
    assert algebraic_connectivity(g) == pytest.approx(6.0, abs=1e-10)


def test_disconnected_lambda2_zero():
    g = build_graph([(0, 0), (1, 0), (10, 0), (11, 0)], GraphPolicy("disk", 1.5), require_connected=False)
    assert g.components() == 2
    assert algebraic_connectivity(g) == pytest.approx(0.0, abs=1e-12)


def test_adjacency_validation():
    with pytest.raises(ValueError):
        CommGraph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        CommGraph(np.eye(2))
    with pytest.raises(ValueError):
        GraphPolicy("disk")


def test_jacobi_matches_eigvalsh_on_random_symmetric():
    a = np.random.default_rng(1).normal(size=(30, 30))
    sym = a + a.T
    assert np.max(np.abs(jacobi_eigenvalues(sym) - np.linalg.eigvalsh(sym))) < 1e-9


graphs = st.integers(2, 10).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(
        lambda bits: _from_bits(n, bits)
    )
)


def _from_bits(n, bits):
    a = np.zeros((n, n), dtype=bool)
    a[np.triu_indices(n, 1)] = bits
    return CommGraph(a | a.T)


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_spectrum_matches_numpy_oracle(g):
    lam = jacobi_eigenvalues(laplacian(g))
    oracle = np.linalg.eigvalsh(laplacian(g))
    assert np.max(np.abs(lam - oracle)) < 1e-9
    assert lam.min() >= -1e-9


@settings(max_examples=80, deadline=None)
@given(graphs, st.data())
def test_lambda2_monotone_under_edge_addition(g, data):
    i = data.draw(st.integers(0, g.n - 1))
    j = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != i))
    assert algebraic_connectivity(g.with_edge(i, j)) >= algebraic_connectivity(g) - 1e-9


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_lambda2_positive_iff_connected(g):
    assert (algebraic_connectivity(g) > 1e-9) == g.is_connected()
