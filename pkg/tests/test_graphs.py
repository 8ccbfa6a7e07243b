import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from syncert import graphs
from syncert.errors import InvalidArgument, Unsupported
from syncert.graphs import (cartesian, complete, custom, grid, incidence, k_matrix, lambda2,
                            lambda2_closed_form, lambda2_numeric, laplacian, line,
                            line_edge_weights, numeric_spectrum, star, tridiagonal_matrix,
                            tridiagonal_spectrum)


def test_line3_laplacian():
    assert np.array_equal(laplacian(line(3)), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])


def test_complete3_laplacian():
    assert np.array_equal(laplacian(complete(3)), [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])


def test_star_hub_is_last():
    L = laplacian(star(4))
    assert np.array_equal(np.diag(L), [1, 1, 1, 3])
    assert np.array_equal(incidence(star(3)), [[-1, 0], [0, -1], [1, 1]])


def test_grid22_is_four_cycle():
    G = grid(2, 2)
    assert np.array_equal(laplacian(G), laplacian(cartesian(line(2), line(2))))
    cyc = custom(4, [(0, 1), (1, 3), (3, 2), (2, 0)])
    assert np.array_equal(laplacian(G), laplacian(cyc))
    assert np.array_equal(np.diag(laplacian(G)), [2, 2, 2, 2])


def test_line3_incidence():
    assert np.array_equal(incidence(line(3)), [[-1, 0], [1, -1], [0, 1]])


def test_k_matrix_examples():
    assert np.array_equal(k_matrix(line(3)), [[2, -1], [-1, 2]])
    assert np.array_equal(k_matrix(complete(3), "complete_shortcut"), 3 * np.eye(3))
    with pytest.raises(InvalidArgument):
        k_matrix(line(4), "complete_shortcut")


@pytest.mark.parametrize("G, expected", [
    (line(3), 1.0),
    (complete(5), 5.0),
    (star(7), 1.0),
    (star(2), 2.0),
    (grid(3, 4), 4 * math.sin(math.pi / 8) ** 2),
])
def test_lambda2_closed(G, expected):
    assert lambda2_closed_form(G) == pytest.approx(expected, abs=1e-14)
    assert lambda2_numeric(G) == pytest.approx(expected, abs=1e-9)


def test_grid34_frozen():
    assert lambda2(grid(3, 4)) == pytest.approx(0.585786, abs=1e-6)


def test_custom_lambda2():
    G = custom(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    with pytest.raises(Unsupported):
        lambda2_closed_form(G)
    assert lambda2(G) == pytest.approx(2.0, abs=1e-12)  # 4-cycle plus chord: spectrum {0, 2, 4, 4}


def test_custom_validation():
    with pytest.raises(InvalidArgument):
        custom(3, [(0, 0), (1, 2)])
    with pytest.raises(InvalidArgument):
        custom(3, [(0, 1), (1, 0), (1, 2)])
    with pytest.raises(InvalidArgument):
        custom(4, [(0, 1), (2, 3)])
    with pytest.raises(InvalidArgument):
        line(1)


def test_numeric_spectrum_examples():
    assert numeric_spectrum(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx([1, 3], abs=1e-14)
    assert numeric_spectrum(laplacian(complete(4))) == pytest.approx([0, 4, 4, 4], abs=1e-12)
    assert abs(lambda2_numeric(line(10)) - 4 * math.sin(math.pi / 20) ** 2) <= 1e-9


def test_tridiagonal_examples():
    assert tridiagonal_spectrum(2, 0, 0, -1, -1, 2) == pytest.approx([1, 3], abs=1e-14)
    assert tridiagonal_spectrum(-2, 1, 1, 1, 1, 3) == pytest.approx([-3, -1, 0], abs=1e-14)
    got = tridiagonal_spectrum(2, 0, 0, -1, -1, 9)
    assert np.max(np.abs(got - numeric_spectrum(tridiagonal_matrix(2, 0, 0, -1, -1, 9)))) <= 1e-10


def test_tridiagonal_unsupported():
    with pytest.raises(Unsupported):
        tridiagonal_spectrum(0, 1, 0, 1, 1, 4)
    with pytest.raises(Unsupported):
        tridiagonal_spectrum(0, 2, 2, 1, 1, 4)
    with pytest.raises(InvalidArgument):
        tridiagonal_spectrum(0, 0, 0, 1, -1, 4)


def test_line_edge_weights_examples():
    pk, qp = line_edge_weights(4, 1)
    assert pk == pytest.approx([math.sqrt(0.5), 1.0, math.sqrt(0.5)], abs=1e-15)
    assert qp == pytest.approx(pk)
    K = k_matrix(line(4))
    assert np.max(np.abs(K @ pk - 4 * math.sin(math.pi / 8) ** 2 * pk)) <= 1e-10
    assert np.array_equal(line_edge_weights(7, 2)[1], np.ones(6))
    assert line_edge_weights(5, "inf")[1] == pytest.approx(1 / line_edge_weights(5, 1)[0])


def test_cartesian_node_order():
    # first factor outermost: node (i, j) has index i * N2 + j
    L = laplacian(cartesian(line(2), line(3)))
    assert np.array_equal(L, np.kron(laplacian(line(2)), np.eye(3)) + np.kron(np.eye(2), laplacian(line(3))))
    assert np.array_equal(laplacian(grid(2, 3)), L)


# properties

kinds = st.sampled_from(["line", "complete", "star"])


def build(kind, N):
    return {"line": line, "complete": complete, "star": star}[kind](N)


@given(kinds, st.integers(2, 50))
def test_laplacian_structure(kind, N):
    G = build(kind, N)
    L = laplacian(G)
    E = incidence(G)
    assert np.all(L @ np.ones(N) == 0)
    assert np.array_equal(E @ E.T, L)
    assert numeric_spectrum(L)[0] >= -1e-10
    assert abs(lambda2_closed_form(G) - lambda2_numeric(G)) <= 1e-8


@given(st.integers(2, 10), st.integers(2, 10))
def test_grid_lambda2(N1, N2):
    G = grid(N1, N2)
    assert abs(lambda2_closed_form(G) - lambda2_numeric(G)) <= 1e-8
    assert np.array_equal(incidence(G) @ incidence(G).T, laplacian(G))


@given(st.sampled_from(["line", "star"]), st.integers(2, 20))
def test_tree_edge_laplacian(kind, N):
    G = build(kind, N)
    K = k_matrix(G)
    wk = numeric_spectrum(K)
    wl = numeric_spectrum(laplacian(G))[1:]
    assert np.max(np.abs(wk - wl)) <= 1e-9
    assert wk[0] > 1e-10


@given(st.sampled_from(["line", "complete", "star", "grid"]), st.integers(2, 8))
def test_edge_transfer_identity(kind, N):
    G = grid(N, 3) if kind == "grid" else build(kind, N)
    E = incidence(G)
    assert np.array_equal(E.T @ laplacian(G), k_matrix(G) @ E.T)
    if kind == "complete":
        assert np.array_equal(E.T @ laplacian(G), k_matrix(G, "complete_shortcut") @ E.T)


@given(st.integers(1, 30), st.floats(-5, 5), st.floats(0.1, 3), st.sampled_from([1, -1]))
def test_tridiagonal_case_zero(n, v, s, sign):
    t = s if sign > 0 else s * 0.5  # s t > 0, possibly s != t
    w = tridiagonal_spectrum(v, 0, 0, s, t, n)
    assert np.max(np.abs(w - numeric_spectrum_general(tridiagonal_matrix(v, 0, 0, s, t, n)))) <= 1e-9


@given(st.integers(1, 30), st.floats(-5, 5), st.floats(0.1, 3),
       st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_tridiagonal_case_sigma(n, v, s, sign_s, sign_a):
    a = sign_a * s
    s = sign_s * s
    w = tridiagonal_spectrum(v, a, a, s, s, n)
    assert np.max(np.abs(w - numeric_spectrum(tridiagonal_matrix(v, a, a, s, s, n)))) <= 1e-9


def numeric_spectrum_general(M):
    # symmetrize a tridiagonal with s t > 0 by diagonal similarity
    s, t = M[1, 0] if M.shape[0] > 1 else 1.0, M[0, 1] if M.shape[0] > 1 else 1.0
    off = math.copysign(math.sqrt(s * t), s)
    S = np.diag(np.diag(M)) + off * (np.eye(M.shape[0], k=1) + np.eye(M.shape[0], k=-1))
    return numeric_spectrum(S)


@given(st.integers(3, 20), st.sampled_from([1, 2, "inf"]))
def test_perron_weights(N, p):
    pk, qp = line_edge_weights(N, p)
    assert np.all(pk > 0) and np.all(qp > 0)
    K = k_matrix(line(N))
    assert np.max(np.abs(K @ pk - 4 * math.sin(math.pi / (2 * N)) ** 2 * pk)) <= 1e-10
