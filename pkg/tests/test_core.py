import pytest
from hypothesis import given, settings

from cyclic_lattice_lab.core import (
    ParameterList,
    build_polytope,
    delta_matrix_form,
    determinant,
    mat_mul,
    negate_params,
    negation_matrix,
    translate_params,
)
from cyclic_lattice_lab.errors import NonIncreasingParameters, TooFewVertices

from conftest import cyclic_params


def test_vertices_small():
    P = build_polytope(2, [0, 1, 3])
    assert P.vertices == ((1, 0, 0), (1, 1, 1), (1, 3, 9))


def test_gaps_instance():
    P = build_polytope(4, [0, 1, 3, 5, 6])
    assert len(P.vertices) == 5 and all(len(v) == 5 for v in P.vertices)
    assert P.gaps() == (1, 2, 2, 1)


def test_big_integers_exact():
    P = build_polytope(6, [0, 10 ** 6, 10 ** 6 + 1, 3 * 10 ** 6, 4 * 10 ** 6, 5 * 10 ** 6, 7 * 10 ** 6])
    assert P.vertex(7)[6] == (7 * 10 ** 6) ** 6


@pytest.mark.parametrize("taus, err", [([0, 0, 1, 2], NonIncreasingParameters), ([0, 2, 1, 3], NonIncreasingParameters), ([0, 1, 2], TooFewVertices)])
def test_bad_parameters(taus, err):
    with pytest.raises(err):
        build_polytope(3, taus)


def test_translate():
    P = build_polytope(2, [0, 2, 3])
    Q = translate_params(P, -2)
    assert Q.taus == (-2, 0, 1) and Q.deltas == P.deltas
    assert translate_params(build_polytope(4, [0, 1, 3, 5, 6]), 10).taus == (10, 11, 13, 15, 16)
    R = build_polytope(1, [0, 1])
    assert translate_params(R, 0) == R


def test_negate():
    P = build_polytope(2, [0, 2, 3])
    Q = negate_params(P)
    assert Q.taus == (-3, -2, 0) and Q.gaps() == (1, 2)
    assert negate_params(build_polytope(4, [0, 1, 3, 5, 6])).taus == (-6, -5, -3, -1, 0)


def test_negation_matrix_maps_vertices():
    P = build_polytope(3, [0, 1, 4, 6])
    Q = negate_params(P)
    D = negation_matrix(3)
    for i in range(1, P.n + 1):
        assert mat_mul([P.vertex(i)], D)[0] == Q.vertex(P.n + 1 - i)


def test_delta_matrix_small():
    M, U = delta_matrix_form(build_polytope(2, [0, 1, 3]))
    assert M == ((1, 0, 0), (1, 1, 0), (1, 3, 6))
    assert abs(U.determinant) == 1


def test_delta_matrix_last_row():
    M, _ = delta_matrix_form(build_polytope(4, [0, 2, 3, 5, 8]))
    assert M[4] == (1, 8, 48, 240, 720)
    assert M[0] == (1, 0, 0, 0, 0)


@settings(max_examples=60, deadline=None)
@given(cyclic_params(d_max=5, extra_max=3, gap_max=6))
def test_delta_matrix_property(dt):
    d, taus = dt
    P = build_polytope(d, taus)
    M, U = delta_matrix_form(P)
    assert mat_mul(P.vertices, U.matrix) == M
    assert abs(determinant(U.matrix)) == 1
    for i in range(1, P.n + 1):
        row, acc = [1], 1
        for k in range(1, d + 1):
            acc *= P.delta(k, i)
            row.append(acc)
        assert M[i - 1] == tuple(row)
    # depends only on differences
    assert delta_matrix_form(translate_params(P, 7))[0] == M


@settings(max_examples=60, deadline=None)
@given(cyclic_params(d_max=5))
def test_delta_identities(dt):
    d, taus = dt
    P = build_polytope(d, taus)
    r = range(1, P.n + 1)
    for i in r:
        for j in r:
            assert P.delta(i, j) == -P.delta(j, i)
            assert i >= j or P.delta(i, j) > 0
            for k in r:
                assert P.delta(i, j) + P.delta(j, k) == P.delta(i, k)
    assert negate_params(negate_params(P)) == P


def test_parameter_list_n():
    assert ParameterList(2, (0, 1, 5)).n == 3
