from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclic_lattice_lab.core import build_polytope, negate_params
from cyclic_lattice_lab.errors import HypothesisViolated, NotAFacet, WitnessRefuted
from cyclic_lattice_lab.facets import enumerate_facets, evaluate_sigma, oriented_facet_forms, sigma_form
from cyclic_lattice_lab.lattice import box_scan_points, contains
from cyclic_lattice_lab.veryample import (
    DIRECT,
    REDUCTION,
    CertifiedUpTo,
    HoleFound,
    build_witness_p,
    direct_witness,
    facet_subpolytope,
    revalidate,
    verify_witness,
    vertex_local_certify,
    very_ample_obstruction,
    witness_closed_form,
    witness_coefficients,
)

from conftest import rational_solve

C4 = (0, 2, 3, 5, 8)
P_C4 = (0, -1, -4, -11, -15)
# barycentric coordinates of P_C4, from an independent rational solve of the vertex matrix
COEFFS_C4 = {1: Fraction(17, 240), 2: Fraction(35, 36), 3: Fraction(-17, 15), 4: Fraction(4, 45), 5: Fraction(1, 720)}


@pytest.fixture(scope="module")
def c4_points():
    """Degree-1 points of C_4(0,2,3,5,8) from the box oracle."""
    P = build_polytope(4, C4)
    return np.array(sorted(box_scan_points(P, 1)), dtype=np.int64)


def _encoder(A, scale=4):
    """Mixed-radix integer code for vectors bounded by scale * max|A| per coordinate."""
    bound = scale * np.abs(A).max(axis=0) + 1

    def encode(X):
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        code = np.zeros(len(X), dtype=np.int64)
        for c in range(X.shape[1]):
            code = code * (2 * bound[c] + 1) + (X[:, c] + bound[c])
        return code

    return encode


def _is_sum_of_two(A, encode, codes, x):
    return bool(np.isin(encode(np.array(x) - A), codes).any())


def test_witness_vector_and_coefficients():
    P = build_polytope(4, C4)
    p = build_witness_p(P)
    assert p == P_C4
    assert p[0] == 0
    solved = rational_solve(P, (1, 2, 3, 4, 5), p)
    assert dict(enumerate(solved, 1)) == COEFFS_C4
    assert witness_coefficients(P) == COEFFS_C4 == witness_closed_form(P)
    assert sum(COEFFS_C4.values()) == 0
    assert COEFFS_C4[3] < -1


def test_witness_lies_in_tangent_cone_only():
    P = build_polytope(4, C4)
    p = build_witness_p(P)
    assert not contains(P, p)
    assert evaluate_sigma(sigma_form(P, (1, 2, 4, 5)), p) < 0
    for S, f in oriented_facet_forms(P):
        if 3 in S:
            assert sum(a * b for a, b in zip(f, p)) >= 0


def test_witness_holes_against_oracle(c4_points):
    """k=2,3 give holes, k=1 leaves P*; each checked without the graded search."""
    P = build_polytope(4, C4)
    A = c4_points
    encode = _encoder(A)
    codes = encode(A)
    v3 = P.vertex(3)
    q = {k: tuple(k * a + b for a, b in zip(v3, P_C4)) for k in (1, 2, 3)}
    # k = 1: the v_3 coordinate of q_1 is 1 - 17/15 < 0
    assert rational_solve(P, (1, 2, 3, 4, 5), q[1])[2] == Fraction(-2, 15)
    assert not contains(P, q[1])
    assert contains(P, q[2]) and not _is_sum_of_two(A, encode, codes, q[2])
    assert q[2] == (2, 5, 14, 43, 147)
    assert contains(P, q[3])
    rests = np.array(q[3]) - A
    for r in rests:
        assert not _is_sum_of_two(A, encode, codes, r)

    wf = verify_witness(P, P_C4, 3, 3)
    assert wf.verified_k == (2, 3)
    assert dict(wf.status) == {1: "outside", 2: "hole", 3: "hole"}
    assert (1, 2, 4, 5) in wf.beyond


def test_direct_witness_family():
    P = build_polytope(4, C4)
    wf = direct_witness(P)
    assert wf.construction == DIRECT and wf.base_vertex == 3 and wf.p == P_C4
    assert dict(wf.coefficients) == COEFFS_C4
    assert revalidate(P, wf)


def test_negated_instance_uses_mirror_vertex():
    P = negate_params(build_polytope(4, C4))
    assert P.delta(P.n - 2, P.n - 1) == 1
    wf = direct_witness(P)
    assert wf.base_vertex == 3 and wf.p == (0, 1, -4, 11, -15)
    assert wf.verified_k == (2, 3)
    # coefficients move with the vertices under the mirror
    assert dict(wf.coefficients) == {6 - i: c for i, c in COEFFS_C4.items()}


def test_fake_witness_refuted():
    P = build_polytope(4, C4)
    with pytest.raises(WitnessRefuted):
        verify_witness(P, (1, 0, 0, 0, 0), 3)  # wrong degree
    with pytest.raises(WitnessRefuted):
        verify_witness(P, tuple(-c for c in P_C4), 3)  # leaves the tangent cone
    # a difference of two degree-1 points is in the monoid, so k v_3 + p decomposes or leaves P*
    fake = tuple(a - b for a, b in zip(P.vertex(4), P.vertex(3)))
    with pytest.raises(WitnessRefuted):
        verify_witness(P, fake, 3)
    assert not revalidate(P, direct_witness(P).__class__(p=fake, base_vertex=3, verified_k=(1,), d=4, taus=C4))


def test_hypothesis_checks():
    with pytest.raises(HypothesisViolated):
        build_witness_p(build_polytope(4, [0, 2, 4, 6, 8]))
    with pytest.raises(HypothesisViolated):
        build_witness_p(build_polytope(3, [0, 1, 2, 3, 4]))
    assert direct_witness(build_polytope(4, [0, 2, 4, 6, 8])) is None


def test_facet_subpolytope():
    P = build_polytope(5, [0, 2, 3, 5, 8, 11])
    F = enumerate_facets(P)
    for S in F:
        Q = facet_subpolytope(P, S)
        assert Q.d == 4 and Q.taus == tuple(P.taus[i - 1] for i in S)
    # a simplex: every 5-subset is a facet
    assert len(F) == 6
    Q = build_polytope(5, [0, 2, 3, 5, 8, 11, 15])
    bad = [S for S in combinations(range(1, 8), 5) if S not in enumerate_facets(Q)]
    assert (1, 2, 4, 6, 7) in bad and (1, 2, 4, 5, 7) not in bad
    for S in bad:
        with pytest.raises(NotAFacet):
            facet_subpolytope(Q, S)


def test_obstruction_examples():
    assert very_ample_obstruction(build_polytope(4, [0, 2, 4, 6, 8])) is None
    assert very_ample_obstruction(build_polytope(3, [0, 1, 2, 3, 4])) is None
    P5 = build_polytope(5, [0, 2, 3, 5, 8, 11])
    wf = very_ample_obstruction(P5)
    assert wf.construction == REDUCTION
    assert wf.chain == (((1, 2, 3, 4, 5), (0, 2, 3, 5, 8)),)
    assert (wf.d, wf.taus) == (4, C4)
    assert revalidate(P5, wf)
    # a tampered chain is rejected
    bad = wf.__class__(**{**wf.__dict__, "chain": (((2, 3, 4, 5, 6), (0, 2, 3, 5, 8)),)})
    assert not revalidate(P5, bad)


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(-3, 3))
def test_closed_form_matches_b_sum(g1, g3, g4, start):
    taus = [start, start + g1, start + g1 + 1, start + g1 + 1 + g3, start + g1 + 1 + g3 + g4]
    P = build_polytope(4, taus)
    assert witness_coefficients(P) == witness_closed_form(P)
    p = build_witness_p(P)
    assert p[0] == 0 and sum(witness_coefficients(P).values()) == 0
    solved = rational_solve(P, (1, 2, 3, 4, 5), p)
    assert dict(enumerate(solved, 1)) == witness_coefficients(P)


def test_closed_form_over_small_grid():
    seen = 0
    for a in range(1, 8):
        for b in range(1, 8):
            for c in range(1, 8):
                taus = [0, a, a + 1, a + 1 + b, a + 1 + b + c]
                if taus[-1] > 20:
                    continue
                P = build_polytope(4, taus)
                assert witness_coefficients(P) == witness_closed_form(P)
                assert witness_coefficients(P)[3] < -1
                seen += 1
    assert seen > 100


def test_vertex_local_certify():
    assert vertex_local_certify(build_polytope(3, [0, 1, 2, 3]), 2, 4) == CertifiedUpTo(4)
    res = vertex_local_certify(build_polytope(4, C4), 3, 2)
    assert isinstance(res, HoleFound) and res.degree == 2 and res.base_vertex == 3
    assert res.vector[0] == 0
    with pytest.raises(IndexError):
        vertex_local_certify(build_polytope(3, [0, 1, 2, 3]), 7, 2)
