"""Non-very-ampleness witnesses for cyclic polytopes with a unit gap.

In dimension 4 with Delta_23 = 1 the vector p = b_23 + b_134 + b_12345 lies in
the tangent cone at v_3 but outside the monoid generated by x - v_3, so
k*v_3 + p is a hole of every dilate that contains it. Higher dimensions
reduce to dimension 4 through a chain of facets, each again a cyclic polytope.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import lattice
from .basis import b_coefficients, b_vector
from .core import CyclicPolytope, build_polytope, negate_params
from .errors import HypothesisViolated, NotAFacet, WitnessRefuted
from .facets import enumerate_facets, oriented_facet_forms
from .normality import GradedSplitter, hole_sets

DIRECT = "Direct4D"
REDUCTION = "FacetReduction"


@dataclass(frozen=True)
class ShiftedGeneratorSet:
    base_vertex: int
    vectors: np.ndarray  # rows x - v_base for x in P* cap Z^{d+1}

    def __len__(self):
        return len(self.vectors)


@dataclass(frozen=True)
class WitnessFamily:
    p: tuple[int, ...]
    base_vertex: int
    verified_k: tuple[int, ...]
    construction: str = DIRECT
    # per-k outcome: "hole", "outside" (k v + p not in kP*) or "decomposes"
    status: tuple[tuple[int, str], ...] = ()
    # facets crossed on the way down: (facet of the previous polytope, its parameters)
    chain: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    # polytope carrying p: the input itself, or the last facet in the chain
    d: int = 4
    taus: tuple[int, ...] = ()
    # exact coefficients of p over the five vertices used, as (vertex index, coefficient)
    coefficients: tuple[tuple[int, Fraction], ...] = ()
    beyond: tuple[tuple[int, ...], ...] = ()

    @property
    def polytope(self) -> CyclicPolytope:
        return build_polytope(self.d, self.taus)


@dataclass(frozen=True)
class CertifiedUpTo:
    bound: int


@dataclass(frozen=True)
class HoleFound:
    vector: tuple[int, ...]
    degree: int
    base_vertex: int


def shifted_generators(P, i: int, budget: int | None = None) -> ShiftedGeneratorSet:
    A = lattice.enumerate_points(P, 1, budget).array
    return ShiftedGeneratorSet(i, A - np.array(P.vertex(i), dtype=A.dtype))


# ---------------------------------------------------------------------------
# the d = 4 vector


def witness_closed_form(P: CyclicPolytope) -> dict[int, Fraction]:
    """Coefficients of p over v_1..v_5 written out as rational expressions."""
    D = lambda i, j: Fraction(P.delta(i, j))
    return {
        1: (D(1, 2) * D(1, 5) + 1) / (D(1, 2) * D(1, 3) * D(1, 4) * D(1, 5)),
        2: (1 - 1 / (D(1, 2) * D(2, 4) * D(2, 5))) / D(2, 3),
        3: -(1 + (D(2, 3) * D(3, 5) - 1) / (D(1, 3) * D(3, 4) * D(3, 5))) / D(2, 3),
        4: (D(2, 4) * D(4, 5) - 1) / (D(1, 4) * D(2, 4) * D(3, 4) * D(4, 5)),
        5: 1 / (D(1, 5) * D(2, 5) * D(3, 5) * D(4, 5)),
    }


def witness_coefficients(P: CyclicPolytope) -> dict[int, Fraction]:
    """Coefficients of b_23 + b_134 + b_12345 over v_1..v_5, summed from the b's."""
    out = {i: Fraction(0) for i in range(1, 6)}
    for S in ((2, 3), (1, 3, 4), (1, 2, 3, 4, 5)):
        for i, c in b_coefficients(P, S).items():
            out[i] += c
    return out


def build_witness_p(P: CyclicPolytope) -> tuple[int, ...]:
    if P.d != 4 or P.n < 5:
        raise HypothesisViolated(f"the direct witness needs d = 4 and n >= 5, got {P!r}")
    if P.delta(2, 3) != 1:
        raise HypothesisViolated(f"the direct witness needs Delta_23 = 1, got {P.delta(2, 3)}")
    coeffs = witness_coefficients(P)
    closed = witness_closed_form(P)
    if coeffs != closed:
        raise WitnessRefuted(f"b-vector sum {coeffs} disagrees with the closed form {closed}")
    if not coeffs[3] < -1:
        raise WitnessRefuted(f"coefficient of v_3 is {coeffs[3]}, not below -1")
    p = [0] * 5
    for S in ((2, 3), (1, 3, 4), (1, 2, 3, 4, 5)):
        p = [a + b for a, b in zip(p, b_vector(P, S).value)]
    # cross-check the rational expansion against the integer sum
    expanded = [sum((c * P.vertex(i)[k] for i, c in coeffs.items()), Fraction(0)) for k in range(5)]
    if expanded != p:
        raise WitnessRefuted("rational expansion of p does not match its integer value")
    return tuple(p)


# ---------------------------------------------------------------------------
# independent verification


def verify_witness(P, p, base_vertex: int, k_max: int = 3, splitter: GradedSplitter | None = None) -> WitnessFamily:
    """Check p against P from scratch and report which k give holes k*v_base + p.

    Uses only the oriented facet forms and a complete graded search. Raises
    WitnessRefuted when p leaves the tangent cone, is not cut off by any
    facet avoiding the base vertex, decomposes at some k, or yields no hole.
    """
    p = tuple(int(v) for v in p)
    if len(p) != P.d + 1 or p[0] != 0:
        raise WitnessRefuted(f"p must be an integer vector of degree 0, got {p}")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    forms = oriented_facet_forms(P)
    val = lambda f: sum(a * b for a, b in zip(f, p))
    through = [(S, val(f)) for S, f in forms if base_vertex in S]
    if any(v < 0 for _, v in through):
        raise WitnessRefuted(f"p leaves the tangent cone at v_{base_vertex}: {through}")
    beyond = tuple(S for S, f in forms if base_vertex not in S and val(f) < 0)
    if not beyond:
        raise WitnessRefuted("no facet separates p from the cone over P*")
    sp = splitter or GradedSplitter(P)
    v = P.vertex(base_vertex)
    status, verified = [], []
    for k in range(1, k_max + 1):
        q = tuple(k * a + b for a, b in zip(v, p))
        if not lattice.contains(P, q):
            status.append((k, "outside"))
        elif sp.decomposes(q, k):
            status.append((k, "decomposes"))
            raise WitnessRefuted(f"{q} is a sum of {k} lattice points of P*")
        else:
            status.append((k, "hole"))
            verified.append(k)
    if not verified:
        raise WitnessRefuted(f"no k <= {k_max} gives a lattice point of kP*")
    return WitnessFamily(
        p=p, base_vertex=base_vertex, verified_k=tuple(verified), status=tuple(status),
        d=P.d, taus=P.taus, beyond=beyond,
    )


# ---------------------------------------------------------------------------
# dispatch


def facet_subpolytope(P: CyclicPolytope, S) -> CyclicPolytope:
    S = tuple(sorted(S))
    if S not in enumerate_facets(P):
        raise NotAFacet(f"{S} is not a facet of {P!r}")
    return build_polytope(P.d - 1, [P.taus[i - 1] for i in S])


def direct_witness(P: CyclicPolytope, k_max: int = 3) -> WitnessFamily | None:
    if P.d != 4 or P.n < 5:
        return None
    if P.delta(2, 3) == 1:
        p = build_witness_p(P)
        coeffs = tuple(witness_coefficients(P).items())
        wf = verify_witness(P, p, 3, k_max)
        return _with(wf, coefficients=coeffs)
    if P.delta(P.n - 2, P.n - 1) == 1:
        Q = negate_params(P)
        pq = build_witness_p(Q)
        # x -> diag((-1)^k) x carries v_i(Q) to v_{n+1-i}(P)
        p = tuple((-1) ** k * c for k, c in enumerate(pq))
        coeffs = tuple((P.n + 1 - i, c) for i, c in witness_coefficients(Q).items())
        wf = verify_witness(P, p, P.n - 2, k_max)
        return _with(wf, coefficients=tuple(sorted(coeffs)))
    return None


def _with(wf: WitnessFamily, **changes) -> WitnessFamily:
    return WitnessFamily(**{**wf.__dict__, **changes})


def _unit_positions(P) -> list[int]:
    return [i for i in range(2, P.n - 1) if P.delta(i, i + 1) == 1]


def _candidate_facets(P, i: int) -> list[tuple[int, ...]]:
    """Facets keeping the unit gap (i, i+1) strictly inside; the standard family first."""
    d, n = P.d, P.n
    if d % 2:
        first = (1,) + tuple(range(i, i + d - 1))
    else:
        first = tuple(range(i - 1, i + d - 1))
    tail = tuple(range(n - d + 1, n + 1))
    facets = enumerate_facets(P)
    out = [S for S in (first, tail) if S in facets]
    for S in facets:
        if i in S and i + 1 in S and 2 <= S.index(i) + 1 <= len(S) - 2 and S not in out:
            out.append(S)
    return [S for S in out if i in S and i + 1 in S and 2 <= S.index(i) + 1 <= len(S) - 2]


@lru_cache(maxsize=1024)
def _descend(P: CyclicPolytope):
    """A facet chain ending in a dimension-4 polytope with a direct witness."""
    if P.d == 4:
        ok = P.n >= 5 and (P.delta(2, 3) == 1 or P.delta(P.n - 2, P.n - 1) == 1)
        return () if ok else None
    for i in _unit_positions(P):
        for S in _candidate_facets(P, i):
            Q = facet_subpolytope(P, S)
            rest = _descend(Q)
            if rest is not None:
                return ((S, Q.taus),) + rest
    return None


def very_ample_obstruction(P: CyclicPolytope, k_max: int = 3) -> WitnessFamily | None:
    """A verified witness family, or None when no unit-gap construction applies.

    None says nothing about very ampleness.
    """
    if P.d < 4:
        return None
    if P.d == 4:
        return direct_witness(P, k_max)
    chain = _descend(P)
    if chain is None:
        return None
    Q = P
    for S, taus in chain:
        Q = build_polytope(Q.d - 1, taus)
    wf = direct_witness(Q, k_max)
    if wf is None:  # pragma: no cover - _descend only stops at direct cases
        return None
    return _with(wf, construction=REDUCTION, chain=chain)


def revalidate(P: CyclicPolytope, wf: WitnessFamily) -> bool:
    """Recheck a witness family from scratch, including its facet chain."""
    Q = P
    for S, taus in wf.chain:
        try:
            Q = facet_subpolytope(Q, S)
        except NotAFacet:
            return False
        if Q.taus != tuple(taus):
            return False
    if (Q.d, Q.taus) != (wf.d, tuple(wf.taus)):
        return False
    k_max = max(k for k, _ in wf.status) if wf.status else max(wf.verified_k)
    try:
        again = verify_witness(Q, wf.p, wf.base_vertex, k_max)
    except WitnessRefuted:
        return False
    return again.verified_k == tuple(wf.verified_k)


# ---------------------------------------------------------------------------
# bounded local certification


def vertex_local_certify(P, i: int, bound: int, slack: int = 2, budget: int | None = None):
    """Bounded check that the monoid generated by {x - v_i} is saturated.

    Every cone point y of height <= bound (y + h v_i in hP* for some h <= bound)
    is y = x - h v_i for a lattice point x of hP*. y lies in the monoid iff
    x + t v_i is a sum of h + t degree-1 points for some t >= 0; holes of the
    graded search are retried for t <= slack before being reported.
    """
    if not 1 <= i <= P.n:
        raise IndexError(f"vertex index {i} out of range")
    if bound <= 1:
        return CertifiedUpTo(bound)
    sp = GradedSplitter(P, budget)
    holes = hole_sets(P, bound, budget, sp)
    v = P.vertex(i)
    memo: dict = {}
    for h in range(2, bound + 1):
        for x in holes[h]:
            absorbed = False
            for t in range(1, slack + 1):
                if sp.decomposes(tuple(a + t * b for a, b in zip(x, v)), h + t, memo):
                    absorbed = True
                    break
            if not absorbed:
                return HoleFound(tuple(a - h * b for a, b in zip(x, v)), h, i)
    return CertifiedUpTo(bound)
