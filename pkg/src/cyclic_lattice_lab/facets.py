"""Facets of cyclic polytopes: Gale's evenness condition and the forms sigma_S."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .core import CyclicPolytope, dot, poly_from_roots
from .errors import BadSubset, DimensionMismatch, InstanceTooLarge

BRUTE_FORCE_MAX_N = 12


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[int, ...]

    def __call__(self, x):
        return evaluate_sigma(self, x)


def _check_subset(P: CyclicPolytope, S: Iterable[int]) -> tuple[int, ...]:
    S = tuple(sorted(S))
    if len(S) != P.d or len(set(S)) != len(S):
        raise BadSubset(f"need {P.d} distinct indices, got {S}")
    if S[0] < 1 or S[-1] > P.n:
        raise BadSubset(f"indices out of range [1, {P.n}]: {S}")
    return S


def is_gale_even(P: CyclicPolytope, S) -> bool:
    S = _check_subset(P, S)
    members = set(S)
    absent = [i for i in range(1, P.n + 1) if i not in members]
    for a, b in zip(absent, absent[1:]):
        # checking consecutive absent pairs is enough: counts add up
        if sum(1 for k in S if a < k < b) % 2:
            return False
    return True


@lru_cache(maxsize=256)
def enumerate_facets(P: CyclicPolytope) -> tuple[tuple[int, ...], ...]:
    """All facets in lexicographic order, as sorted 1-based index tuples."""
    return tuple(
        S for S in combinations(range(1, P.n + 1), P.d) if is_gale_even(P, S)
    )


def sigma_form(P: CyclicPolytope, S) -> LinearForm:
    """Coefficients of prod_{i in S} (t - tau_i); monic, never rescaled."""
    S = _check_subset(P, S)
    return LinearForm(tuple(poly_from_roots([P.taus[i - 1] for i in S])))


def evaluate_sigma(form: LinearForm, x):
    if len(x) != len(form.coeffs):
        raise DimensionMismatch(f"form has {len(form.coeffs)} coefficients, vector has {len(x)}")
    return dot(form.coeffs, x)


def facet_orientation(P: CyclicPolytope, S) -> int:
    """Sign making sigma_S nonnegative on P*.

    sigma_S(v_j) = prod_{i in S} Delta_ij for j not in S; the evenness
    condition makes its sign the same for every such j, but that sign is
    -1 when an odd number of facet indices lie above the absent ones.
    """
    S = tuple(S)
    j = next(j for j in range(1, P.n + 1) if j not in S)
    above = sum(1 for i in S if i > j)
    return -1 if above % 2 else 1


@lru_cache(maxsize=256)
def oriented_facet_forms(P: CyclicPolytope) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """(S, coefficients) for every facet, signed so that P* lies on the >= 0 side."""
    out = []
    for S in enumerate_facets(P):
        c = sigma_form(P, S).coeffs
        s = facet_orientation(P, S)
        out.append((S, tuple(s * x for x in c)))
    return tuple(out)


def brute_force_facets(P: CyclicPolytope) -> list[tuple[int, ...]]:
    """Facet oracle: d-subsets whose hyperplane leaves every vertex on one side."""
    if P.n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLarge(f"brute-force facet scan limited to n <= {BRUTE_FORCE_MAX_N}")
    out = []
    for S in combinations(range(1, P.n + 1), P.d):
        # the hyperplane through the chosen vertices, found without using the
        # polynomial identity: null vector of the d x (d+1) vertex matrix
        normal = _null_vector([P.vertex(i) for i in S])
        vals = [dot(normal, v) for v in P.vertices]
        pos = any(v > 0 for v in vals)
        neg = any(v < 0 for v in vals)
        if pos != neg:
            out.append(S)
    return out


def _null_vector(rows):
    """A nonzero rational vector orthogonal to the given independent rows."""
    n_cols = len(rows[0])
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = next(c for c in range(n_cols) if c not in pivots)
    vec = [Fraction(0)] * n_cols
    vec[free] = Fraction(1)
    for row, c in zip(M, pivots):
        vec[c] = -row[free]
    return vec
