"""The b_S vectors, the Z-bases built from them, and lattice indices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .core import CyclicPolytope, determinant, dot, poly_from_roots
from .errors import BadPivot, DimensionMismatch, DuplicateIndex, EmptySet, IntegralityViolation

INFINITE = "Infinite"


@dataclass(frozen=True)
class BVector:
    index_set: tuple[int, ...]
    value: tuple[int, ...]


@dataclass(frozen=True)
class LatticeBasis:
    vectors: tuple[tuple[int, ...], ...]
    provenance: tuple[int, ...]

    @property
    def determinant(self) -> int:
        return determinant(self.vectors)


def _check_indices(P: CyclicPolytope, S) -> tuple[int, ...]:
    S = tuple(S)
    if not S:
        raise EmptySet("b_S needs a non-empty index set")
    if len(set(S)) != len(S):
        raise DuplicateIndex(f"repeated index in {S}")
    if min(S) < 1 or max(S) > P.n:
        raise IndexError(f"indices out of range [1, {P.n}]: {S}")
    return S


def _integral(vec, what) -> tuple[int, ...]:
    if any(Fraction(x).denominator != 1 for x in vec):
        raise IntegralityViolation(f"{what} is not integral: {vec}")
    return tuple(int(x) for x in vec)


def b_coefficients(P: CyclicPolytope, S) -> dict[int, Fraction]:
    """Coefficient of v_i in b_S for each i in S."""
    S = _check_indices(P, S)
    return {i: Fraction(1, prod(P.delta(i, j) for j in S if j != i)) for i in S}


def b_vector(P: CyclicPolytope, S) -> BVector:
    coeffs = b_coefficients(P, S)
    acc = [Fraction(0)] * (P.d + 1)
    for i, c in coeffs.items():
        for k, x in enumerate(P.vertex(i)):
            acc[k] += c * x
    return BVector(tuple(sorted(coeffs)), _integral(acc, f"b_{sorted(coeffs)}"))


def b_vector_recursive(P: CyclicPolytope, S, a: int, b: int) -> BVector:
    """b_S = b_{S-a} / Delta_ba + b_{S-b} / Delta_ab."""
    S = _check_indices(P, S)
    if a not in S or b not in S or a == b or len(S) < 2:
        raise BadPivot(f"pivots {a}, {b} must be distinct members of {S}")
    without_a = b_vector(P, [i for i in S if i != a]).value
    without_b = b_vector(P, [i for i in S if i != b]).value
    dba, dab = P.delta(b, a), P.delta(a, b)
    vec = [Fraction(x, dba) + Fraction(y, dab) for x, y in zip(without_a, without_b)]
    return BVector(tuple(sorted(S)), _integral(vec, "recursive b_S"))


def _check_order(P: CyclicPolytope, order) -> tuple[int, ...]:
    order = tuple(order)
    if len(set(order)) != len(order):
        raise DuplicateIndex(f"repeated index in {order}")
    if len(order) != P.d + 1:
        raise DimensionMismatch(f"need d+1 = {P.d + 1} indices, got {len(order)}")
    if min(order) < 1 or max(order) > P.n:
        raise IndexError(f"indices out of range [1, {P.n}]: {order}")
    return order


def z_basis(P: CyclicPolytope, order: Sequence[int]) -> LatticeBasis:
    """b_{i1}, b_{i1 i2}, ..., b_{i1 ... i_{d+1}}."""
    order = _check_order(P, order)
    vecs = tuple(b_vector(P, order[: k + 1]).value for k in range(P.d + 1))
    return LatticeBasis(vecs, order)


def c_basis(P: CyclicPolytope, order: Sequence[int]) -> LatticeBasis:
    """c_j = sum_{l >= j} b_{i_l ... i_{d+1}}.

    Always a Z-basis. When the order is increasing every c_j is a lattice
    point of P*; other orders can leave the polytope.
    """
    order = _check_order(P, order)
    tails = [b_vector(P, order[l:]).value for l in range(P.d + 1)]
    vecs = []
    for j in range(P.d + 1):
        vecs.append(tuple(sum(col) for col in zip(*tails[j:])))
    return LatticeBasis(tuple(vecs), order)


def z_coefficients(P: CyclicPolytope, order: Sequence[int], x) -> tuple[int, ...]:
    """Integer coordinates of x in z_basis(P, order).

    Peels the last coefficient with the form vanishing on the first q-1
    chosen vertices, then recurses on the smaller simplex.
    """
    order = _check_order(P, order)
    if len(x) != P.d + 1:
        raise DimensionMismatch(f"expected {P.d + 1} coordinates, got {len(x)}")
    basis = z_basis(P, order).vectors
    y = list(x)
    coeffs = [0] * (P.d + 1)
    for q in range(P.d + 1, 0, -1):
        form = poly_from_roots([P.taus[i - 1] for i in order[: q - 1]])
        a = (-1) ** (q - 1) * dot(form, y)
        coeffs[q - 1] = a
        y = [yi - a * bi for yi, bi in zip(y, basis[q - 1])]
    if any(y):
        raise IntegralityViolation(f"z-basis expansion left remainder {y}")
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# integer row reduction


def _xgcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(points) -> list[list[int]]:
    """Row-style echelon basis (positive pivots) of the integer row span."""
    rows = [list(p) for p in points if any(p)]
    if not rows:
        return []
    width = len(rows[0])
    basis: list[list[int]] = []
    col = 0
    while rows and col < width:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        piv = nz[0]
        for r in nz[1:]:
            g, s, t = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [s * u + t * v for u, v in zip(piv, r)]
            other = [b * u - a * v for u, v in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[col] < 0:
            piv = [-u for u in piv]
        basis.append(piv)
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(basis):
        c = next(k for k, v in enumerate(row) if v)
        for prev in basis[:i]:
            q = prev[c] // row[c]
            if q:
                prev[:] = [u - q * v for u, v in zip(prev, row)]
    return basis


def lattice_index(points):
    """Index of the subgroup generated by ``points`` in Z^{N+1}, or INFINITE."""
    points = [tuple(p) for p in points]
    if not points:
        raise EmptySet("lattice_index needs at least one point")
    width = len(points[0])
    if any(len(p) != width for p in points):
        raise DimensionMismatch("points have different lengths")
    basis = hermite_rows(points)
    if len(basis) < width:
        return INFINITE
    out = 1
    for row in basis:
        out *= next(v for v in row if v)
    return abs(out)


def in_lattice(basis, x) -> bool:
    """Membership of x in the row span of an echelon basis from hermite_rows."""
    y = list(x)
    for row in basis:
        c = next(k for k, v in enumerate(row) if v)
        if y[c] % row[c]:
            return False
        q = y[c] // row[c]
        y = [u - q * v for u, v in zip(y, row)]
    return not any(y)
