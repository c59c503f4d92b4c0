"""Integral cyclic polytopes and their unimodular normal forms.

Everything here works with Python integers and :class:`fractions.Fraction`;
vertex coordinates grow like tau**d so fixed-width arithmetic is never used.
Vertex indices are 1-based throughout the public API.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import NonIncreasingParameters, TooFewVertices

Vector = tuple  # tuple of int / Fraction, index 0 is the degree coordinate


@dataclass(frozen=True)
class ParameterList:
    d: int
    taus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "taus", tuple(int(t) for t in self.taus))
        if self.d < 1:
            raise TooFewVertices(f"dimension must be positive, got d={self.d}")
        for a, b in zip(self.taus, self.taus[1:]):
            if not a < b:
                raise NonIncreasingParameters(f"parameters must be strictly increasing: {self.taus}")
        if len(self.taus) < self.d + 1:
            raise TooFewVertices(f"need n >= d+1 = {self.d + 1} parameters, got {len(self.taus)}")

    @property
    def n(self) -> int:
        return len(self.taus)


@dataclass(frozen=True)
class UnimodularTransform:
    matrix: tuple[tuple[int, ...], ...]

    @cached_property
    def determinant(self) -> int:
        return determinant(self.matrix)


@dataclass(frozen=True)
class CyclicPolytope:
    """The homogenized cyclic polytope conv(v_1, ..., v_n) in R^{d+1}."""

    params: ParameterList

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def taus(self) -> tuple[int, ...]:
        return self.params.taus

    @cached_property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(moment_vector(t, self.d) for t in self.taus)

    @cached_property
    def deltas(self) -> tuple[tuple[int, ...], ...]:
        # deltas[i-1][j-1] == Delta_ij == tau_j - tau_i
        return tuple(tuple(tj - ti for tj in self.taus) for ti in self.taus)

    def vertex(self, i: int) -> tuple[int, ...]:
        return self.vertices[i - 1]

    def delta(self, i: int, j: int) -> int:
        return self.taus[j - 1] - self.taus[i - 1]

    def gaps(self) -> tuple[int, ...]:
        """Consecutive differences (Delta_12, ..., Delta_{n-1,n})."""
        return tuple(b - a for a, b in zip(self.taus, self.taus[1:]))

    def __repr__(self):
        return f"C_{self.d}{self.taus}"


def moment_vector(t: int, d: int) -> tuple[int, ...]:
    return tuple(t ** k for k in range(d + 1))


def build_polytope(params_or_d, taus: Sequence[int] | None = None) -> CyclicPolytope:
    """Build C*_d(taus). Accepts a ParameterList or ``(d, taus)``."""
    if isinstance(params_or_d, ParameterList):
        params = params_or_d
    else:
        params = ParameterList(int(params_or_d), tuple(taus))
    return CyclicPolytope(params)


def translate_params(P: CyclicPolytope, m: int) -> CyclicPolytope:
    return build_polytope(P.d, [t + m for t in P.taus])


def negate_params(P: CyclicPolytope) -> CyclicPolytope:
    """C_d(-tau_n, ..., -tau_1); vertex i of the result is vertex n+1-i of P."""
    return build_polytope(P.d, [-t for t in reversed(P.taus)])


def negation_matrix(d: int) -> tuple[tuple[int, ...], ...]:
    """Diagonal sign flip on odd coordinates; maps v_i(P) to v_{n+1-i}(negate(P))."""
    return tuple(
        tuple((-1) ** k if k == c else 0 for c in range(d + 1)) for k in range(d + 1)
    )


# ---------------------------------------------------------------------------
# polynomial / matrix helpers


def poly_from_roots(roots: Sequence[int]) -> list[int]:
    """Coefficients (ascending) of prod (t - r)."""
    coeffs = [1]
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return coeffs


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def mat_mul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def vec_mat(x, A):
    return tuple(dot(x, col) for col in zip(*A))


def determinant(A) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse_exact(A):
    """Exact inverse over Q via Gauss-Jordan; returns rows of Fractions."""
    from fractions import Fraction

    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def integer_inverse(A):
    inv = inverse_exact(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


# ---------------------------------------------------------------------------
# Newton-basis frame


def newton_transform(nodes: Sequence[int], d: int) -> tuple[tuple[int, ...], ...]:
    """Column k holds the coefficients of prod_{j<k} (t - nodes[j]).

    Monic with integer coefficients, so the matrix is upper unitriangular.
    Multiplying moment vectors by it evaluates the Newton basis polynomials.
    """
    cols = [poly_from_roots(nodes[:k]) + [0] * (d - k) for k in range(d + 1)]
    return tuple(tuple(cols[k][r] for k in range(d + 1)) for r in range(d + 1))


def delta_matrix_form(P: CyclicPolytope, order: Sequence[int] | None = None):
    """Return ``(M, U)`` with V U = M and M in difference-product form.

    Row i of M is (1, D_{o1,i}, D_{o1,i} D_{o2,i}, ..., prod_{k<=d} D_{ok,i})
    where o is the vertex ordering (default 1..n); V stacks the vertices in
    that same order.
    """
    order = tuple(order) if order is not None else tuple(range(1, P.n + 1))
    nodes = [P.taus[i - 1] for i in order[: P.d]]
    U = newton_transform(nodes, P.d)
    V = tuple(P.vertex(i) for i in order)
    M = mat_mul(V, U)
    return M, UnimodularTransform(U)
