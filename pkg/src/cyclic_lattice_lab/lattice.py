"""Lattice points of dilates m*P*: membership, barycentric solves, enumeration, sampling.

Enumeration never scans a bounding box (coordinates grow like tau**d).
Each simplex is moved by a unimodular map into lower-triangular form, and
points are generated coordinate by coordinate from the last one, with the
admissible integer range at each level read off from the barycentric
constraints lambda >= 0, sum(lambda) = m. Non-simplices are covered by the
pulling triangulation from vertex 1 and the results are deduplicated.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .basis import _xgcd
from .core import (
    CyclicPolytope,
    determinant,
    dot,
    integer_inverse,
    inverse_exact,
    mat_mul,
    newton_transform,
    vec_mat,
)
from .errors import DimensionMismatch, InstanceTooLarge, SamplingExhausted
from .facets import oriented_facet_forms

DEFAULT_BUDGET = 10_000_000
BOX_SCAN_LIMIT = 2_000_000
INT64_SAFE = 2 ** 62


def default_budget() -> int:
    env = os.environ.get("CLL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class LatticeSimplex:
    """A lattice simplex given by an explicit vertex list (not necessarily cyclic).

    Vertices are affine points in Z^N; they are homogenized on construction.
    Exists for fixtures like the tetrahedron T_3 whose lattice points do not
    generate Z^{N+1}.
    """

    def __init__(self, points: Sequence[Sequence[int]]):
        pts = [tuple(int(c) for c in p) for p in points]
        dim = len(pts[0])
        if any(len(p) != dim for p in pts) or len(pts) != dim + 1:
            raise DimensionMismatch("need N+1 affinely independent points in Z^N")
        self.vertices = tuple((1,) + p for p in pts)
        self.d = dim
        self.n = dim + 1
        if determinant(self.vertices) == 0:
            raise DimensionMismatch("points are affinely dependent")

    def vertex(self, i: int):
        return self.vertices[i - 1]

    def __repr__(self):
        return f"LatticeSimplex({[v[1:] for v in self.vertices]})"

    def __eq__(self, other):
        return isinstance(other, LatticeSimplex) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)


# ---------------------------------------------------------------------------
# facets and covers


@lru_cache(maxsize=256)
def facet_matrix(P) -> tuple[tuple[int, ...], ...]:
    """Integer forms, one per facet, each >= 0 on P*."""
    if isinstance(P, CyclicPolytope):
        return tuple(c for _, c in oriented_facet_forms(P))
    inv = inverse_exact(P.vertices)  # x = lambda V  =>  lambda = x V^{-1}
    forms = []
    for j in range(P.n):
        col = [row[j] for row in inv]
        lcm = math.lcm(*(c.denominator for c in col))
        ints = [int(c * lcm) for c in col]
        g = math.gcd(*ints)
        forms.append(tuple(c // g for c in ints))
    return tuple(forms)


def cover_simplices(P) -> tuple[tuple[int, ...], ...]:
    """Simplices (1-based vertex tuples) of the pulling triangulation from v_1."""
    if P.n == P.d + 1:
        return (tuple(range(1, P.n + 1)),)
    from .facets import enumerate_facets

    return tuple((1,) + S for S in enumerate_facets(P) if 1 not in S)


# ---------------------------------------------------------------------------
# triangular frames


@dataclass(frozen=True)
class SimplexFrame:
    """V U = M with M lower triangular, column 0 of M all ones, U unimodular."""

    order: tuple[int, ...]
    M: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]

    @cached_property
    def U_inv(self):
        return integer_inverse(self.U)

    @property
    def normalized_volume(self) -> int:
        return abs(math.prod(self.M[k][k] for k in range(len(self.M))))


def _generic_frame(V):
    N = len(V)
    M = [list(r) for r in V]
    U = [[int(i == j) for j in range(N)] for i in range(N)]

    def colop(i, j, a, b, c, e):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + e col_j)
        for T in (M, U):
            for row in T:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + e * y

    for j in range(1, N):
        f = M[0][j]
        if f:
            colop(0, j, 1, 0, -f, 1)
    for i in range(1, N):
        for j in range(i + 1, N):
            if M[i][j] == 0:
                continue
            a, b = M[i][i], M[i][j]
            g, s, t = _xgcd(a, b)
            colop(i, j, s, t, b // g, -(a // g))
        if M[i][i] == 0:
            raise DimensionMismatch("vertices are affinely dependent")
    return tuple(map(tuple, M)), tuple(map(tuple, U))


@lru_cache(maxsize=4096)
def simplex_frame(P, order: tuple[int, ...]) -> SimplexFrame:
    V = tuple(P.vertex(i) for i in order)
    if isinstance(P, CyclicPolytope):
        U = newton_transform([P.taus[i - 1] for i in order[: P.d]], P.d)
        return SimplexFrame(order, mat_mul(V, U), U)
    M, U = _generic_frame(V)
    return SimplexFrame(order, M, U)


def _good_order(P, simplex: tuple[int, ...]) -> tuple[int, ...]:
    # innermost enumeration level has step |M_11| = |Delta_{o1 o2}|; widest first
    if isinstance(P, CyclicPolytope) and len(simplex) > 2:
        first, last = simplex[0], simplex[-1]
        return (first, last) + tuple(i for i in simplex if i not in (first, last))
    return tuple(simplex)


# ---------------------------------------------------------------------------
# membership and barycentric coordinates


@dataclass(frozen=True)
class BarycentricCoords:
    simplex_indices: tuple[int, ...]
    lambdas: tuple[Fraction, ...]


def barycentric(P, simplex_indices: Sequence[int], x) -> BarycentricCoords:
    idx = tuple(simplex_indices)
    if len(idx) != P.d + 1 or len(set(idx)) != len(idx):
        raise IndexError(f"need d+1 = {P.d + 1} distinct vertex indices, got {idx}")
    if min(idx) < 1 or max(idx) > P.n:
        raise IndexError(f"vertex index out of range [1, {P.n}]")
    if len(x) != P.d + 1:
        raise DimensionMismatch(f"expected {P.d + 1} coordinates, got {len(x)}")
    fr = simplex_frame(P, idx)
    y = vec_mat(x, fr.U)
    N = len(idx)
    lam = [Fraction(0)] * N
    for k in range(N - 1, 0, -1):
        rest = sum((lam[j] * fr.M[j][k] for j in range(k + 1, N)), Fraction(0))
        lam[k] = (y[k] - rest) / fr.M[k][k]
    lam[0] = y[0] - sum(lam[1:])
    return BarycentricCoords(idx, tuple(lam))


def contains(P, x) -> bool:
    """True iff every facet form is >= 0 at x, i.e. x lies in the cone over P*."""
    if len(x) != P.d + 1:
        raise DimensionMismatch(f"expected {P.d + 1} coordinates, got {len(x)}")
    return all(dot(f, x) >= 0 for f in facet_matrix(P))


def in_dilate(P, x, m: int) -> bool:
    return x[0] == m and contains(P, x)


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class DilatePointSet:
    m: int
    array: np.ndarray  # shape (count, d+1); int64 or object

    @property
    def count(self) -> int:
        return len(self.array)

    @cached_property
    def points(self) -> list[tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.array]

    def __len__(self):
        return len(self.array)


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, k=1):
        self.used += k
        if self.used > self.limit:
            raise InstanceTooLarge(f"enumeration exceeded budget of {self.limit} candidate evaluations")


def predicted_size(P, m: int) -> int:
    """Rough lattice-point count of m*P*: normalized volume * (m+1)^d / d!."""
    total = 0
    for S in cover_simplices(P):
        total += simplex_frame(P, _good_order(P, S)).normalized_volume
    return total * (m + 1) ** P.d // math.factorial(P.d) + 1


def _frame_blocks(fr: SimplexFrame, m: int, budget: _Budget):
    """Yield (tail, lo, hi): y_0 = m, y_1 in [lo, hi], y_2.. = tail."""
    M = fr.M
    N = len(M)
    lam = [Fraction(0)] * N
    y = [0] * N
    out = []

    def rec(k, R):
        budget.spend()
        c = sum((lam[j] * M[j][k] for j in range(k + 1, N)), Fraction(0))
        g = M[k][k]
        a, b = c, c + R * g
        if a > b:
            a, b = b, a
        lo, hi = math.ceil(a), math.floor(b)
        if lo > hi:
            return
        if k == 1:
            budget.spend(hi - lo + 1)
            out.append((tuple(y[2:]), lo, hi))
            return
        for yk in range(lo, hi + 1):
            y[k] = yk
            lam[k] = (yk - c) / g
            rec(k - 1, R - lam[k])
        lam[k] = Fraction(0)

    rec(N - 1, Fraction(m))
    return out


def _materialize(fr: SimplexFrame, m: int, blocks) -> np.ndarray:
    N = len(fr.M)
    if not blocks:
        return np.zeros((0, N), dtype=np.int64)
    Uinv = fr.U_inv
    ybound = max(max(abs(v) for v in row) for row in fr.M) * max(m, 1)
    ubound = max(max(abs(v) for v in row) for row in Uinv)
    safe = ybound * ubound * N < INT64_SAFE
    dtype = np.int64 if safe else object
    counts = np.array([hi - lo + 1 for _, lo, hi in blocks], dtype=np.int64)
    total = int(counts.sum())
    Y = np.empty((total, N), dtype=dtype)
    Y[:, 0] = m
    if safe:
        starts = np.repeat(np.array([lo for _, lo, _ in blocks], dtype=np.int64), counts)
        offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
        Y[:, 1] = starts + offsets
        if N > 2:
            tails = np.array([t for t, _, _ in blocks], dtype=np.int64).reshape(len(blocks), N - 2)
            Y[:, 2:] = np.repeat(tails, counts, axis=0)
        return Y @ np.array(Uinv, dtype=np.int64)
    r = 0
    for tail, lo, hi in blocks:
        for y1 in range(lo, hi + 1):
            Y[r, 1] = y1
            Y[r, 2:] = tail
            r += 1
    return Y.dot(np.array(Uinv, dtype=object))


def _sort_unique(X: np.ndarray) -> np.ndarray:
    if len(X) == 0:
        return X
    if X.dtype == object:
        rows = sorted(set(tuple(int(v) for v in row) for row in X))
        return np.array(rows, dtype=object)
    return np.unique(X, axis=0)  # lexicographic row order


def enumerate_points(P, m: int, budget: int | None = None) -> DilatePointSet:
    """Exactly m*P* intersected with Z^{d+1}, sorted lexicographically."""
    if m < 0:
        raise ValueError("dilation must be nonnegative")
    N = P.d + 1
    if m == 0:
        return DilatePointSet(0, np.zeros((1, N), dtype=np.int64))
    limit = budget if budget is not None else default_budget()
    est = predicted_size(P, m)
    if est > limit:
        raise InstanceTooLarge(f"predicted {est} points in {m}P* exceeds budget {limit}")
    counter = _Budget(limit)
    parts = []
    for S in cover_simplices(P):
        fr = simplex_frame(P, _good_order(P, S))
        parts.append(_materialize(fr, m, _frame_blocks(fr, m, counter)))
    if any(p.dtype == object for p in parts):
        parts = [p.astype(object) for p in parts]
    X = np.concatenate(parts) if len(parts) > 1 else parts[0]
    return DilatePointSet(m, _sort_unique(X))


def facet_values(P, X: np.ndarray) -> np.ndarray:
    """Matrix of facet-form values, one row per point."""
    F = facet_matrix(P)
    if X.dtype != object:
        xb = int(np.abs(X).max()) if len(X) else 0
        fb = max(max(abs(c) for c in f) for f in F)
        if xb * fb * X.shape[1] < INT64_SAFE:
            return X @ np.array(F, dtype=np.int64).T
    return np.asarray(X, dtype=object).dot(np.array(F, dtype=object).T)


def box_scan_points(P, m: int, limit: int = BOX_SCAN_LIMIT) -> list[tuple[int, ...]]:
    """Oracle: scan the bounding box of m*P* in coordinates 1..d-1.

    For each box cell the admissible values of the last coordinate form an
    interval cut out directly by the facet inequalities.
    """
    ranges = []
    for k in range(1, P.d):
        vals = [v[k] for v in P.vertices]
        ranges.append(range(m * min(vals), m * max(vals) + 1))
    size = math.prod(len(r) for r in ranges)
    if size > limit:
        raise InstanceTooLarge(f"bounding box has {size} cells, limit {limit}")
    F = facet_matrix(P)
    out = []
    for rest in product(*ranges):
        head = (m,) + rest
        lo, hi, ok = None, None, True
        for f in F:
            c, r = f[-1], dot(f[:-1], head)
            # c * x_d + r >= 0
            if c > 0:
                b = -(r // c)  # ceil(-r / c)
                lo = b if lo is None else max(lo, b)
            elif c < 0:
                b = r // (-c)  # floor(r / -c)
                hi = b if hi is None else min(hi, b)
            elif r < 0:
                ok = False
                break
        if not ok or lo is None or hi is None:
            continue
        for last in range(lo, hi + 1):
            out.append(head + (last,))
    return out


# ---------------------------------------------------------------------------
# sampling


def sample_lattice_point(P, m: int, seed: int, max_tries: int = 200) -> tuple[int, ...]:
    """A pseudo-random lattice point of m*P* for a simplex P.

    A random target in barycentric coordinates is drawn (mixture of the
    barycentre and a flat Dirichlet draw), then the triangular frame
    coordinates are chosen level by level as the nearest admissible integer
    to the target, with a small random jitter. Every returned point is
    valid; the distribution is not uniform.
    """
    if m < 1:
        raise ValueError("sampling needs m >= 1")
    if P.n != P.d + 1:
        raise DimensionMismatch("sampler works on simplices (n = d+1)")
    rng = random.Random(seed)
    fr = simplex_frame(P, _good_order(P, tuple(range(1, P.n + 1))))
    M = fr.M
    N = len(M)
    for _ in range(max_tries):
        s = rng.random()
        raw = [rng.expovariate(1.0) for _ in range(N)]
        tot = sum(raw)
        w = [(1 - s) / N + s * r / tot for r in raw]
        target = [Fraction(m) * Fraction(wi).limit_denominator(10 ** 9) for wi in w]
        jitter = rng.choice((0, 0, 1, 2, 5))
        lam = [Fraction(0)] * N
        y = [0] * N
        y[0] = m
        R = Fraction(m)
        ok = True
        for k in range(N - 1, 0, -1):
            c = sum((lam[j] * M[j][k] for j in range(k + 1, N)), Fraction(0))
            g = M[k][k]
            a, b = sorted((c, c + R * g))
            lo, hi = math.ceil(a), math.floor(b)
            if lo > hi:
                ok = False
                break
            want = c + min(target[k], R) * g
            yk = round(want) + (rng.randint(-jitter, jitter) if jitter else 0)
            yk = min(max(yk, lo), hi)
            y[k] = yk
            lam[k] = (yk - c) / g
            R -= lam[k]
        if not ok:
            continue
        x = vec_mat(y, fr.U_inv)
        if in_dilate(P, x, m):
            return tuple(int(v) for v in x)
    raise SamplingExhausted(f"no valid point of {m}P* after {max_tries} attempts")
