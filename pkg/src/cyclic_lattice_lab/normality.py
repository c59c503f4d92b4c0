"""Normality / integer decomposition checks and the constructive splitting algorithm.

Two halves:

* graded search: for each degree m, every lattice point of m*P* must be a
  degree-1 lattice point plus a lattice point of (m-1)*P*. With facet forms
  f, x - a lies in (m-1)*P* exactly when f(a) <= f(x) componentwise, so the
  test is a dominance query against the facet values of P* cap Z^{d+1}.
* the splitting algorithm for simplices with all consecutive gaps at least
  d^2 - 1, which peels one degree-1 lattice point off any lattice point of
  degree m >= 2 using only its barycentric coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import lattice
from .basis import hermite_rows, in_lattice, lattice_index
from .core import CyclicPolytope, build_polytope
from .errors import (
    GuaranteeViolated,
    HypothesisViolated,
    InstanceTooLarge,
    NoSolution,
    OutOfRange,
    UnsortedInput,
)

_X_CHUNK = 4096
_A_CHUNK = 2048
_BATCH = 128


# ---------------------------------------------------------------------------
# verdict types


@dataclass(frozen=True)
class Normal:
    m_max: int
    point_counts: tuple[int, ...] = ()
    lattice_index: int = 1

    verdict = "Normal"


@dataclass(frozen=True)
class HoleReport:
    m: int
    alpha: tuple[int, ...]
    reason: str = "NotSumOfLowerDegrees"
    lattice_index: int = 1
    # for point sets generating a proper sublattice: the verdict relative to it
    relative: "Normal | HoleReport | None" = None

    verdict = "Hole"


@dataclass(frozen=True)
class Verified:
    simplices: tuple[tuple[int, ...], ...]

    verdict = "Verified"


@dataclass(frozen=True)
class Inconclusive:
    failing: tuple[tuple[int, ...], ...]
    reports: tuple = ()

    verdict = "Inconclusive"


@dataclass(frozen=True)
class DecompositionCertificate:
    alpha: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class HeavySubset:
    indices: tuple[int, ...]  # descending by value, ties by ascending index
    values: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


# ---------------------------------------------------------------------------
# dominance engine


def _order_generators(P, A: np.ndarray, FA: np.ndarray) -> np.ndarray:
    """Permutation putting 'central' points first; those dominate least."""
    if len(A) == 0:
        return np.arange(0)
    FV = lattice.facet_values(P, np.array(P.vertices, dtype=A.dtype))
    scale = np.maximum(np.asarray(FV, dtype=float).max(axis=0), 1.0)
    key = (np.asarray(FA, dtype=float) / scale).max(axis=1)
    return np.argsort(key, kind="stable")


def _dominated(FX: np.ndarray, FA: np.ndarray):
    """(hit, witness): hit[i] iff some row a of FA has FA[a] <= FX[i] componentwise."""
    hit = np.zeros(len(FX), dtype=bool)
    witness = np.full(len(FX), -1, dtype=np.int64)
    idx = np.arange(len(FX))
    for start in range(0, len(FA), _A_CHUNK):
        if len(idx) == 0:
            break
        block = FA[start:start + _A_CHUNK]
        sub = FX[idx]
        found = np.zeros(len(idx), dtype=bool)
        first = np.zeros(len(idx), dtype=np.int64)
        for s in range(0, len(idx), _BATCH):
            dom = (block[None, :, :] <= sub[s:s + _BATCH, None, :]).all(axis=2)
            found[s:s + _BATCH] = dom.any(axis=1)
            first[s:s + _BATCH] = dom.argmax(axis=1)
        hit[idx[found]] = True
        witness[idx[found]] = first[found] + start
        idx = idx[~found]
    return hit, witness


class GradedSplitter:
    """Caches the degree-1 lattice points of P* and answers split queries."""

    def __init__(self, P, budget: int | None = None):
        self.P = P
        self.budget = budget
        A = lattice.enumerate_points(P, 1, budget)
        self.A = A.array
        FA = lattice.facet_values(P, self.A)
        perm = _order_generators(P, self.A, FA)
        self.A = self.A[perm]
        self.FA = FA[perm]
        self.FV = lattice.facet_values(P, np.array(P.vertices, dtype=self.A.dtype))
        self._hot = np.zeros(0, dtype=np.int64)

    def splits(self, X: np.ndarray) -> np.ndarray:
        """Mask of rows x of degree m with x - a in (m-1)P* for some a in A."""
        FX = lattice.facet_values(self.P, X)
        ok = np.zeros(len(X), dtype=bool)
        for fv in self.FV:
            ok |= (FX >= fv).all(axis=1)
        rest = np.flatnonzero(~ok)
        if len(rest) and len(self._hot):
            # generators that already split something are tried first
            hit, _ = _dominated(FX[rest], self.FA[self._hot])
            ok[rest[hit]] = True
            rest = rest[~hit]
        if len(rest):
            hit, wit = _dominated(FX[rest], self.FA)
            ok[rest] = hit
            if hit.any():
                self._hot = np.unique(np.concatenate([self._hot, wit[hit]]))[:_A_CHUNK]
        return ok

    def first_hole(self, X: np.ndarray):
        for start in range(0, len(X), _X_CHUNK):
            chunk = X[start:start + _X_CHUNK]
            bad = np.flatnonzero(~self.splits(chunk))
            if len(bad):
                return tuple(int(v) for v in chunk[bad[0]])
        return None

    def all_holes(self, X: np.ndarray) -> list[tuple[int, ...]]:
        out = []
        for start in range(0, len(X), _X_CHUNK):
            chunk = X[start:start + _X_CHUNK]
            for i in np.flatnonzero(~self.splits(chunk)):
                out.append(tuple(int(v) for v in chunk[i]))
        return out

    def candidates(self, x) -> np.ndarray:
        """Degree-1 lattice points a with x - a in the cone (any degree)."""
        fx = lattice.facet_values(self.P, np.array([x], dtype=self.A.dtype if _fits(x) else object))[0]
        mask = (self.FA <= fx).all(axis=1)
        return self.A[mask]

    def decomposes(self, x, k: int, _memo=None) -> bool:
        """Complete search: is x a sum of exactly k lattice points of P*?"""
        x = tuple(int(v) for v in x)
        if x[0] != k or not lattice.contains(self.P, x):
            return False
        if k == 1:
            return True
        memo = {} if _memo is None else _memo
        key = (x, k)
        if key in memo:
            return memo[key]
        C = self.candidates(x)
        if k == 2 or len(C) == 0:
            result = len(C) > 0
        elif k == 3:
            # a degree-2 point decomposes iff it splits once
            rests = np.array([x], dtype=C.dtype) - C
            result = bool(self.splits(rests).any())
        else:
            result = False
            for a in C:
                rest = tuple(int(u) - int(v) for u, v in zip(x, a))
                if self.decomposes(rest, k - 1, memo):
                    result = True
                    break
        memo[key] = result
        return result


def _fits(x) -> bool:
    return all(abs(int(v)) < lattice.INT64_SAFE for v in x)


# ---------------------------------------------------------------------------
# graded checks


def default_m_max(d: int) -> int:
    return max(2, d - 1)


def idp_check(P, m_max: int | None = None, budget: int | None = None):
    """Normal, or the lexicographically smallest hole at the smallest failing degree.

    For vertex sets whose lattice points generate a proper sublattice L of
    Z^{d+1}, the returned report also carries the verdict relative to L.
    """
    m_max = default_m_max(P.d) if m_max is None else max(2, m_max)
    splitter = GradedSplitter(P, budget)
    index = lattice_index([tuple(int(v) for v in a) for a in splitter.A])
    counts = [len(splitter.A)]
    hole = None
    for m in range(2, m_max + 1):
        X = lattice.enumerate_points(P, m, budget).array
        counts.append(len(X))
        hole = splitter.first_hole(X)
        if hole is not None:
            hole = HoleReport(m, hole, lattice_index=index)
            break
    if index == 1:
        return hole if hole is not None else Normal(m_max, tuple(counts))
    relative = _relative_check(P, splitter, m_max, budget, index)
    if hole is None:
        return Normal(m_max, tuple(counts), lattice_index=index)
    return HoleReport(hole.m, hole.alpha, lattice_index=index, relative=relative)


def _relative_check(P, splitter, m_max, budget, index):
    L = hermite_rows([tuple(int(v) for v in a) for a in splitter.A])
    counts = [len(splitter.A)]
    for m in range(2, m_max + 1):
        X = lattice.enumerate_points(P, m, budget).array
        keep = np.array([in_lattice(L, [int(v) for v in x]) for x in X], dtype=bool)
        X = X[keep] if len(X) else X
        counts.append(len(X))
        hole = splitter.first_hole(X)
        if hole is not None:
            return HoleReport(m, hole, lattice_index=index)
    return Normal(m_max, tuple(counts), lattice_index=index)


def hole_sets(P, m_max: int, budget: int | None = None, splitter: GradedSplitter | None = None):
    """Exact non-decomposable lattice points of mP* for 2 <= m <= m_max.

    x decomposes iff some degree-1 point a leaves x - a in (m-1)P* outside
    the previous hole set. Points that are a generator plus an earlier hole
    are rechecked by counting all dominating generators.
    """
    sp = splitter or GradedSplitter(P, budget)
    A_set = {tuple(int(v) for v in a) for a in sp.A}
    holes: dict[int, list[tuple[int, ...]]] = {}
    prev: set[tuple[int, ...]] = set()
    for m in range(2, m_max + 1):
        X = lattice.enumerate_points(P, m, budget).array
        found = set(sp.all_holes(X))
        suspects = {tuple(a + h for a, h in zip(a, hole)) for hole in prev for a in A_set} - found
        for x in sorted(suspects):
            bad = sum(1 for hole in prev if tuple(u - v for u, v in zip(x, hole)) in A_set)
            if len(sp.candidates(x)) == bad:
                found.add(x)
        holes[m] = sorted(found)
        prev = found
    return holes


def normality_via_covering(P, m_max: int | None = None, budget: int | None = None):
    """Verified when every (d+1)-vertex sub-simplex passes idp_check."""
    limit = budget if budget is not None else lattice.default_budget()
    if math.comb(P.n, P.d + 1) > limit:
        raise InstanceTooLarge("too many sub-simplices")
    simplices = tuple(combinations(range(1, P.n + 1), P.d + 1))
    failing, reports = [], []
    for S in simplices:
        Q = build_polytope(P.d, [P.taus[i - 1] for i in S])
        res = idp_check(Q, m_max, budget)
        if isinstance(res, HoleReport):
            failing.append(S)
            reports.append(res)
    if failing:
        return Inconclusive(tuple(failing), tuple(reports))
    return Verified(simplices)


# ---------------------------------------------------------------------------
# inequalities behind the splitting algorithm


def minmax_bounds(r: Sequence, j: int):
    """(sum of j smallest, sum of j largest, j*m/(d+1)) for sorted r in [0, 1]."""
    r = [Fraction(x) for x in r]
    if any(a > b for a, b in zip(r, r[1:])):
        raise UnsortedInput("r must be sorted ascending")
    if any(x < 0 or x > 1 for x in r):
        raise OutOfRange("entries of r must lie in [0, 1]")
    if not 1 <= j <= len(r):
        raise OutOfRange(f"j must lie in [1, {len(r)}]")
    m = sum(r, Fraction(0))
    prefix = sum(r[:j], Fraction(0))
    suffix = sum(r[len(r) - j:], Fraction(0))
    threshold = Fraction(j) * m / len(r)
    if not prefix <= threshold <= suffix:
        raise GuaranteeViolated(f"min-max bound fails: {prefix} <= {threshold} <= {suffix}")
    return prefix, suffix, threshold


def select_heavy_subset(r: Sequence, d: int) -> HeavySubset:
    """Subset of size 2..d maximizing its sum while the rest minus its top is <= 1.

    Ties between maximizers go to the lexicographically largest index set.
    """
    r = [Fraction(x) for x in r]
    if len(r) != d + 1:
        raise OutOfRange(f"expected {d + 1} coordinates, got {len(r)}")
    if any(x < 0 or x > 1 for x in r):
        raise OutOfRange("entries of r must lie in [0, 1]")
    best, best_key = None, None
    for l in range(2, d + 1):
        for S in combinations(range(1, d + 2), l):
            vals = [r[i - 1] for i in S]
            total = sum(vals, Fraction(0))
            if total - max(vals) > 1:
                continue
            key = (total, S)
            if best_key is None or key > best_key:
                best, best_key = S, key
    bound = 1 + Fraction(1, d + 1)
    if best is None or best_key[0] < bound:
        raise GuaranteeViolated(f"no subset reaches {bound} for r = {r}")
    ordered = tuple(sorted(best, key=lambda i: (-r[i - 1], i)))
    return HeavySubset(ordered, tuple(r[i - 1] for i in ordered))


def epsilon(l: int, D: int) -> Fraction:
    return Fraction(l - 1, D)


def _abs_prod(P, idx, t, exclude_le=None):
    """prod_{k != t} |Delta_{i_k i_t}| over positions k (1-based) of idx."""
    it = idx[t - 1]
    return math.prod(abs(P.delta(idx[k - 1], it)) for k in range(1, len(idx) + 1) if k != t)


def _z_term(P, idx, t, j) -> Fraction:
    """Coefficient of p_t in Z_l(j)."""
    it = idx[t - 1]
    num = math.prod(P.delta(idx[k - 1], it) for k in range(1, j))
    return Fraction(num, _abs_prod(P, idx, t))


def z_value(P, indices: Sequence[int], p, j: int) -> Fraction:
    """Z_l(j) = sum_{t=j}^{l} [prod_{k<j} Delta_{i_k i_t} / prod_{k!=t} |Delta_{i_k i_t}|] p_t.

    ``p`` maps positions t (1-based) to integers; a sequence aligned with
    ``indices`` works too.
    """
    idx = tuple(indices)
    l = len(idx)
    if len(set(idx)) != l or not 2 <= j <= l:
        raise IndexError(f"need distinct indices and 2 <= j <= l, got j={j}, l={l}")
    get = p.__getitem__ if isinstance(p, dict) else (lambda t: p[t - 1])
    return sum((_z_term(P, idx, t, j) * get(t) for t in range(j, l + 1)), Fraction(0))


def z_recursion(P, indices: Sequence[int], p, j: int) -> Fraction:
    """Right-hand side of the Z_l recursion, expressed through Z_l(j+1), ..., Z_l(l)."""
    idx = tuple(indices)
    l = len(idx)
    get = p.__getitem__ if isinstance(p, dict) else (lambda t: p[t - 1])
    out = _z_term(P, idx, j, j) * get(j)
    ij = idx[j - 1]
    for t in range(j + 1, l + 1):
        denom = math.prod(P.delta(ij, idx[k - 1]) for k in range(j + 1, t + 1))
        out += Fraction((-1) ** (t - j + 1), denom) * z_value(P, idx, p, t)
    return out


def choose_p(P, indices: Sequence[int], j: int, higher_p, r_target) -> int:
    """The integer p_j making Z_l(j) integral inside the window of width C_j.

    Window: p/W <= r < (p + C)/W with W = prod_{k != j} |Delta_{i_k i_j}| and
    C = prod_{k > j} |Delta_{i_j i_k}|. May be negative.
    """
    idx = tuple(indices)
    l = len(idx)
    r = Fraction(r_target)
    W = _abs_prod(P, idx, j)
    C = math.prod(abs(P.delta(idx[j - 1], idx[k - 1])) for k in range(j + 1, l + 1))
    get = higher_p.__getitem__ if isinstance(higher_p, dict) else (lambda t: higher_p[t - j - 1])
    rest = sum((_z_term(P, idx, t, j) * get(t) for t in range(j + 1, l + 1)), Fraction(0))
    coef = _z_term(P, idx, j, j)  # = +-1/C
    scaled = rest * C
    if scaled.denominator != 1:
        raise NoSolution(f"Z_l({j}) cannot be made integral: remainder {rest}")
    sign = 1 if coef > 0 else -1
    residue = (-sign * int(scaled)) % C
    top = math.floor(r * W)
    p = residue + C * ((top - residue) // C)
    if not (Fraction(p, W) <= r < Fraction(p + C, W)) or (coef * p + rest).denominator != 1:
        raise NoSolution(f"no admissible p_{j}")
    return p


# ---------------------------------------------------------------------------
# the splitting algorithm


def gap_hypothesis_holds(P) -> bool:
    D = P.d * P.d - 1
    return all(g >= D for g in P.gaps())


def _point(P, lambdas) -> tuple:
    acc = [Fraction(0)] * (P.d + 1)
    for lam, v in zip(lambdas, P.vertices):
        if lam:
            for k, c in enumerate(v):
                acc[k] += lam * c
    return tuple(acc)


def decompose_step(P: CyclicPolytope, alpha, r=None, force: bool = False) -> lattice.BarycentricCoords:
    """Barycentric coordinates r' of a degree-1 lattice point alpha' with alpha - alpha' in (m-1)P*.

    Requires a simplex with every consecutive gap >= d^2 - 1; ``force``
    runs anyway and checks the result instead of relying on the hypothesis.
    """
    if P.n != P.d + 1:
        raise HypothesisViolated("the splitting algorithm needs a simplex (n = d+1)")
    if not force and not gap_hypothesis_holds(P):
        raise HypothesisViolated(f"consecutive gaps {P.gaps()} below d^2-1 = {P.d ** 2 - 1}")
    order = tuple(range(1, P.n + 1))
    if r is None:
        r = lattice.barycentric(P, order, alpha).lambdas
    r = [Fraction(x) for x in r]
    m = sum(r, Fraction(0))
    if m.denominator != 1 or m < 2 or any(x < 0 for x in r):
        raise OutOfRange(f"need a lattice point of degree >= 2 inside the cone, got r = {r}")
    d = P.d
    N = d + 1

    big = next((i for i in range(N) if r[i] >= 1), None)
    if big is not None:
        out = [Fraction(0)] * N
        out[big] = Fraction(1)
        return lattice.BarycentricCoords(order, tuple(out))

    idx = list(select_heavy_subset(r, d).indices)
    for _ in range(d + 1):
        l = len(idx)
        p = {l: choose_p(P, idx, l, {}, r[idx[l - 1] - 1])}
        negative = None
        for j in range(l - 1, 1, -1):
            p[j] = choose_p(P, idx, j, p, r[idx[j - 1] - 1])
            if p[j] < 0:
                negative = j
                break
        if negative is None:
            break
        if negative == 2:
            raise NoSolution("p_2 < 0 contradicts the heavy-subset bound")
        idx = idx[: negative - 1]
    else:  # pragma: no cover - the subset shrinks every round
        raise NoSolution("restart loop did not terminate")

    out = [Fraction(0)] * N
    for t in range(2, len(idx) + 1):
        out[idx[t - 1] - 1] = Fraction(p[t], _abs_prod(P, idx, t))
    out[idx[0] - 1] = 1 - sum(out, Fraction(0))

    pt = _point(P, out)
    good = (
        sum(out) == 1
        and all(0 <= a <= b for a, b in zip(out, r))
        and all(c.denominator == 1 for c in pt)
    )
    if not good:
        err = HypothesisViolated if force else NoSolution
        raise err(f"split failed for r = {r}: r' = {out}")
    return lattice.BarycentricCoords(order, tuple(out))


def full_decompose(P: CyclicPolytope, alpha, force: bool = False) -> DecompositionCertificate:
    alpha = tuple(int(v) for v in alpha)
    if alpha[0] < 1 or not lattice.contains(P, alpha):
        raise OutOfRange(f"{alpha} is not a lattice point of a positive dilate of P*")
    parts = []
    rest = alpha
    while rest[0] >= 2:
        rp = decompose_step(P, rest, force=force)
        part = tuple(int(c) for c in _point(P, rp.lambdas))
        parts.append(part)
        rest = tuple(a - b for a, b in zip(rest, part))
    parts.append(rest)
    cert = DecompositionCertificate(alpha, tuple(parts))
    if not validate_certificate(P, cert):
        raise NoSolution(f"certificate for {alpha} failed validation")
    return cert


def validate_certificate(P, cert: DecompositionCertificate) -> bool:
    m = cert.alpha[0]
    if len(cert.parts) != m:
        return False
    total = [0] * len(cert.alpha)
    for part in cert.parts:
        if part[0] != 1 or not lattice.contains(P, part):
            return False
        total = [a + b for a, b in zip(total, part)]
    return tuple(total) == tuple(cert.alpha)
