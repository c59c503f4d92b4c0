"""Shared fixtures, strategies and independent oracles."""
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cyclic_lattice_lab.core import build_polytope, inverse_exact
from cyclic_lattice_lab.lattice import box_scan_points


def rational_solve(P, simplex, x):
    """Barycentric coordinates by a plain Gauss-Jordan inverse of the vertex matrix."""
    V = [P.vertex(i) for i in simplex]
    inv = inverse_exact(V)  # rows of V^{-1}; x = lam V  =>  lam = x V^{-1}
    return tuple(sum((Fraction(x[r]) * inv[r][c] for r in range(len(x))), Fraction(0)) for c in range(len(V)))


def brute_points(P, m):
    return sorted(box_scan_points(P, m))


def brute_holes(P, m_max):
    """Non-decomposable points per degree from sumsets of full point lists."""
    A = brute_points(P, 1)
    reachable = set(map(tuple, A))
    out = {}
    for m in range(2, m_max + 1):
        layer = set(brute_points(P, m))
        sums = {tuple(a + b for a, b in zip(x, y)) for x in reachable for y in A}
        out[m] = sorted(layer - sums)
        reachable = sums & layer
    return out


@st.composite
def cyclic_params(draw, d_min=1, d_max=4, extra_max=2, gap_max=4):
    d = draw(st.integers(d_min, d_max))
    n = d + 1 + draw(st.integers(0, extra_max))
    start = draw(st.integers(-5, 5))
    gaps = draw(st.lists(st.integers(1, gap_max), min_size=n - 1, max_size=n - 1))
    taus = [start]
    for g in gaps:
        taus.append(taus[-1] + g)
    return d, taus


@pytest.fixture
def c4gap():
    return build_polytope(4, [0, 2, 3, 5, 8])


@pytest.fixture
def t3():
    from cyclic_lattice_lab.lattice import LatticeSimplex

    return LatticeSimplex([(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)])


# ---------------------------------------------------------------------------
# acceptance bookkeeping: one pass/fail line per criterion in the terminal summary

ACCEPTANCE: dict = {}


class _Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.notes = []

    def note(self, text):
        self.notes.append(str(text))

    def __enter__(self):
        import time

        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time

        seconds = time.perf_counter() - self._start
        ok = exc_type is None and seconds <= self.limit
        if exc_type is None and not ok:
            self.note(f"over the {self.limit:g} s limit")
        if exc is not None:
            self.note(f"{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        ACCEPTANCE[self.number] = (ok, self.title, seconds, self.notes)
        if exc_type is None and not ok:
            raise AssertionError(f"criterion {self.number} took {seconds:.1f} s, limit {self.limit:g} s")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, seconds, notes = ACCEPTANCE[n]
        line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title} ({seconds:.2f} s)"
        if notes:
            line += " -- " + "; ".join(notes)
        terminalreporter.write_line(line)
