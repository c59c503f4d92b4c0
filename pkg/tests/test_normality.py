import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings

from cyclic_lattice_lab.core import build_polytope
from cyclic_lattice_lab.errors import (
    GuaranteeViolated,
    HypothesisViolated,
    OutOfRange,
    UnsortedInput,
)
from cyclic_lattice_lab.lattice import barycentric, contains, enumerate_points, sample_lattice_point
from cyclic_lattice_lab.normality import (
    DecompositionCertificate,
    HoleReport,
    Inconclusive,
    Normal,
    Verified,
    choose_p,
    decompose_step,
    default_m_max,
    epsilon,
    full_decompose,
    hole_sets,
    idp_check,
    minmax_bounds,
    normality_via_covering,
    select_heavy_subset,
    validate_certificate,
    z_recursion,
    z_value,
)

from conftest import brute_holes, brute_points, cyclic_params

F = Fraction


# ---------------------------------------------------------------------------
# graded search against the sumset oracle


@pytest.mark.parametrize("taus", [[0, 1, 2, 3, 4], [0, 1, 2, 4, 5]])
def test_hole_sets_match_oracle_d4(taus):
    P = build_polytope(4, taus)
    oracle = brute_holes(P, 3)
    assert hole_sets(P, 3) == oracle
    res = idp_check(P, 3)
    assert isinstance(res, HoleReport) and res.m == 2 and res.alpha == oracle[2][0]
    assert contains(P, res.alpha)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(cyclic_params(d_min=2, d_max=3, extra_max=1, gap_max=3))
def test_idp_check_agrees_with_oracle(dt):
    d, taus = dt
    P = build_polytope(d, taus)
    # the sumset oracle is quadratic in point counts; keep it to small instances
    assume(len(brute_points(P, 1)) <= 250)
    oracle = brute_holes(P, 3)
    res = idp_check(P, 3)
    if any(oracle.values()):
        m = min(k for k, h in oracle.items() if h)
        assert isinstance(res, HoleReport) and (res.m, res.alpha) == (m, oracle[m][0])
    else:
        assert isinstance(res, Normal)


def test_idp_examples():
    assert isinstance(idp_check(build_polytope(3, [0, 1, 2, 3])), Normal)
    assert default_m_max(2) == 2 and default_m_max(5) == 4
    res = idp_check(build_polytope(4, [0, 2, 3, 5, 8]))
    assert isinstance(res, HoleReport) and res.m <= 3 and res.reason == "NotSumOfLowerDegrees"


def test_t3_contrast(t3):
    res = idp_check(t3, 3)
    assert isinstance(res, HoleReport)
    assert (res.m, res.alpha, res.lattice_index) == (2, (2, 1, 1, 1), 2)
    assert isinstance(res.relative, Normal)


def test_covering():
    P = build_polytope(3, [0, 1, 2, 3, 4])
    res = normality_via_covering(P)
    assert isinstance(res, Verified) and len(res.simplices) == 5
    Q = build_polytope(4, [0, 1, 2, 3, 4])
    res = normality_via_covering(Q)
    assert isinstance(res, Inconclusive) and res.failing == ((1, 2, 3, 4, 5),)


# ---------------------------------------------------------------------------
# inequalities


def test_minmax_examples():
    assert minmax_bounds([F(2, 3)] * 3, 2) == (F(4, 3), F(4, 3), F(4, 3))
    d, m = 4, 2
    r = [0] * (d + 1 - m) + [1] * m
    for j in range(1, d + 2):
        pre, suf, thr = minmax_bounds(r, j)
        assert pre == max(0, j - (d + 1 - m)) and pre <= thr <= suf
    with pytest.raises(UnsortedInput):
        minmax_bounds([F(1, 2), F(1, 3)], 1)
    with pytest.raises(OutOfRange):
        minmax_bounds([F(1, 2), F(3, 2)], 1)
    with pytest.raises(OutOfRange):
        minmax_bounds([F(1, 2), F(1, 2)], 3)


def _random_r(rng, d):
    """Rationals in [0, 1] with integer sum >= 2."""
    N = d + 1
    while True:
        q = rng.randint(1, 12)
        r = [F(rng.randint(0, q), q) for _ in range(N)]
        s = sum(r)
        target = rng.randint(2, N) if N >= 2 else 0
        # push entries toward an integral total
        for i in rng.sample(range(N), N):
            gap = target - s
            if gap == 0:
                break
            new = min(F(1), max(F(0), r[i] + gap))
            s += new - r[i]
            r[i] = new
        if s == target and s >= 2:
            return r


def test_minmax_random():
    rng = random.Random(1)
    for _ in range(1000):
        d = rng.randint(1, 8)
        r = sorted(F(rng.randint(0, 9), 9) for _ in range(d + 1))
        for j in range(1, d + 2):
            pre, suf, thr = minmax_bounds(r, j)
            assert pre <= thr <= suf


def test_heavy_examples():
    h = select_heavy_subset([F(2, 3)] * 3, 2)
    assert len(h.indices) == 2 and h.total == F(4, 3)
    h = select_heavy_subset([F(2, 5)] * 5, 4)
    assert len(h.indices) == 3 and h.total == F(6, 5)
    h = select_heavy_subset([F(1), F(1, 2), F(1, 2)], 2)
    assert h.indices[0] == 1 and h.total == F(3, 2)
    with pytest.raises(GuaranteeViolated):
        select_heavy_subset([F(1, 3)] * 3, 2)


def test_heavy_random():
    rng = random.Random(2)
    for _ in range(1000):
        d = rng.randint(2, 6)
        r = _random_r(rng, d)
        h = select_heavy_subset(r, d)
        assert 2 <= len(h.indices) <= d
        assert list(h.values) == sorted(h.values, reverse=True)
        assert sum(h.values[1:]) <= 1 and h.total >= 1 + F(1, d + 1)


def test_epsilon_suite():
    for d in range(2, 13):
        D = d * d - 1
        assert epsilon(d, D) == F(1, d + 1)
        for l in range(2, d + 1):
            assert epsilon(l, D) >= sum((F(1, D ** (a - 1)) for a in range(2, l + 1)), F(0))
            for j in range(3, l + 1):
                assert epsilon(l, D) - F(l - j + 1, D ** (j - 1)) > epsilon(j - 1, D)


# ---------------------------------------------------------------------------
# Z values and p choices


def test_z_value_examples():
    P = build_polytope(3, [0, 8, 16, 24])
    idx = (4, 2, 3)
    assert abs(z_value(P, idx, [0, 0, 5], 3)) == 5
    assert z_value(P, idx, [0, 0, 0], 2) == 0
    with pytest.raises(IndexError):
        z_value(P, idx, [0, 0, 0], 1)
    with pytest.raises(IndexError):
        z_value(P, (1, 1, 2), [0, 0, 0], 2)


def test_z_recursion_random():
    rng = random.Random(3)
    for _ in range(200):
        d = rng.randint(2, 5)
        P = build_polytope(d, sorted(rng.sample(range(0, 60), d + 1)))
        l = rng.randint(3, d + 1)
        idx = tuple(rng.sample(range(1, d + 2), l))
        p = [rng.randint(-30, 30) for _ in range(l)]
        j = rng.randint(2, l - 1)
        assert z_value(P, idx, p, j) == z_recursion(P, idx, p, j)


def test_choose_p_window_and_floor():
    P = build_polytope(2, [0, 3, 6])
    assert choose_p(P, (2, 3), 2, {}, F(2, 3)) == 2
    rng = random.Random(4)
    for _ in range(100):
        d = rng.randint(2, 4)
        P = build_polytope(d, [k * (d * d - 1) for k in range(d + 1)])
        l = rng.randint(2, d + 1)
        idx = tuple(rng.sample(range(1, d + 2), l))
        p = {l: rng.randint(0, 40)}
        for j in range(l - 1, 1, -1):
            r = F(rng.randint(0, 50), 50)
            p[j] = choose_p(P, idx, j, p, r)
            z = z_value(P, idx, p, j)
            assert z.denominator == 1


# ---------------------------------------------------------------------------
# the splitting algorithm


def test_decompose_examples():
    P = build_polytope(2, [0, 3, 6])
    rp = decompose_step(P, (2, 6, 30))
    assert rp.lambdas == (0, F(1, 3), F(2, 3))
    cert = full_decompose(P, (2, 6, 30))
    assert cert.parts == ((1, 5, 27), (1, 1, 3))
    assert full_decompose(P, (1, 3, 9)).parts == ((1, 3, 9),)
    rp = decompose_step(P, (2, 3, 9), r=(F(1), F(1), F(0)))
    assert rp.lambdas == (1, 0, 0)


def test_decompose_hypothesis_guard():
    P = build_polytope(2, [0, 1, 3])
    with pytest.raises(HypothesisViolated):
        decompose_step(P, (2, 2, 6))
    cert = full_decompose(P, (2, 2, 6), force=True)
    assert validate_certificate(P, cert)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_decompose_postconditions_sampled(d):
    D = d * d - 1
    P = build_polytope(d, [k * D for k in range(d + 1)])
    order = tuple(range(1, d + 2))
    for m in range(2, d + 1):
        for seed in range(25 if d < 5 else 10):
            x = sample_lattice_point(P, m, seed)
            r = barycentric(P, order, x).lambdas
            rp = decompose_step(P, x).lambdas
            assert sum(rp) == 1 and all(0 <= a <= b for a, b in zip(rp, r))
            point = [sum(l * v[k] for l, v in zip(rp, P.vertices)) for k in range(d + 1)]
            assert all(F(c).denominator == 1 for c in point)


def test_full_decompose_exhaustive_d2():
    P = build_polytope(2, [0, 3, 6])
    for m in (2, 3, 4):
        for x in enumerate_points(P, m).points:
            cert = full_decompose(P, x)
            assert validate_certificate(P, cert)


def test_validate_certificate_rejects():
    P = build_polytope(2, [0, 3, 6])
    assert not validate_certificate(P, DecompositionCertificate((2, 6, 30), ((1, 5, 27), (1, 1, 2))))
    assert not validate_certificate(P, DecompositionCertificate((2, 6, 30), ((2, 6, 30),)))
