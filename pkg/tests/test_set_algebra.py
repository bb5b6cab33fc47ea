import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmconcave import set_algebra as sa
from hmconcave.set_algebra import Box, Interval, IntervalArray, IntervalUnion

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def intervals(draw):
    a, b = draw(finite), draw(finite)
    return Interval(min(a, b), max(a, b))


def close(a: Interval, b: Interval, rel=1e-12):
    scale = max(1.0, abs(a.lo), abs(a.hi), abs(b.lo), abs(b.hi))
    return abs(a.lo - b.lo) <= rel * scale and abs(a.hi - b.hi) <= rel * scale


def test_interval_rejects_reversed_and_nonfinite():
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)
    with pytest.raises(ValueError):
        Interval(0.0, math.inf)
    with pytest.raises(ValueError):
        Interval(math.nan, 1.0)


def test_union_normalizes_touching_parts():
    u = IntervalUnion.of([Interval(2, 3), Interval(0, 1), Interval(1, 1.5)])
    assert u.parts == (Interval(0, 1.5), Interval(2, 3))
    assert u.hull == Interval(0, 3)
    assert 1.2 in u and 1.7 not in u


def test_union_margin_uses_gap_midpoint():
    outer = IntervalUnion.of([Interval(0, 1), Interval(3, 4)])
    # the worst point of [0, 4] is the gap centre 2, at distance 1
    assert sa.inclusion_margin(Interval(0, 4), outer) == pytest.approx(1.0)
    assert sa.inclusion_margin(Interval(0.2, 0.8), outer) == pytest.approx(-0.2)
    assert sa.inclusion_margin(Interval(0, 1.5), outer) == pytest.approx(0.5)


def test_box_operations_are_componentwise():
    a = Box((Interval(0, 1), Interval(-1, 2)))
    b = Box((Interval(1, 2), Interval(0, 0)))
    assert sa.mink_sum(a, b) == Box((Interval(1, 3), Interval(-1, 2)))
    assert sa.inclusion_margin(b, a) == pytest.approx(1.0)
    with pytest.raises(TypeError):
        sa.mink_sum(a, Interval(0, 1))


def test_inflate_negative_radius_rejected():
    with pytest.raises(ValueError):
        sa.inflate(Interval(0, 1), -0.1)


def test_is_subset_eps_accounts_for_eps():
    res = sa.is_subset_eps(Interval(0, 1.5), Interval(0, 1), eps=0.5)
    assert res.holds and res.margin == pytest.approx(0.0)
    assert not sa.is_subset_eps(Interval(0, 1.5), Interval(0, 1), eps=0.4).holds


def test_hausdorff_witness_value():
    A = Interval(-2, 3)
    assert sa.hausdorff(sa.scale(1.0, A), sa.scale(0.5, A)) == 1.5


@settings(max_examples=300)
@given(intervals(), intervals(), intervals())
def test_sum_laws(a, b, c):
    assert close(sa.mink_sum(a, b), sa.mink_sum(b, a))
    assert close(sa.mink_sum(sa.mink_sum(a, b), c), sa.mink_sum(a, sa.mink_sum(b, c)))


@settings(max_examples=300)
@given(intervals(), intervals(), st.floats(-10, 10), st.floats(-10, 10))
def test_scale_distributes(a, b, lam, mu):
    assert close(sa.scale(lam, sa.mink_sum(a, b)), sa.mink_sum(sa.scale(lam, a), sa.scale(lam, b)))
    if lam * mu >= 0:
        assert close(sa.scale(lam + mu, a), sa.mink_sum(sa.scale(lam, a), sa.scale(mu, a)))
    else:
        # only the inclusion survives for mixed signs
        lhs, rhs = sa.scale(lam + mu, a), sa.mink_sum(sa.scale(lam, a), sa.scale(mu, a))
        assert sa.inclusion_margin(lhs, rhs) <= 1e-9 * max(1.0, rhs.magnitude)


@settings(max_examples=300)
@given(intervals(), intervals(), intervals())
def test_product_subdistributive(a, b, c):
    lhs = sa.mink_product(a, sa.mink_sum(b, c))
    rhs = sa.mink_sum(sa.mink_product(a, b), sa.mink_product(a, c))
    assert sa.inclusion_margin(lhs, rhs) <= 1e-12 * max(1.0, rhs.magnitude)


@settings(max_examples=300)
@given(intervals(), intervals(), intervals())
def test_radstrom_never_inconsistent(a1, a2, c):
    assert sa.radstrom_check(a1, a2, c).consistent


@settings(max_examples=200)
@given(intervals(), intervals(), intervals())
def test_inclusion_monotone_under_sum(a, b, c):
    if sa.inclusion_margin(a, b) <= 0:
        assert sa.inclusion_margin(sa.mink_sum(a, c), sa.mink_sum(b, c)) <= 1e-9


@settings(max_examples=200)
@given(st.lists(intervals(), min_size=1, max_size=4), intervals())
def test_union_margin_matches_dense_sampling(parts, inner):
    outer = IntervalUnion.of(parts)
    exact = sa.inclusion_margin(inner, outer)
    zs = np.linspace(inner.lo, inner.hi, 2001)
    dense = max(min(max(q.lo - z, z - q.hi, 0.0) for q in outer.parts) for z in zs)
    if exact > 0:
        assert dense <= exact + 1e-9
        assert exact - dense <= (inner.width / 2000) + 1e-9
    else:
        assert dense == 0.0


def test_interval_array_matches_scalar_algebra():
    rng = np.random.default_rng(3)
    n = 500
    a = rng.uniform(-5, 5, (2, n))
    b = rng.uniform(-5, 5, (2, n))
    A = IntervalArray(a.min(0), a.max(0))
    B = IntervalArray(b.min(0), b.max(0))
    lam = rng.uniform(-3, 3, n)
    r = rng.uniform(0, 1, n)
    s, p, sc, inf = A + B, A.product(B), A.scale(lam), A.inflate(r)
    mg = A.margin_in(B)
    for i in range(n):
        ai, bi = A[i], B[i]
        assert s[i] == sa.mink_sum(ai, bi)
        assert p[i] == sa.mink_product(ai, bi)
        assert sc[i] == sa.scale(lam[i], ai)
        assert inf[i] == sa.inflate(ai, r[i])
        assert mg[i] == sa.inclusion_margin(ai, bi)
