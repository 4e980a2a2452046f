from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from achieveset.compactset import IntervalUnion, IntervalUnionError, hausdorff, normalize
from achieveset.families import geometric
from achieveset.subsum import approximate, enumerate_bruteforce

GN2 = [(0, F(5, 12)), (F(1, 2), F(11, 12)), (F(3, 4), F(7, 6)), (F(5, 4), F(5, 3))]

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=12)


@st.composite
def unions(draw):
    pairs = draw(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=6))
    return normalize([(min(a, b), max(a, b)) for a, b in pairs])


def test_normalize_examples():
    assert normalize([(0, 1), (1, 2)]).intervals == ((0, 2),)
    assert normalize(GN2).intervals == ((0, F(5, 12)), (F(1, 2), F(7, 6)), (F(5, 4), F(5, 3)))
    assert normalize([(3, 3)]).intervals == ((3, 3),)


def test_normalize_rejects_bad_input():
    with pytest.raises(IntervalUnionError):
        normalize([])
    with pytest.raises(IntervalUnionError):
        normalize([(1, 0)])


def test_hausdorff_examples():
    unit = IntervalUnion([(0, 1)])
    assert hausdorff(unit, unit) == 0
    assert hausdorff(unit, IntervalUnion([(2, 3)])) == 2
    assert hausdorff(IntervalUnion.from_points([0, 1]), unit) == F(1, 2)


def test_component_counts():
    assert IntervalUnion([(0, 2)]).component_count() == 1
    gn = normalize(GN2)
    assert gn.component_count() == 3
    # one open interval per component: pairwise disjoint, each meets the set, together they cover it
    seps = gn.separating_intervals()
    assert len(seps) == gn.component_count()
    assert all(b1 <= a2 for (_, b1), (a2, _) in zip(seps, seps[1:]))
    for (a, b), (lo, hi) in zip(seps, gn.intervals):
        assert a < lo and hi < b
    for n in range(7):
        assert approximate(geometric(F(1, 4)), n).outer.component_count() == 2 ** n


def test_set_images():
    assert IntervalUnion([(0, 1)]).translate(F(-1, 2)).intervals == ((F(-1, 2), F(1, 2)),)
    assert IntervalUnion([(0, F(5, 12)), (F(1, 2), F(7, 6))]).scale(-1).intervals == (
        (F(-7, 6), F(-1, 2)), (F(-5, 12), 0))
    pts = IntervalUnion.from_points([0, F(1, 2), F(3, 4), F(5, 4)])
    assert pts.fatten(0, F(5, 12)) == normalize(GN2)
    assert IntervalUnion([(1, 2)]).scale(0).intervals == ((0, 0),)


def test_contains_examples():
    assert IntervalUnion([(0, F(5, 12)), (F(1, 2), F(7, 6))]).contains(IntervalUnion([(F(3, 5), 1)]))
    assert not IntervalUnion([(0, 1)]).contains(IntervalUnion.from_points([0, 2]))


def test_max_gap_middle_thirds():
    inner = approximate(geometric(F(1, 3)), 6).inner
    pts = enumerate_bruteforce(geometric(F(1, 3)), 6)
    window = (F(0), F(1, 2))
    inside = [p for p in pts if window[0] <= p <= window[1]]
    expected = max(b - a for a, b in zip(inside, inside[1:]))
    assert inner.max_gap(window) == expected > 0
    assert IntervalUnion([(0, 1)]).max_gap((F(1, 4), F(3, 4))) == 0
    with pytest.raises(IntervalUnionError):
        IntervalUnion([(0, 1)]).max_gap((2, 3))


def test_json_round_trip():
    u = normalize(GN2)
    assert IntervalUnion.from_json(u.to_json()) == u
    assert IntervalUnion.parse("[0,5/12] [1/2,7/6] [5/4,5/3]") == u


@settings(max_examples=150, deadline=None)
@given(unions(), unions(), unions())
def test_metric_axioms(a, b, c):
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c)
    assert (hausdorff(a, b) == 0) == (a == b)


@settings(max_examples=100, deadline=None)
@given(unions(), unions(), rationals)
def test_translation_invariance(a, b, t):
    assert hausdorff(a.translate(t), b.translate(t)) == hausdorff(a, b)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=6), st.randoms())
def test_normalize_idempotent_and_order_free(pairs, rnd):
    pairs = [(min(a, b), max(a, b)) for a, b in pairs]
    u = normalize(pairs)
    assert normalize(u.intervals) == u
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert normalize(shuffled) == u


@settings(max_examples=100, deadline=None)
@given(unions(), unions(), rationals)
def test_containment_and_union_laws(a, b, t):
    assert (a.contains(b) and b.contains(a)) == (a == b)
    assert a.union(a.translate(t)).component_count() <= 2 * a.component_count()
    assert a.union(b).contains(a)


@settings(max_examples=100, deadline=None)
@given(unions(), rationals)
def test_hausdorff_matches_dense_sampling(a, t):
    """No sampled point of A is farther from B than the computed distance."""
    b = IntervalUnion.from_points([t, t + 1])
    d = hausdorff(a, b)
    grid = [a.min + (a.max - a.min) * F(k, 64) for k in range(65)]
    sampled = max(b.distance_to_point(x) for x in grid if a.contains_point(x))
    assert sampled <= d
