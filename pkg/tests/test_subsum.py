from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from achieveset.compactset import IntervalUnion, hausdorff
from achieveset.families import geometric, guthrie_nymann, jones_x, power_generator
from achieveset.sequences import Explicit
from achieveset.subsum import (
    SubsumApproximation,
    SubsumError,
    approximate,
    enumerate_bruteforce,
    oracle_compare,
    refine,
    subsums_of,
    t_minus,
    t_plus,
)

small = st.fractions(min_value=-2, max_value=2, max_denominator=16)


def naive_subsums(values):
    """Independent oracle: sum every index subset explicitly."""
    return sorted({sum(c, F(0)) for k in range(len(values) + 1) for c in combinations(values, k)})


def test_bruteforce_examples():
    assert enumerate_bruteforce(Explicit([F(1, 2), F(1, 4)]), 2) == [0, F(1, 4), F(1, 2), F(3, 4)]
    assert enumerate_bruteforce(guthrie_nymann(), 2) == [0, F(1, 2), F(3, 4), F(5, 4)]
    assert enumerate_bruteforce(Explicit([1, -1]), 2) == [-1, 0, 1]


def test_bruteforce_limits():
    with pytest.raises(SubsumError):
        enumerate_bruteforce(geometric(F(1, 3)), 25)
    with pytest.raises(SubsumError):
        enumerate_bruteforce(power_generator(F(3, 2)), 3)


def test_approximate_examples():
    a = approximate(guthrie_nymann(), 2)
    assert a.inner == IntervalUnion.from_points([0, F(1, 2), F(3, 4), F(5, 4)])
    assert a.outer.intervals == ((0, F(5, 12)), (F(1, 2), F(7, 6)), (F(5, 4), F(5, 3)))
    assert a.error_bound == F(5, 12)
    g = approximate(geometric(F(1, 2)), 1)
    assert g.inner == IntervalUnion.from_points([0, F(1, 2)])
    assert g.outer.intervals == ((0, 1),) and g.error_bound == F(1, 2)
    signed = geometric(F(1, 2)) - geometric(F(1, 3))
    z = approximate(signed, 0)
    assert z.inner.intervals == ((0, 0),)
    assert z.outer.intervals == ((-z.tail_minus, z.tail_plus),)
    assert z.error_bound == signed.tail_sum_abs(0).hi


def test_refine_examples():
    r = refine(geometric(F(1, 2)), F(1, 10))
    assert r.depth == 4 and r.outer.intervals == ((0, 1),)
    # the tail 3^-n/2 first drops below 1/100 at n = 4
    assert refine(geometric(F(1, 3)), F(1, 100)).depth == 4
    assert refine(guthrie_nymann(), F(5, 3)).depth == 0
    tight = refine(jones_x(F(1, 6)), F(1, 10 ** 9), max_intervals=500)
    assert tight.budget_exhausted and len(tight.inner) <= 500


def test_oracle_examples():
    assert oracle_compare(guthrie_nymann(), 10).passed
    assert oracle_compare(jones_x(F(1, 6)), 12).passed
    dyadic = Explicit([F(1, 2 ** k) for k in range(16)])
    rep = oracle_compare(dyadic, 16)
    inner = approximate(dyadic, 16).inner
    assert rep.passed and rep.oracle_points == 2 ** 16
    assert (inner.min, inner.max) == (0, 2 - F(1, 2 ** 15))


def test_t_decomposition():
    for t in (F(3, 2), F(-2, 5), F(0)):
        assert t_plus(t) >= 0 and t_minus(t) >= 0
        assert t_plus(t) - t_minus(t) == t


def test_json_round_trip():
    a = approximate(guthrie_nymann(), 6)
    assert SubsumApproximation.from_json(a.to_json()) == a


@settings(max_examples=200, deadline=None)
@given(st.lists(small, min_size=1, max_size=9))
def test_inner_matches_naive_oracle(values):
    seq = Explicit(values)
    assert approximate(seq, len(values)).inner == IntervalUnion.from_points(naive_subsums(values))


@settings(max_examples=200, deadline=None)
@given(st.lists(small, min_size=1, max_size=8), st.integers(0, 8))
def test_finite_contract(values, depth):
    """For a finite sequence E(x) is computable: inner ⊆ E(x) ⊆ outer, d_H(E(x), inner) ≤ error_bound."""
    seq = Explicit(values)
    depth = min(depth, len(values))
    a = approximate(seq, depth)
    full = subsums_of(values)
    assert full.contains(a.inner) and a.outer.contains(full)
    assert hausdorff(full, a.inner) <= a.error_bound
    assert a.outer == a.inner.fatten(-a.tail_minus, a.tail_plus)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=10))
def test_lipschitz(pairs):
    x = [a for a, _ in pairs]
    y = [b for _, b in pairs]
    assert hausdorff(subsums_of(x), subsums_of(y)) <= sum(abs(a - b) for a, b in pairs)


@pytest.mark.parametrize("seq", [guthrie_nymann(), jones_x(F(1, 6)), geometric(F(1, 2)) - geometric(F(1, 3))])
def test_infinite_consistency(seq):
    approx = [approximate(seq, n) for n in range(13)]
    for n in range(12):
        assert approx[n + 1].inner.contains(approx[n].inner)
        assert approx[n + 1].error_bound <= approx[n].error_bound
    for n in range(8):
        assert hausdorff(approx[n].inner, approx[n + 5].inner) <= approx[n].error_bound
        for m in range(n, 13):
            meet = approx[n].outer.intersection(approx[m].outer)
            assert meet is not None and meet.contains(approx[m].inner)


@settings(max_examples=60, deadline=None)
@given(small, st.integers(1, 8))
def test_prepending_translates(c, depth):
    x = guthrie_nymann()
    inner = approximate(x, depth).inner
    shifted = approximate(x.prepended([c]), depth + 1).inner
    assert shifted == inner.union(inner.translate(c))
