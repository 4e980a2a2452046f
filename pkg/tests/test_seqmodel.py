from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from achieveset.families import (
    exp_generator,
    exp_mixture,
    geometric,
    guthrie_nymann,
    jones_x,
    jones_y,
    pow_mixture,
    power_generator,
    spaceability_combine,
)
from achieveset.numbers import Enclosure
from achieveset.sequences import (
    BlockMixture,
    Explicit,
    SequenceError,
    linear_combination,
    polynomial,
    power_product,
)


def exact(e: Enclosure) -> F:
    assert e.is_exact
    return e.lo


def sample_sequences():
    x, y = geometric(F(1, 2)), geometric(F(1, 3))
    return {
        "geometric": geometric(F(2, 5)),
        "gn": guthrie_nymann(),
        "jones-x": jones_x(F(1, 6)),
        "jones-y": jones_y(F(2, 11) - F(1, 100)),
        "exp-mixture": exp_mixture([1, -1], [F(1, 3), F(1, 9)]),
        "pow-mixture": pow_mixture([2, -1], [2, 3]),
        "irrational-pow": power_generator(F(3, 2)),
        "irrational-exp": exp_generator(F(1, 2), Enclosure.power(2, F(1, 2))),
        "spaceability": spaceability_combine([1, F(-1, 2), F(1, 4)])[0],
        "difference": x - y,
        "patched": guthrie_nymann().patched([F(7), F(-2)], 1),
        "abs": (x - y.scaled(3)).absolute(),
    }


def test_term_examples():
    assert exact(geometric(F(1, 2)).term(3)) == F(1, 8)
    assert exact(guthrie_nymann().term(3)) == F(3, 16)
    assert exact(pow_mixture([1], [2]).term(4)) == F(1, 16)
    assert exact(exp_mixture([1, -1], [F(1, 3), F(1, 9)]).term(2)) == F(8, 81)
    assert exact(pow_mixture([2, -1], [2, 3]).term(2)) == F(3, 8)


def test_tail_examples():
    assert exact(geometric(F(1, 3)).tail_sum_abs(2)) == F(1, 18)
    assert exact(guthrie_nymann().tail_sum_abs(2)) == F(5, 12)
    t = pow_mixture([1], [2]).tail_sum_abs(3)
    assert t.lo == F(1, 4)
    assert F(1, 3) <= t.hi <= F(1, 3) + F(1, 2 ** 100)


def test_gn_even_tails():
    b = guthrie_nymann()
    for n in range(1, 40):
        assert exact(b.tail_sum_abs(2 * n)) == F(5, 3 * 4 ** n)


@pytest.mark.parametrize("name", list(sample_sequences()))
def test_telescoping_tails(name):
    seq = sample_sequences()[name]
    for n in range(0, 1000, 7):
        here, term, nxt = seq.tail_sum_abs(n), abs(seq.term(n + 1)), seq.tail_sum_abs(n + 1)
        assert here.lo <= term.hi + nxt.hi
        assert here.hi >= term.lo + nxt.lo


@pytest.mark.parametrize("name", list(sample_sequences()))
def test_term_width(name):
    seq = sample_sequences()[name]
    for n in (1, 2, 10, 100, 1000):
        t = seq.term(n)
        assert t.hi - t.lo <= F(1, 2 ** 64) * max(1, abs(t.hi))


@pytest.mark.parametrize("name", list(sample_sequences()))
def test_sign_profile_has_no_false_positive(name):
    seq = sample_sequences()[name]
    prof = seq.sign_profile
    terms = seq.terms(1000)
    if prof.eventually_nonnegative:
        assert all(t.lo >= 0 for t in terms[prof.nonnegative_from - 1:])
    if prof.eventually_nonincreasing:
        absolutes = [abs(t) for t in terms[prof.nonincreasing_from - 1:]]
        assert all(a.lo >= b.hi or a == b for a, b in zip(absolutes, absolutes[1:]))


def test_enclosures_tighten_with_precision():
    seqs = [power_generator(F(3, 2), prec=bits) for bits in (64, 128, 256)]
    tails = [s.tail_sum_abs(5).width for s in seqs]
    terms = [s.term(7).width for s in seqs]
    assert tails[0] >= tails[1] >= tails[2]
    assert terms[0] > terms[1] > terms[2]


def test_linear_combination_examples():
    x = linear_combination([geometric(F(1, 2)), geometric(F(1, 3))], [1, 0])
    assert all(exact(x.term(n)) == F(1, 2 ** n) for n in range(1, 50))
    zero = linear_combination([jones_x(F(1, 6)), jones_x(F(1, 6))], [1, -1])
    assert all(exact(t) == 0 for t in zero.terms(30))
    assert exact(linear_combination([jones_x(F(1, 6))], [2]).term(4)) == F(4, 3)
    with pytest.raises(SequenceError):
        linear_combination([geometric(F(1, 2))], [1, 2])


def test_linear_combination_is_pointwise_exact():
    parts = [geometric(F(1, 3)), guthrie_nymann(), jones_x(F(1, 6)), pow_mixture([1], [2]), exp_mixture([1], [F(1, 5)])]
    betas = [F(1, 2), -3, F(2, 7), 5, F(-1, 9)]
    combo = linear_combination(parts, betas)
    for n in range(1, 1001, 3):
        assert exact(combo.term(n)) == sum(b * exact(p.term(n)) for b, p in zip(betas, parts))


def test_block_combination_stays_closed_form():
    combo = linear_combination([jones_x(F(7, 40)), jones_x(F(1, 6))], [F(1, 3), -4])
    assert isinstance(combo, BlockMixture)
    assert combo.tail_sum_abs(100).is_exact


def test_power_product_examples():
    sq = power_product([geometric(F(1, 2))], [2])
    assert all(exact(sq.term(n)) == F(1, 4 ** n) for n in range(1, 30))
    prod = power_product([pow_mixture([1], [2]), pow_mixture([1], [3])], [1, 1])
    assert all(exact(prod.term(n)) == F(1, n ** 5) for n in range(1, 30))
    with pytest.raises(SequenceError):
        power_product([geometric(F(1, 2)), pow_mixture([1], [2])], [1, 1])
    with pytest.raises(SequenceError):
        power_product([], [])


def test_polynomial_derived_exponents_are_checked():
    g1 = exp_generator(F(1, 2), 1)
    g2 = exp_generator(F(1, 2), 2)
    seq, derived = polynomial([g1, g2], [1, -1], [[1, 0], [1, 1]])
    assert [d.lo for d in derived] == [1, 3]
    assert exact(seq.term(1)) == F(1, 2) - F(1, 8)
    with pytest.raises(SequenceError):
        polynomial([g1, g2], [1, 1], [[2, 0], [0, 1]])


def test_exp_mixture_refuses_equal_ratios():
    with pytest.raises(ValueError):
        exp_mixture([1, 2], [F(1, 3), F(1, 3)])


def test_explicit_is_finitely_supported():
    x = Explicit([1, F(1, 2), 0])
    assert x.is_finitely_supported
    assert exact(x.term(10)) == 0
    assert exact(x.tail_sum_abs(0)) == F(3, 2)


small = st.fractions(min_value=-3, max_value=3, max_denominator=9)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=3), small.filter(bool))
def test_patched_tail_matches_base(head, c):
    base = guthrie_nymann().scaled(c)
    mod = base.patched(head, len(head))
    for n in range(len(head), len(head) + 20):
        assert mod.tail_sum_abs(n) == base.tail_sum_abs(n)
    for i, v in enumerate(head, start=1):
        assert exact(mod.term(i)) == v
