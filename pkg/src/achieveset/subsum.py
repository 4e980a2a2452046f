"""Prefix subsums and tail-fattened enclosures of achievement sets.

For a depth ``n`` the inner set is the finite set of subsums of the first ``n``
terms and the outer set adds every possible tail contribution,
``[-sum tail negatives, sum tail positives]``.  The true achievement set lies
between the two, and is within the tail's l1 norm of the inner set in Hausdorff
distance (dropping the tail is a 1-Lipschitz perturbation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence as Seq

from .compactset import IntervalUnion, _merge
from .numbers import Enclosure, format_rational, parse_rational
from .sequences import Sequence

BRUTEFORCE_LIMIT = 24
ORACLE_LIMIT = 20


class SubsumError(ValueError):
    pass


@dataclass(frozen=True)
class SubsumApproximation:
    depth: int
    inner: IntervalUnion
    outer: IntervalUnion
    tail_plus: Fraction
    tail_minus: Fraction
    error_bound: Fraction
    exact: bool = True
    budget_exhausted: bool = False

    def to_json(self) -> dict:
        out = {
            "depth": self.depth,
            "error_bound": format_rational(self.error_bound),
            "inner": self.inner.to_json(),
            "outer": self.outer.to_json(),
            "tail_plus": format_rational(self.tail_plus),
            "tail_minus": format_rational(self.tail_minus),
            "exact": self.exact,
        }
        if self.budget_exhausted:
            out["budget_exhausted"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SubsumApproximation":
        return cls(
            depth=int(obj["depth"]),
            inner=IntervalUnion.from_json(obj["inner"]),
            outer=IntervalUnion.from_json(obj["outer"]),
            tail_plus=parse_rational(obj["tail_plus"]),
            tail_minus=parse_rational(obj["tail_minus"]),
            error_bound=parse_rational(obj["error_bound"]),
            exact=bool(obj.get("exact", True)),
            budget_exhausted=bool(obj.get("budget_exhausted", False)),
        )


def t_plus(t) -> Fraction:
    return max(Fraction(t), Fraction(0))


def t_minus(t) -> Fraction:
    """Negative part as a non-negative number, so ``t == t_plus(t) - t_minus(t)``."""
    return max(-Fraction(t), Fraction(0))


# ---------------------------------------------------------------------------
# brute force oracle


def _exact_prefix(source, n: int) -> list[Fraction]:
    if isinstance(source, Sequence):
        values = source.terms(n)
    else:
        values = [Enclosure.of(v) for v in list(source)[:n]]
        if len(values) < n:
            values += [Enclosure(0)] * (n - len(values))
    out = []
    for i, v in enumerate(values, start=1):
        if not v.is_exact:
            raise SubsumError(f"term {i} is not an exact rational")
        out.append(v.lo)
    return out


def _common_scale(values: Seq[Fraction]) -> tuple[int, list[int]]:
    den = math.lcm(1, *(v.denominator for v in values))
    return den, [v.numerator * (den // v.denominator) for v in values]


def bruteforce_scaled(source, n: int) -> tuple[int, list[int]]:
    """Sorted distinct prefix subsums as integers over a common denominator.

    Walks all ``2**n`` index subsets in Gray-code order, so it shares nothing
    with the set-doubling used by :func:`approximate`.
    """
    if n > BRUTEFORCE_LIMIT:
        raise SubsumError(f"brute force depth {n} exceeds {BRUTEFORCE_LIMIT}")
    den, ints = _common_scale(_exact_prefix(source, n))
    total = 0
    sums = [0]
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        total += ints[bit] if gray >> bit & 1 else -ints[bit]
        sums.append(total)
    return den, sorted(set(sums))


def enumerate_bruteforce(source, n: int) -> list[Fraction]:
    """All distinct subsums of the first ``n`` terms, sorted."""
    den, sums = bruteforce_scaled(source, n)
    return [Fraction(s, den) for s in sums]


# ---------------------------------------------------------------------------
# incremental engine


def _levels_exact(values: list[Fraction]) -> Iterator[tuple[int, set[int]]]:
    den, ints = _common_scale(values)
    current = {0}
    yield den, current
    for t in ints:
        current = current | {s + t for s in current}
        yield den, current


def _levels_enclosed(values: list[Enclosure]) -> Iterator[tuple[int, list[tuple[int, int]]]]:
    den = math.lcm(1, *(x.denominator for v in values for x in (v.lo, v.hi)))
    pairs = [(v.lo.numerator * (den // v.lo.denominator), v.hi.numerator * (den // v.hi.denominator))
             for v in values]
    current = [(0, 0)]
    yield den, current
    for lo, hi in pairs:
        starts, ends = _merge(current + [(a + lo, b + hi) for a, b in current])
        current = list(zip(starts, ends))
        yield den, current


def _levels(seq: Sequence, n: int):
    values = seq.terms(n)
    if all(v.is_exact for v in values):
        for den, pts in _levels_exact([v.lo for v in values]):
            yield True, den, pts
    else:
        for den, pairs in _levels_enclosed(values):
            yield False, den, pairs


def _package(seq: Sequence, depth: int, exact: bool, den: int, data, budget_exhausted=False):
    if exact:
        inner = IntervalUnion.from_points(sorted(data), den)
    else:
        inner = IntervalUnion._scaled(den, data, merged=True)
    tp = seq.tail_plus(depth).hi
    tm = seq.tail_minus(depth).hi
    eb = seq.tail_sum_abs(depth).hi
    return SubsumApproximation(depth, inner, inner.fatten(-tm, tp), tp, tm, eb, exact, budget_exhausted)


def approximate(seq: Sequence, n: int) -> SubsumApproximation:
    """Inner and outer enclosures of the achievement set at depth ``n``."""
    if n < 0:
        raise SubsumError("depth must be non-negative")
    state = None
    for state in _levels(seq, n):
        pass
    exact, den, data = state
    return _package(seq, n, exact, den, data)


def depth_for(seq: Sequence, eps, max_depth: int = 4096) -> int | None:
    """Smallest depth whose certified tail bound is at most ``eps``."""
    eps = Fraction(eps)
    for n in range(max_depth + 1):
        if seq.tail_sum_abs(n).hi <= eps:
            return n
    return None


def refine(seq: Sequence, target_eps, max_intervals: int = 1 << 20) -> SubsumApproximation:
    """Shallowest approximation with ``error_bound <= target_eps`` within the interval budget.

    When the inner set would outgrow ``max_intervals`` first, the deepest
    approximation that fits is returned with ``budget_exhausted`` set.
    """
    target_eps = Fraction(target_eps)
    if target_eps <= 0:
        raise SubsumError("target_eps must be positive")
    goal = depth_for(seq, target_eps)
    horizon = goal if goal is not None else 4096
    best = None
    depth = -1
    for depth, state in enumerate(_levels(seq, horizon)):
        exact, den, data = state
        if len(data) > max_intervals:
            break
        best = (depth, exact, den, data)
    else:
        if goal is not None:
            d, exact, den, data = best
            return _package(seq, d, exact, den, data)
    d, exact, den, data = best
    return _package(seq, d, exact, den, data, budget_exhausted=True)


# ---------------------------------------------------------------------------
# oracle comparison


@dataclass(frozen=True)
class OracleReport:
    passed: bool
    depth: int
    inner_components: int
    oracle_points: int
    first_discrepancy: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "depth": self.depth,
            "inner_components": self.inner_components,
            "oracle_points": self.oracle_points,
            "first_discrepancy": None if self.first_discrepancy is None else format_rational(self.first_discrepancy),
        }


def oracle_compare(seq: Sequence, n: int) -> OracleReport:
    """Check that the engine's inner set equals the brute-force subsum set."""
    if n > ORACLE_LIMIT:
        raise SubsumError(f"oracle depth {n} exceeds {ORACLE_LIMIT}")
    approx = approximate(seq, n)
    den, sums = bruteforce_scaled(seq, n)
    expected = IntervalUnion.from_points(sums, den)
    if approx.inner == expected:
        return OracleReport(True, n, len(approx.inner), len(sums))
    got = [a for a, _ in approx.inner.intervals]
    want = [Fraction(s, den) for s in sums]
    bad = next((x for x, y in zip(got, want) if x != y), None)
    if bad is None:
        bad = (got[len(want)] if len(got) > len(want) else want[len(got)])
    return OracleReport(False, n, len(approx.inner), len(sums), bad)


def subsums_of(values: Iterable) -> IntervalUnion:
    """Exact set of subsums of a finite list of rationals."""
    values = [Fraction(v) for v in values]
    state = None
    for state in _levels_exact(values):
        pass
    den, pts = state
    return IntervalUnion.from_points(sorted(pts), den)
