"""Finite unions of closed intervals with exact rational endpoints.

Endpoints are stored as integers over one shared denominator, which keeps
merging, translation and distance sweeps in integer arithmetic even for unions
with tens of thousands of components.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Iterable, Iterator

from .numbers import parse_rational


class IntervalUnionError(ValueError):
    pass


def _merge(pairs: Iterable[tuple[int, int]]) -> tuple[list[int], list[int]]:
    starts: list[int] = []
    ends: list[int] = []
    for a, b in sorted(pairs):
        if a > b:
            raise IntervalUnionError("inverted interval")
        if ends and a <= ends[-1]:
            if b > ends[-1]:
                ends[-1] = b
        else:
            starts.append(a)
            ends.append(b)
    return starts, ends


class IntervalUnion:
    """Canonical nonempty union of disjoint closed intervals, sorted left to right."""

    __slots__ = ("_den", "_a", "_b")

    def __init__(self, intervals: Iterable):
        raw = [(Fraction(a), Fraction(b)) for a, b in intervals]
        if not raw:
            raise IntervalUnionError("an interval union must be nonempty")
        den = math.lcm(*(x.denominator for pair in raw for x in pair))
        pairs = [(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator)) for a, b in raw]
        starts, ends = _merge(pairs)
        self._set(den, starts, ends)

    def _set(self, den, starts, ends):
        g = math.gcd(den, *starts, *ends)
        if g > 1:
            den //= g
            starts = [a // g for a in starts]
            ends = [b // g for b in ends]
        self._den = den
        self._a = tuple(starts)
        self._b = tuple(ends)

    @classmethod
    def _scaled(cls, den: int, pairs: Iterable[tuple[int, int]], merged: bool = False) -> "IntervalUnion":
        """Build from integer endpoint pairs over ``den`` (internal fast path)."""
        if merged:
            starts = [a for a, _ in pairs]
            ends = [b for _, b in pairs]
        else:
            starts, ends = _merge(pairs)
        if not starts:
            raise IntervalUnionError("an interval union must be nonempty")
        obj = cls.__new__(cls)
        obj._set(den, starts, ends)
        return obj

    @classmethod
    def from_points(cls, points: Iterable, den: int | None = None) -> "IntervalUnion":
        """Degenerate intervals at the given points (integers over ``den`` when given)."""
        if den is not None:
            pts = sorted(set(points))  # distinct points never merge
            return cls._scaled(den, list(zip(pts, pts)), merged=True)
        return cls((p, p) for p in points)

    @classmethod
    def interval(cls, a, b) -> "IntervalUnion":
        return cls([(a, b)])

    # views ----------------------------------------------------------------

    @property
    def intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        d = self._den
        return tuple((Fraction(a, d), Fraction(b, d)) for a, b in zip(self._a, self._b))

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self._a)

    def component_count(self) -> int:
        return len(self._a)

    @property
    def min(self) -> Fraction:
        return Fraction(self._a[0], self._den)

    @property
    def max(self) -> Fraction:
        return Fraction(self._b[-1], self._den)

    def hull(self) -> "IntervalUnion":
        return IntervalUnion._scaled(self._den, [(self._a[0], self._b[-1])], merged=True)

    def measure(self) -> Fraction:
        return Fraction(sum(b - a for a, b in zip(self._a, self._b)), self._den)

    def is_interval(self) -> bool:
        return len(self._a) == 1

    def longest_component(self) -> tuple[Fraction, Fraction]:
        i = max(range(len(self._a)), key=lambda k: (self._b[k] - self._a[k], -k))
        return Fraction(self._a[i], self._den), Fraction(self._b[i], self._den)

    def gaps(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """The bounded open gaps between consecutive components."""
        d = self._den
        return tuple((Fraction(b, d), Fraction(a, d)) for b, a in zip(self._b, self._a[1:]))

    def separating_intervals(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Pairwise disjoint open intervals, one per component, each meeting the set, jointly covering it."""
        d2 = 2 * self._den
        out = []
        n = len(self._a)
        for i in range(n):
            lo = self._a[i] + self._b[i - 1] if i else 2 * self._a[i] - 2
            hi = self._b[i] + self._a[i + 1] if i + 1 < n else 2 * self._b[i] + 2
            out.append((Fraction(lo, d2), Fraction(hi, d2)))
        return tuple(out)

    # set algebra ------------------------------------------------------------

    def _rescaled(self, den: int) -> tuple[list[int], list[int]]:
        f = den // self._den
        return [a * f for a in self._a], [b * f for b in self._b]

    def translate(self, c) -> "IntervalUnion":
        c = Fraction(c)
        den = math.lcm(self._den, c.denominator)
        shift = c.numerator * (den // c.denominator)
        a, b = self._rescaled(den)
        return IntervalUnion._scaled(den, [(x + shift, y + shift) for x, y in zip(a, b)], merged=True)

    def scale(self, c) -> "IntervalUnion":
        c = Fraction(c)
        if c == 0:
            return IntervalUnion([(0, 0)])
        den = self._den * c.denominator
        k = c.numerator
        pairs = [(x * k, y * k) if k > 0 else (y * k, x * k) for x, y in zip(self._a, self._b)]
        if k < 0:
            pairs.reverse()
        return IntervalUnion._scaled(den, pairs, merged=True)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        den = math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        return IntervalUnion._scaled(den, list(zip(a1, b1)) + list(zip(a2, b2)))

    def fatten(self, lo, hi) -> "IntervalUnion":
        """Minkowski sum with ``[lo, hi]``."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise IntervalUnionError("fatten needs lo <= hi")
        den = math.lcm(self._den, lo.denominator, hi.denominator)
        l = lo.numerator * (den // lo.denominator)
        h = hi.numerator * (den // hi.denominator)
        a, b = self._rescaled(den)
        return IntervalUnion._scaled(den, ((x + l, y + h) for x, y in zip(a, b)))

    def minkowski_sum(self, other: "IntervalUnion") -> "IntervalUnion":
        den = math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        return IntervalUnion._scaled(den, ((x + u, y + v) for x, y in zip(a1, b1) for u, v in zip(a2, b2)))

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion | None":
        den = math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        i = j = 0
        out = []
        while i < len(a1) and j < len(a2):
            lo, hi = max(a1[i], a2[j]), min(b1[i], b2[j])
            if lo <= hi:
                out.append((lo, hi))
            if b1[i] < b2[j]:
                i += 1
            else:
                j += 1
        return IntervalUnion._scaled(den, out) if out else None

    # queries ----------------------------------------------------------------

    def contains_point(self, x) -> bool:
        x = Fraction(x)
        k = bisect_right(self._a, x * self._den) - 1
        return k >= 0 and x * self._den <= self._b[k]

    def contains(self, other) -> bool:
        """Exact subset test ``other ⊆ self``; ``other`` may be a union, a pair or a point."""
        if not isinstance(other, IntervalUnion):
            if isinstance(other, tuple):
                other = IntervalUnion([other])
            else:
                return self.contains_point(other)
        den = math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        for x, y in zip(a2, b2):
            k = bisect_right(a1, x) - 1
            if k < 0 or y > b1[k]:
                return False
        return True

    def distance_to_point(self, x) -> Fraction:
        x = Fraction(x)
        k = bisect_right(self._a, x * self._den) - 1
        best = None
        for idx in (k, k + 1):
            if 0 <= idx < len(self._a):
                a, b = Fraction(self._a[idx], self._den), Fraction(self._b[idx], self._den)
                d = a - x if x < a else (x - b if x > b else Fraction(0))
                best = d if best is None else min(best, d)
        return best

    def directed_distance(self, other: "IntervalUnion") -> Fraction:
        """``max_{t in self} dist(t, other)``."""
        den = 2 * math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        return Fraction(_directed(a1, b1, a2, b2), den)

    def hausdorff(self, other: "IntervalUnion") -> Fraction:
        den = 2 * math.lcm(self._den, other._den)
        a1, b1 = self._rescaled(den)
        a2, b2 = other._rescaled(den)
        return Fraction(max(_directed(a1, b1, a2, b2), _directed(a2, b2, a1, b1)), den)

    def complement_pieces(self, window) -> list[tuple[Fraction, Fraction]]:
        """Maximal open pieces of ``window`` not covered by the set, left to right."""
        lo, hi = (Fraction(v) for v in window)
        if lo > hi:
            raise IntervalUnionError("inverted window")
        den = math.lcm(self._den, lo.denominator, hi.denominator)
        l = lo.numerator * (den // lo.denominator)
        h = hi.numerator * (den // hi.denominator)
        a, b = self._rescaled(den)
        pieces = []
        cursor = l
        for x, y in zip(a, b):
            if y < l:
                continue
            if x > h:
                break
            if x > cursor:
                pieces.append((cursor, x))
            cursor = max(cursor, y)
        if h > cursor:
            pieces.append((cursor, h))
        return [(Fraction(x, den), Fraction(y, den)) for x, y in pieces]

    def max_gap(self, window) -> Fraction:
        """Length of the longest piece of ``window`` not covered by the set (0 if covered)."""
        lo, hi = (Fraction(v) for v in window)
        if lo > hi:
            raise IntervalUnionError("inverted window")
        if self.intersection(IntervalUnion([(lo, hi)])) is None:
            raise IntervalUnionError("window does not meet the set")
        return max((y - x for x, y in self.complement_pieces((lo, hi))), default=Fraction(0))

    # equality and serialization -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self._den == other._den and self._a == other._a and self._b == other._b

    def __hash__(self):
        return hash((self._den, self._a, self._b))

    def __repr__(self):
        shown = ", ".join(f"[{a}, {b}]" for a, b in self.intervals[:6])
        more = f", ... ({len(self)} total)" if len(self) > 6 else ""
        return f"IntervalUnion({shown}{more})"

    def to_json(self) -> dict:
        rows = []
        for a, b in self.intervals:
            rows.append([str(a.numerator), str(a.denominator), str(b.numerator), str(b.denominator)])
        return {"intervals": rows}

    @classmethod
    def from_json(cls, obj) -> "IntervalUnion":
        try:
            rows = obj["intervals"]
            pairs = [(Fraction(int(r[0]), int(r[1])), Fraction(int(r[2]), int(r[3]))) for r in rows]
        except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
            raise IntervalUnionError(f"malformed interval union JSON: {exc}") from exc
        return cls(pairs)

    @classmethod
    def parse(cls, text: str) -> "IntervalUnion":
        """Read ``"[a,b] [c,d]"`` style text with rational endpoints."""
        pieces = text.replace("],", "] ").replace("{", " ").replace("}", " ").split("]")
        pairs = []
        for piece in pieces:
            piece = piece.strip().lstrip("[").strip()
            if not piece:
                continue
            a, b = piece.split(",")
            pairs.append((parse_rational(a), parse_rational(b)))
        return cls(pairs)


def _directed(a1, b1, a2, b2) -> int:
    """``max_{t in A} dist(t, B)`` for integer endpoint lists (all midpoints are integers)."""

    def dist(t: int) -> int:
        k = bisect_right(a2, t) - 1
        best = None
        if k >= 0:
            best = 0 if t <= b2[k] else t - b2[k]
        if k + 1 < len(a2):
            d = a2[k + 1] - t
            best = d if best is None else min(best, d)
        return best

    best = 0
    for x, y in zip(a1, b1):
        best = max(best, dist(x), dist(y))
        # gap midpoints of B strictly inside [x, y]
        lo = max(bisect_left(b2, x) - 1, 0)
        for g in range(lo, len(b2) - 1):
            if b2[g] >= y:
                break
            mid = (b2[g] + a2[g + 1]) // 2
            if x < mid < y:
                best = max(best, (a2[g + 1] - b2[g]) // 2)
    return best


def normalize(raw: Iterable) -> IntervalUnion:
    """Canonical form of a union of closed intervals given as ``(a, b)`` pairs."""
    return IntervalUnion(raw)


def hausdorff(a: IntervalUnion, b: IntervalUnion) -> Fraction:
    return a.hausdorff(b)
