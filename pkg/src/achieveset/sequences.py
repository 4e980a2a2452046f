"""Absolutely summable sequences with exact term and tail oracles.

Every sequence is indexed from 1.  ``term(n)`` returns an :class:`Enclosure` of
``x(n)`` (degenerate for rational data) and ``tail_sum_abs(n)`` an enclosure of
``sum_{i>n} |x(i)|``.  ``tail_plus``/``tail_minus`` enclose the positive and
negative parts of the same tail; both are non-negative.

Concrete kinds:

* :class:`BlockMixture` -- ``x(kL + r + 1) = sum_j c[j][r] * rho_j**k``.  With
  ``L = 1`` this is an exponential mixture (geometric sequences included); with
  ``L > 1`` it covers the Guthrie-Nymann sequence and the Jones families.
* :class:`PowerMixture` -- ``x(n) = sum_j beta_j * n**(-p_j)`` with ``p_j > 1``.
* :class:`SpaceabilitySequence` -- ``sum_n t(n) x_n`` where ``x_n`` puts
  ``2**-j`` on the j-th element of the n-th set of a partition of the indices.
* :class:`Explicit` -- finitely many nonzero terms.
* :class:`Patched` -- a finite head followed by a (possibly shifted) base.
* :class:`Combined`, :class:`AbsOf` -- generic fallbacks with triangle-inequality
  tails; the classifier cannot certify these.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Callable, Iterable, Sequence as Seq

from mpmath import iv

from .numbers import Enclosure, default_precision, enclosure_to_json, iv_precision

SCAN_LIMIT = 100_000
"""Longest prefix summed term by term before falling back to coarse bounds."""

PROFILE_BACKSCAN = 5_000


class SequenceError(ValueError):
    """Invalid sequence data (bad ratio, duplicate exponent, length mismatch)."""


ZERO = Enclosure(0)


def _part(t: Enclosure, mode: str) -> Enclosure:
    if mode == "abs":
        return abs(t)
    if mode == "plus":
        return Enclosure(max(t.lo, 0), max(t.hi, 0))
    return Enclosure(max(-t.hi, 0), max(-t.lo, 0))


def _clamp(e: Enclosure) -> Enclosure:
    return Enclosure(max(e.lo, 0), max(e.hi, 0))


# ---------------------------------------------------------------------------
# dominance search


def first_certified(pred: Callable[[int], bool], start: int = 0, limit: int = 1 << 48) -> int | None:
    """Smallest-ish ``k >= start`` with ``pred(k)`` true, for eventually-true monotone ``pred``.

    ``pred`` must only answer True when the property is certified; any index
    returned is therefore a valid witness even if interval slop makes ``pred``
    non-monotone right at the threshold.
    """
    if pred(start):
        return start
    lo, step = start, 1
    hi = start + 1
    while not pred(hi):
        lo = hi
        step *= 2
        hi = start + step
        if hi > limit:
            return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _uniform_sign(coeffs: Seq[Enclosure]) -> int | None:
    signs = {c.sign() for c in coeffs if not (c.is_exact and c.lo == 0)}
    if len(signs) == 1:
        (s,) = signs
        return s
    return None


def exp_dominance(coeffs: Seq[Enclosure], ratios: Seq["Ratio"], prec: int) -> tuple[int, int] | None:
    """Eventual sign of ``g(k) = sum_j d_j rho_j**k`` over ``k >= 0``.

    Returns ``(sign, k0)`` such that ``sign(g(k)) == sign`` for every
    ``k >= k0`` (sign 0 means g vanishes identically), or None when the
    leading coefficient's sign cannot be decided.
    """
    pairs = [(c, r) for c, r in zip(coeffs, ratios) if not (c.is_exact and c.lo == 0)]
    if not pairs:
        return (0, 0)
    s = _uniform_sign([c for c, _ in pairs])
    if s is not None:
        return (s, 0)
    pairs.sort(key=lambda p: p[1].value.hi, reverse=True)
    lead, lead_ratio = pairs[0]
    s = lead.sign()
    if s is None:
        return None
    with iv_precision(prec + 32):
        a = abs(lead).to_iv()
        ra = lead_ratio.value.to_iv()
        rest = [(abs(c).to_iv(), r.value.to_iv()) for c, r in pairs[1:]]

        def pred(k: int) -> bool:
            lhs = a * ra ** k
            rhs = sum((c * r ** k for c, r in rest), iv.mpf(0))
            return bool(lhs.a > rhs.b)

        k0 = first_certified(pred, 0)
    if k0 is None:
        return None
    return (s, k0)


def pow_dominance(coeffs: Seq[Enclosure], exponents: Seq[Enclosure], prec: int) -> tuple[int, int] | None:
    """Eventual sign of ``g(t) = sum_j d_j t**(-e_j)`` for real ``t >= n0 >= 1``."""
    pairs = [(c, e) for c, e in zip(coeffs, exponents) if not (c.is_exact and c.lo == 0)]
    if not pairs:
        return (0, 1)
    s = _uniform_sign([c for c, _ in pairs])
    if s is not None:
        return (s, 1)
    pairs.sort(key=lambda p: p[1].lo)
    lead, lead_e = pairs[0]
    s = lead.sign()
    if s is None:
        return None
    with iv_precision(prec + 32):
        a = abs(lead).to_iv()
        ea = lead_e.to_iv()
        rest = [(abs(c).to_iv(), e.to_iv()) for c, e in pairs[1:]]

        def pred(n: int) -> bool:
            t = iv.mpf(n)
            lhs = a * t ** (-ea)
            rhs = sum((c * t ** (-e) for c, e in rest), iv.mpf(0))
            return bool(lhs.a > rhs.b)

        n0 = first_certified(pred, 1)
    if n0 is None:
        return None
    return (s, n0)


# ---------------------------------------------------------------------------
# ratios


@dataclass(frozen=True)
class Ratio:
    """A common ratio ``rho`` in (0, 1), optionally remembered as ``base**exponent``."""

    value: Enclosure
    base: Fraction | None = None
    exponent: Enclosure | None = None

    def __post_init__(self):
        if not (self.value.lo > 0 and self.value.hi < 1):
            raise SequenceError(f"ratio must lie in (0, 1), got {self.value!r}")

    @classmethod
    def rational(cls, q) -> "Ratio":
        return cls(Enclosure.of(Fraction(q)))

    @classmethod
    def power(cls, base, exponent, prec: int | None = None) -> "Ratio":
        base = Fraction(base)
        exponent = Enclosure.of(exponent)
        if not 0 < base < 1:
            raise SequenceError("base of q**r must lie in (0, 1)")
        if exponent.lo <= 0:
            raise SequenceError("exponent r of q**r must be positive")
        return cls(Enclosure.power(base, exponent, prec), base, exponent)

    def pow(self, m: int, prec: int) -> "Ratio":
        if self.value.is_exact:
            exp = None if self.exponent is None else self.exponent * m
            return Ratio(self.value ** m, self.base, exp)
        if self.base is not None:
            return Ratio(Enclosure.power(self.base, self.exponent * m, prec), self.base, self.exponent * m)
        with iv_precision(prec):
            return Ratio(Enclosure.from_iv(self.value.to_iv() ** m))

    def same_as(self, other: "Ratio") -> bool:
        if self.value.is_exact and other.value.is_exact:
            return self.value == other.value
        return self.base is not None and self.base == other.base and self.exponent == other.exponent

    def separated_from(self, other: "Ratio") -> bool:
        if not self.value.overlaps(other.value):
            return True
        if self.base is not None and self.base == other.base:
            return not self.exponent.overlaps(other.exponent)
        return False

    def to_json(self):
        if self.value.is_exact or self.base is None:
            return enclosure_to_json(self.value)
        return {"base": str(self.base), "exponent": enclosure_to_json(self.exponent),
                "value": enclosure_to_json(self.value)}


# ---------------------------------------------------------------------------
# profile and eventual form


@dataclass(frozen=True)
class SignProfile:
    """Certified eventual-sign facts.

    ``nonnegative_from = w`` means ``x(n) >= 0`` for all ``n >= w``;
    ``nonincreasing_from = w`` means ``|x(n)| >= |x(n+1)|`` for all ``n >= w``.
    None means not certified (never a false positive).
    """

    nonnegative_from: int | None
    nonincreasing_from: int | None

    @property
    def eventually_nonnegative(self) -> bool:
        return self.nonnegative_from is not None

    @property
    def eventually_nonincreasing(self) -> bool:
        return self.nonincreasing_from is not None

    def to_json(self) -> dict:
        return {
            "eventually_nonnegative": self.eventually_nonnegative,
            "nonnegative_from": self.nonnegative_from,
            "eventually_nonincreasing": self.eventually_nonincreasing,
            "nonincreasing_from": self.nonincreasing_from,
        }


@dataclass(frozen=True)
class EventualForm:
    """``x(p) == model.term(p - shift)`` for every ``p >= start``."""

    model: "Sequence"
    shift: int
    start: int


# ---------------------------------------------------------------------------
# base class


class Sequence:
    kind = "Combined"
    label: str | None = None

    def __init__(self, prec: int | None = None, label: str | None = None):
        self.prec = prec or default_precision()
        if label is not None:
            self.label = label

    # oracles ------------------------------------------------------------

    def term(self, n: int) -> Enclosure:
        raise NotImplementedError

    def terms(self, n: int) -> list[Enclosure]:
        return [self.term(i) for i in range(1, n + 1)]

    def tail_sum_abs(self, n: int) -> Enclosure:
        return self._tail(n, "abs")

    def tail_plus(self, n: int) -> Enclosure:
        return self._tail(n, "plus")

    def tail_minus(self, n: int) -> Enclosure:
        return self._tail(n, "minus")

    def _tail(self, n: int, mode: str) -> Enclosure:
        raise NotImplementedError

    def total(self) -> Enclosure:
        """Enclosure of the signed sum of the series."""
        return self.tail_plus(0) - self.tail_minus(0)

    def support_end(self) -> int | None:
        """Index of the last nonzero term for finitely supported sequences, else None."""
        return None

    @property
    def is_finitely_supported(self) -> bool:
        return self.support_end() is not None

    def eventual(self) -> EventualForm | None:
        return None

    # combinators ----------------------------------------------------------

    def scaled(self, c) -> "Sequence":
        return linear_combination([self], [Fraction(c)])

    def absolute(self) -> "Sequence":
        return AbsOf(self)

    def patched(self, head: Iterable, drop: int | None = None) -> "Sequence":
        """Replace the first ``drop`` terms by ``head`` (default: same count)."""
        head = tuple(Enclosure.of(v) for v in head)
        drop = len(head) if drop is None else drop
        if drop < 0:
            raise SequenceError("drop must be non-negative")
        if not head and drop == 0:
            return self
        return Patched._build(self, head, drop)

    def prepended(self, values: Iterable) -> "Sequence":
        return self.patched(values, 0)

    def __add__(self, other):
        return linear_combination([self, other], [1, 1])

    def __sub__(self, other):
        return linear_combination([self, other], [1, -1])

    def __neg__(self):
        return self.scaled(-1)

    # metadata -------------------------------------------------------------

    @cached_property
    def sign_profile(self) -> SignProfile:
        nonneg, noninc = self._profile_witnesses()
        if nonneg is not None:
            nonneg = self._backscan(nonneg, lambda n: self.term(n).lo >= 0)
        if noninc is not None:
            noninc = self._backscan(noninc, lambda n: abs(self.term(n)).lo >= abs(self.term(n + 1)).hi)
        return SignProfile(nonneg, noninc)

    def _profile_witnesses(self) -> tuple[int | None, int | None]:
        return (None, None)

    @staticmethod
    def _backscan(w: int, ok: Callable[[int], bool]) -> int:
        w = max(w, 1)
        floor = max(1, w - PROFILE_BACKSCAN)
        while w > floor and ok(w - 1):
            w -= 1
        return w

    def to_model(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        name = self.label or self.kind
        return f"<{type(self).__name__} {name}>"


# ---------------------------------------------------------------------------
# block mixtures


class BlockMixture(Sequence):
    """``x(kL + r + 1) = sum_j coeffs[j][r] * ratio_j**k`` for ``k >= 0``."""

    def __init__(self, period: int, components, label: str | None = None, prec: int | None = None):
        super().__init__(prec, label)
        if period < 1:
            raise SequenceError("period must be positive")
        comps = []
        for coeffs, ratio in components:
            coeffs = tuple(Enclosure.of(c) for c in coeffs)
            if len(coeffs) != period:
                raise SequenceError("coefficient block length differs from the period")
            if not isinstance(ratio, Ratio):
                ratio = Ratio.rational(ratio)
            if all(c.is_exact and c.lo == 0 for c in coeffs):
                continue
            comps.append((coeffs, ratio))
        comps.sort(key=lambda cr: cr[1].value.lo, reverse=True)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if not comps[i][1].separated_from(comps[j][1]):
                    raise SequenceError("component ratios are not provably distinct")
        self.period = period
        self.components = tuple(comps)
        self._powers: dict = {}

    @property
    def kind(self):
        return "ExponentialMixture" if self.period == 1 else "BlockPattern"

    def rho_pow(self, j: int, k: int) -> Enclosure:
        key = (j, k)
        hit = self._powers.get(key)
        if hit is None:
            rho = self.components[j][1].value
            if rho.is_exact:
                hit = Enclosure(rho.lo ** k)
            else:
                with iv_precision(self.prec):
                    hit = Enclosure.from_iv(rho.to_iv() ** k)
            if len(self._powers) < 50_000:
                self._powers[key] = hit
        return hit

    def term(self, n: int) -> Enclosure:
        if n < 1:
            raise ValueError("terms are indexed from 1")
        k, r = divmod(n - 1, self.period)
        acc = ZERO
        for j, (coeffs, _) in enumerate(self.components):
            acc = acc + coeffs[r] * self.rho_pow(j, k)
        return acc

    @cached_property
    def offset_signs(self) -> tuple[tuple[int, int], ...] | None:
        """Per offset r: ``(sign, k0)`` with the terms at offset r of sign ``sign`` for blocks ``k >= k0``."""
        ratios = [r for _, r in self.components]
        out = []
        for r in range(self.period):
            res = exp_dominance([c[r] for c, _ in self.components], ratios, self.prec)
            if res is None:
                return None
            out.append(res)
        return tuple(out)

    @cached_property
    def stable_block(self) -> int | None:
        signs = self.offset_signs
        if signs is None:
            return None
        return max(k for _, k in signs)

    def _weights(self, mode: str) -> list[int]:
        out = []
        for s, _ in self.offset_signs:
            if mode == "abs":
                out.append(s)
            elif mode == "plus":
                out.append(1 if s > 0 else 0)
            else:
                out.append(-1 if s < 0 else 0)
        return out

    def _tail(self, n: int, mode: str) -> Enclosure:
        if n < 0:
            raise ValueError("tail index must be non-negative")
        if self.offset_signs is None:
            return self._tail_bound(n)
        L = self.period
        start = max(n, self.stable_block * L)
        if start - n > SCAN_LIMIT:
            return self._tail_bound(n)
        acc = ZERO
        for i in range(n + 1, start + 1):
            acc = acc + _part(self.term(i), mode)
        w = self._weights(mode)
        k, r = divmod(start, L)
        for j, (coeffs, ratio) in enumerate(self.components):
            partial = sum((w[s] * coeffs[s] for s in range(r, L)), ZERO)
            full = sum((w[s] * coeffs[s] for s in range(L)), ZERO)
            acc = acc + partial * self.rho_pow(j, k)
            if not (full.is_exact and full.lo == 0):
                acc = acc + full * self.rho_pow(j, k + 1) / (1 - ratio.value)
        if not acc.is_exact:
            acc = acc.rounded(self.prec)
        return _clamp(acc)

    def _tail_bound(self, n: int) -> Enclosure:
        k = n // self.period
        upper = ZERO
        for j, (coeffs, ratio) in enumerate(self.components):
            big = max(abs(c).hi for c in coeffs)
            upper = upper + self.period * big * self.rho_pow(j, k) / (1 - ratio.value)
        return Enclosure(0, upper.hi)

    @cached_property
    def monotone_pairs(self) -> tuple[int, ...] | None:
        """Per offset r: block index from which ``|x(kL+r+1)| >= |x(kL+r+2)|`` holds.

        Only meaningful once signs have stabilized; None when some pair is
        eventually increasing or undecidable.
        """
        signs = self.offset_signs
        if signs is None:
            return None
        L = self.period
        ratios = [r for _, r in self.components]
        out = []
        for r in range(L):
            res = exp_dominance(self.pair_coefficients(r), ratios, self.prec)
            if res is None or res[0] < 0:
                return None
            out.append(res[1])
        return tuple(out)

    def pair_coefficients(self, r: int) -> list[Enclosure]:
        """Coefficients of ``|x(kL+r+1)| - |x(kL+r+2)|`` as a sum over components."""
        signs = self.offset_signs
        L = self.period
        s_r = signs[r][0]
        if r < L - 1:
            s_n = signs[r + 1][0]
            return [s_r * c[r] - s_n * c[r + 1] for c, _ in self.components]
        s_n = signs[0][0]
        return [s_r * c[L - 1] - s_n * c[0] * rho.value for c, rho in self.components]

    def _profile_witnesses(self):
        signs = self.offset_signs
        if signs is None:
            return (None, None)
        L = self.period
        nonneg = self.stable_block * L + 1 if all(s >= 0 for s, _ in signs) else None
        pairs = self.monotone_pairs
        if pairs is None:
            return (nonneg, None)
        witness = max(max(K, self.stable_block) * L + r + 1 for r, K in enumerate(pairs))
        return (nonneg, witness)

    def absolute(self) -> Sequence:
        signs = self.offset_signs
        if signs is None:
            return AbsOf(self)
        L = self.period
        head_len = self.stable_block * L
        flipped = BlockMixture(
            L,
            [(tuple(s * c for (s, _), c in zip(signs, coeffs)), ratio) for coeffs, ratio in self.components],
            label=self.label, prec=self.prec,
        )
        if head_len == 0:
            return flipped
        return Patched(flipped, tuple(abs(t) for t in self.terms(head_len)), head_len)

    def eventual(self) -> EventualForm:
        return EventualForm(self, 0, 1)

    def to_model(self) -> dict:
        return {
            "type": "block",
            "period": self.period,
            "components": [
                {"coeffs": [enclosure_to_json(c) for c in coeffs], "ratio": ratio.to_json()}
                for coeffs, ratio in self.components
            ],
        }


# ---------------------------------------------------------------------------
# power mixtures


def _zeta_tail(p: Enclosure, m: int, prec: int) -> Enclosure:
    """Enclosure of ``sum_{k>m} k**-p`` from the integral sandwich."""
    if m == 0:
        return 1 + _zeta_tail(p, 1, prec)
    if p.is_exact and p.lo.denominator == 1:
        e = int(p.lo)
        return Enclosure(Fraction(1, (e - 1) * (m + 1) ** (e - 1)), Fraction(1, (e - 1) * m ** (e - 1)))
    with iv_precision(prec):
        P = p.to_iv()
        lower = Enclosure.from_iv(iv.mpf(m + 1) ** (1 - P) / (P - 1))
        upper = Enclosure.from_iv(iv.mpf(m) ** (1 - P) / (P - 1))
    return Enclosure(lower.lo, upper.hi)


class PowerMixture(Sequence):
    """``x(n) = sum_j betas[j] * n**(-exponents[j])`` with every exponent above 1."""

    kind = "PowerMixture"

    def __init__(self, betas, exponents, label: str | None = None, prec: int | None = None):
        super().__init__(prec, label)
        betas = [Enclosure.of(b) for b in betas]
        exponents = [Enclosure.of(p) for p in exponents]
        if len(betas) != len(exponents):
            raise SequenceError("betas and exponents differ in length")
        pairs = [(b, p) for b, p in zip(betas, exponents) if not (b.is_exact and b.lo == 0)]
        for _, p in pairs:
            if p.lo <= 1:
                raise SequenceError("power exponents must exceed 1")
        pairs.sort(key=lambda bp: bp[1].lo)
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                if pairs[i][1].overlaps(pairs[j][1]):
                    raise SequenceError("power exponents are not provably distinct")
        self.betas = tuple(b for b, _ in pairs)
        self.exponents = tuple(p for _, p in pairs)

    def _npow(self, n: int, p: Enclosure) -> Enclosure:
        if p.is_exact and p.lo.denominator == 1:
            return Enclosure(Fraction(1, n ** int(p.lo)))
        return Enclosure.power(n, -p, self.prec)

    def term(self, n: int) -> Enclosure:
        if n < 1:
            raise ValueError("terms are indexed from 1")
        return sum((b * self._npow(n, p) for b, p in zip(self.betas, self.exponents)), ZERO)

    @cached_property
    def stabilization(self) -> tuple[int, int] | None:
        """``(sign, n0)``: ``sign(x(n)) == sign`` for every real ``n >= n0``."""
        return pow_dominance(self.betas, self.exponents, self.prec)

    def _tail(self, n: int, mode: str) -> Enclosure:
        if n < 0:
            raise ValueError("tail index must be non-negative")
        stab = self.stabilization
        if stab is None or stab[1] - 1 - n > SCAN_LIMIT:
            return self._tail_bound(n, mode)
        s, n0 = stab
        start = max(n, n0 - 1)
        acc = ZERO
        for i in range(n + 1, start + 1):
            acc = acc + _part(self.term(i), mode)
        w = {"abs": s, "plus": 1 if s > 0 else 0, "minus": -1 if s < 0 else 0}[mode]
        if w:
            for b, p in zip(self.betas, self.exponents):
                acc = acc + w * b * _zeta_tail(p, start, self.prec)
        if not acc.is_exact:
            acc = acc.rounded(self.prec)
        return _clamp(acc)

    def _tail_bound(self, n: int, mode: str) -> Enclosure:
        upper = sum((abs(b) * _zeta_tail(p, n, self.prec) for b, p in zip(self.betas, self.exponents)), ZERO)
        lower = Fraction(0)
        if mode == "abs" and self.betas:
            lower = abs(self.betas[0]).lo * _zeta_tail(self.exponents[0], n, self.prec).lo
            for b, p in zip(self.betas[1:], self.exponents[1:]):
                lower -= abs(b).hi * _zeta_tail(p, n, self.prec).hi
        return Enclosure(max(lower, 0), upper.hi)

    @cached_property
    def slope_stabilization(self) -> tuple[int, int] | None:
        """Eventual sign and start of ``sum_j beta_j p_j t**-(p_j+1)`` (minus the derivative)."""
        return pow_dominance([b * p for b, p in zip(self.betas, self.exponents)],
                             [p + 1 for p in self.exponents], self.prec)

    def _profile_witnesses(self):
        stab = self.stabilization
        if stab is None:
            return (None, None)
        s, n0 = stab
        nonneg = n0 if s >= 0 else None
        slope = self.slope_stabilization
        if slope is None or slope[0] != s or s == 0:
            return (nonneg, None)
        return (nonneg, max(n0, slope[1]))

    def absolute(self) -> Sequence:
        stab = self.stabilization
        if stab is None:
            return AbsOf(self)
        s, n0 = stab
        flipped = PowerMixture([s * b for b in self.betas], self.exponents, label=self.label, prec=self.prec)
        if n0 <= 1:
            return flipped
        return Patched(flipped, tuple(abs(t) for t in self.terms(n0 - 1)), n0 - 1)

    def eventual(self) -> EventualForm:
        return EventualForm(self, 0, 1)

    def to_model(self) -> dict:
        return {
            "type": "power",
            "betas": [enclosure_to_json(b) for b in self.betas],
            "exponents": [enclosure_to_json(p) for p in self.exponents],
        }


# ---------------------------------------------------------------------------
# spaceability construction


class Partition:
    """A partition of the positive integers into sets ``A_1, A_2, ...``."""

    name = "partition"

    def locate(self, i: int) -> tuple[int, int]:
        """``(n, j)`` with ``i`` the j-th smallest element of ``A_n``."""
        raise NotImplementedError

    def position(self, n: int, j: int) -> int:
        raise NotImplementedError

    def count(self, n: int, N: int) -> int:
        """Number of elements of ``A_n`` that are ``<= N``."""
        raise NotImplementedError

    def check_support(self, m: int) -> None:
        pass


class DyadicPartition(Partition):
    """``A_n = {2**(n-1) * (2j - 1) : j >= 1}`` -- infinitely many infinite sets."""

    name = "dyadic"

    def locate(self, i):
        v = (i & -i).bit_length() - 1
        return v + 1, ((i >> v) + 1) // 2

    def position(self, n, j):
        return (2 * j - 1) << (n - 1)

    def count(self, n, N):
        return ((N >> (n - 1)) + 1) // 2


class ResiduePartition(Partition):
    """``A_n = {n + (j-1) m}`` for ``n <= m``: m interleaved progressions."""

    def __init__(self, modulus: int):
        if modulus < 1:
            raise SequenceError("residue partition needs a positive modulus")
        self.modulus = modulus
        self.name = f"residue:{modulus}"

    def locate(self, i):
        n = (i - 1) % self.modulus + 1
        return n, (i - 1) // self.modulus + 1

    def position(self, n, j):
        return n + (j - 1) * self.modulus

    def count(self, n, N):
        if N < n:
            return 0
        return (N - n) // self.modulus + 1

    def check_support(self, m):
        if m > self.modulus:
            raise SequenceError(f"partition {self.name} has only {self.modulus} sets, t needs {m}")


def parse_partition(name: str) -> Partition:
    if name == "dyadic":
        return DyadicPartition()
    if name.startswith("residue:"):
        return ResiduePartition(int(name.split(":", 1)[1]))
    raise SequenceError(f"unknown partition {name!r}")


class SpaceabilitySequence(Sequence):
    """``y = sum_n t(n) x_n`` with ``x_n(k_n^j) = 2**-j`` on the n-th partition set."""

    kind = "Combined"

    def __init__(self, t, partition: Partition | str = "dyadic", label: str | None = "spaceability",
                 prec: int | None = None):
        super().__init__(prec, label)
        t = [Fraction(v) for v in t]
        while t and t[-1] == 0:
            t.pop()
        if isinstance(partition, str):
            partition = parse_partition(partition)
        partition.check_support(len(t))
        self.t = tuple(t)
        self.partition = partition

    def term(self, i: int) -> Enclosure:
        if i < 1:
            raise ValueError("terms are indexed from 1")
        n, j = self.partition.locate(i)
        if n > len(self.t):
            return ZERO
        return Enclosure(self.t[n - 1] / (1 << j))

    def _tail(self, N: int, mode: str) -> Enclosure:
        acc = Fraction(0)
        for n, tn in enumerate(self.t, start=1):
            if (mode == "plus" and tn <= 0) or (mode == "minus" and tn >= 0):
                continue
            acc += abs(tn) / (1 << self.partition.count(n, N))
        return Enclosure(acc)

    def support_end(self):
        return 0 if not self.t else None

    def _profile_witnesses(self):
        nonneg = 1 if all(v >= 0 for v in self.t) else None
        return (nonneg, None)

    def absolute(self):
        return SpaceabilitySequence([abs(v) for v in self.t], self.partition, self.label, self.prec)

    def eventual(self) -> EventualForm:
        return EventualForm(self, 0, 1)

    def to_model(self) -> dict:
        return {"type": "sparse", "t": [str(v) for v in self.t], "partition": self.partition.name}


# ---------------------------------------------------------------------------
# finite and wrapped sequences


class Explicit(Sequence):
    """Finitely many terms followed by zeros (an element of c00)."""

    kind = "ExplicitFinite"

    def __init__(self, terms, label: str | None = None, prec: int | None = None):
        super().__init__(prec, label)
        values = [Enclosure.of(v) for v in terms]
        while values and values[-1].is_exact and values[-1].lo == 0:
            values.pop()
        self.values = tuple(values)

    def term(self, n):
        if n < 1:
            raise ValueError("terms are indexed from 1")
        return self.values[n - 1] if n <= len(self.values) else ZERO

    def _tail(self, n, mode):
        return sum((_part(v, mode) for v in self.values[n:]), ZERO)

    def support_end(self):
        return len(self.values)

    def _profile_witnesses(self):
        end = len(self.values) + 1
        return (end, end)

    def absolute(self):
        return Explicit([abs(v) for v in self.values], self.label, self.prec)

    def to_model(self):
        return {"type": "explicit", "terms": [enclosure_to_json(v) for v in self.values]}


class Patched(Sequence):
    """``head`` followed by ``base.term(drop + 1), base.term(drop + 2), ...``."""

    def __init__(self, base: Sequence, head: tuple[Enclosure, ...], drop: int):
        super().__init__(base.prec, base.label)
        self.base = base
        self.head = tuple(head)
        self.drop = drop

    @property
    def kind(self):
        return "Combined"

    @classmethod
    def _build(cls, seq: Sequence, head, drop) -> Sequence:
        if isinstance(seq, Explicit):
            return Explicit(list(head) + list(seq.values[drop:]), seq.label, seq.prec)
        if isinstance(seq, Patched):
            h = len(seq.head)
            if drop >= h:
                return cls(seq.base, head, drop - h + seq.drop)
            return cls(seq.base, tuple(head) + seq.head[drop:], seq.drop)
        return cls(seq, head, drop)

    @property
    def shift(self) -> int:
        return len(self.head) - self.drop

    def term(self, n):
        if n < 1:
            raise ValueError("terms are indexed from 1")
        if n <= len(self.head):
            return self.head[n - 1]
        return self.base.term(n - self.shift)

    def _tail(self, n, mode):
        h = len(self.head)
        if n >= h:
            return self.base._tail(n - self.shift, mode)
        acc = sum((_part(v, mode) for v in self.head[n:]), ZERO)
        return acc + self.base._tail(self.drop, mode)

    def support_end(self):
        end = self.base.support_end()
        if end is None:
            return None
        last = max((i + 1 for i, v in enumerate(self.head) if not (v.is_exact and v.lo == 0)), default=0)
        return max(last, end + self.shift) if end > self.drop else last

    def _profile_witnesses(self):
        prof = self.base.sign_profile
        h = len(self.head)

        def lift(w):
            return None if w is None else max(w + self.shift, h + 1)

        return (lift(prof.nonnegative_from), lift(prof.nonincreasing_from))

    def scaled(self, c):
        c = Fraction(c)
        return Patched._build(self.base.scaled(c), tuple(c * v for v in self.head), self.drop)

    def absolute(self):
        return self.base.absolute().patched([abs(v) for v in self.head], self.drop)

    def eventual(self) -> EventualForm | None:
        inner = self.base.eventual()
        if inner is None:
            return None
        return EventualForm(inner.model, self.shift + inner.shift,
                            max(len(self.head) + 1, inner.start + self.shift))

    def to_model(self):
        return {"type": "patched", "head": [enclosure_to_json(v) for v in self.head], "drop": self.drop,
                "base": self.base.to_model()}


class Combined(Sequence):
    """Generic ``sum_i beta_i x_i`` with triangle-inequality tails."""

    def __init__(self, seqs, betas, prec: int | None = None):
        super().__init__(prec or max(s.prec for s in seqs), "combined")
        self.parts = tuple(seqs)
        self.betas = tuple(Fraction(b) for b in betas)

    def term(self, n):
        return sum((b * s.term(n) for b, s in zip(self.betas, self.parts)), ZERO)

    def _tail(self, n, mode):
        upper = ZERO
        for b, s in zip(self.betas, self.parts):
            if mode == "abs":
                upper = upper + abs(b) * s.tail_sum_abs(n)
            elif (mode == "plus") == (b > 0):
                upper = upper + abs(b) * s.tail_plus(n)
            else:
                upper = upper + abs(b) * s.tail_minus(n)
        return Enclosure(0, upper.hi)

    def support_end(self):
        ends = [s.support_end() for s in self.parts]
        if any(e is None for e in ends):
            return None
        return max(ends, default=0)

    def to_model(self):
        return {"type": "combined", "betas": [str(b) for b in self.betas],
                "parts": [s.to_model() for s in self.parts]}


class AbsOf(Sequence):
    """``|x|`` when the sign pattern of x cannot be resolved structurally."""

    def __init__(self, seq: Sequence):
        super().__init__(seq.prec, seq.label)
        self.seq = seq

    def term(self, n):
        return abs(self.seq.term(n))

    def _tail(self, n, mode):
        return ZERO if mode == "minus" else self.seq.tail_sum_abs(n)

    def support_end(self):
        return self.seq.support_end()

    def _profile_witnesses(self):
        return (1, None)

    def absolute(self):
        return self

    def to_model(self):
        return {"type": "abs", "of": self.seq.to_model()}


def zero_sequence(prec: int | None = None) -> Explicit:
    return Explicit((), prec=prec)


# ---------------------------------------------------------------------------
# linear algebra on sequences


def _unwrap(seq: Sequence):
    if isinstance(seq, Patched):
        return seq.base, len(seq.head), seq.drop
    return seq, 0, 0


def _expand(coeffs, ratio: Ratio, L0: int, L: int, prec: int):
    m = L // L0
    powers = [Enclosure(1)] + [ratio.pow(a, prec).value for a in range(1, m)]
    new = tuple(coeffs[s % L0] * powers[s // L0] for s in range(L))
    return new, ratio.pow(m, prec)


def _combine_blocks(bases, betas, prec) -> Sequence:
    L = reduce(math.lcm, (b.period for b in bases), 1)
    merged: list[list] = []
    for beta, base in zip(betas, bases):
        for coeffs, ratio in base.components:
            coeffs, ratio = _expand(coeffs, ratio, base.period, L, prec)
            coeffs = [beta * c for c in coeffs]
            for entry in merged:
                if entry[1].same_as(ratio):
                    entry[0] = [a + b for a, b in zip(entry[0], coeffs)]
                    break
            else:
                merged.append([coeffs, ratio])
    comps = [(tuple(c), r) for c, r in merged]
    comps = [(c, r) for c, r in comps if not all(v.is_exact and v.lo == 0 for v in c)]
    if not comps:
        return zero_sequence(prec)
    labels = {b.label for b in bases}
    label = labels.pop() if len(labels) == 1 and len(bases) == 1 else None
    return BlockMixture(L, comps, label=label, prec=prec)


def _combine_powers(bases, betas, prec) -> Sequence:
    acc: list[list] = []
    for beta, base in zip(betas, bases):
        for b, p in zip(base.betas, base.exponents):
            for entry in acc:
                if entry[1] == p:
                    entry[0] = entry[0] + beta * b
                    break
            else:
                acc.append([beta * b, p])
    acc = [(b, p) for b, p in acc if not (b.is_exact and b.lo == 0)]
    if not acc:
        return zero_sequence(prec)
    label = bases[0].label if len(bases) == 1 else None
    return PowerMixture([b for b, _ in acc], [p for _, p in acc], label=label, prec=prec)


def _combine_sparse(bases, betas, prec) -> Sequence:
    m = max(len(b.t) for b in bases)
    t = [Fraction(0)] * m
    for beta, base in zip(betas, bases):
        for i, v in enumerate(base.t):
            t[i] += beta * v
    return SpaceabilitySequence(t, bases[0].partition, prec=prec)


def linear_combination(seqs: Seq[Sequence], betas: Seq) -> Sequence:
    """Pointwise ``sum_i betas[i] * seqs[i]``; structured kinds stay structured."""
    if not seqs:
        raise SequenceError("linear combination of no sequences")
    if len(seqs) != len(betas):
        raise SequenceError("sequences and coefficients differ in length")
    betas = [Fraction(b) for b in betas]
    prec = max(s.prec for s in seqs)
    items = [(b, s) for b, s in zip(betas, seqs) if b != 0]
    if not items:
        return zero_sequence(prec)

    finite, infinite = [], []
    for b, s in items:
        base, h, drop = _unwrap(s)
        if isinstance(base, Explicit):
            finite.append((b, s))
        else:
            infinite.append((b, s, base, h, drop))

    H = max((len(s.values) for _, s in finite if isinstance(s, Explicit)), default=0)
    for _, s in finite:
        if isinstance(s, Patched):
            H = max(H, len(s.head), s.support_end() or 0)

    if not infinite:
        end = max((s.support_end() or 0 for _, s in items), default=0)
        return Explicit([sum((b * s.term(n) for b, s in items), ZERO) for n in range(1, end + 1)], prec=prec)

    shifts = {h - drop for _, _, _, h, drop in infinite}
    bases = [base for _, _, base, _, _ in infinite]
    bbetas = [b for b, *_ in infinite]
    kinds = {type(base) for base in bases}
    combinable = len(shifts) == 1 and len(kinds) == 1 and kinds.pop() in (BlockMixture, PowerMixture,
                                                                          SpaceabilitySequence)
    if combinable and isinstance(bases[0], SpaceabilitySequence):
        combinable = len({b.partition.name for b in bases}) == 1
    if not combinable:
        return Combined([s for _, s in items], [b for b, _ in items], prec)

    if isinstance(bases[0], BlockMixture):
        base = _combine_blocks(bases, bbetas, prec)
    elif isinstance(bases[0], PowerMixture):
        base = _combine_powers(bases, bbetas, prec)
    else:
        base = _combine_sparse(bases, bbetas, prec)

    (delta,) = shifts
    H = max([H] + [h for *_, h, _ in infinite])
    if H == 0:
        return base
    head = [sum((b * s.term(n) for b, s in items), ZERO) for n in range(1, H + 1)]
    return Patched._build(base, tuple(head), H - delta)


def power_product(seqs: Seq[Sequence], exponents: Seq[int]) -> Sequence:
    """Pointwise monomial ``prod_i seqs[i] ** exponents[i]`` of single-component generators."""
    if not seqs:
        raise SequenceError("empty monomial")
    if len(seqs) != len(exponents):
        raise SequenceError("sequences and exponents differ in length")
    if any(not isinstance(k, int) or k < 1 for k in exponents):
        raise SequenceError("monomial exponents must be positive integers")
    prec = max(s.prec for s in seqs)
    if all(isinstance(s, BlockMixture) and s.period == 1 and len(s.components) == 1 for s in seqs):
        coeff = Enclosure(1)
        value = Enclosure(1)
        bases = {s.components[0][1].base for s in seqs}
        exp_total = Enclosure(0)
        for s, k in zip(seqs, exponents):
            (c,), ratio = s.components[0]
            beta = c / ratio.value
            coeff = coeff * beta ** k
            value = value * ratio.value ** k
            if ratio.exponent is not None:
                exp_total = exp_total + k * ratio.exponent
        if len(bases) == 1 and None not in bases:
            (base,) = bases
            ratio = Ratio(Enclosure.power(base, exp_total, prec), base, exp_total)
        else:
            ratio = Ratio(value.rounded(prec) if not value.is_exact else value)
        return BlockMixture(1, [((coeff * ratio.value,), ratio)], label="monomial", prec=prec)
    if all(isinstance(s, PowerMixture) and len(s.betas) == 1 for s in seqs):
        coeff = Enclosure(1)
        p = Enclosure(0)
        for s, k in zip(seqs, exponents):
            coeff = coeff * s.betas[0] ** k
            p = p + k * s.exponents[0]
        return PowerMixture([coeff], [p], label="monomial", prec=prec)
    raise SequenceError("power_product needs single-component generators of one kind")


def derived_exponent(seq: Sequence) -> Enclosure:
    """The exponent of a monomial: ``r`` for ``q**(r n)`` or ``p`` for ``n**-p``."""
    if isinstance(seq, BlockMixture) and len(seq.components) == 1:
        ratio = seq.components[0][1]
        if ratio.exponent is None:
            raise SequenceError("ratio was not built as base**exponent")
        return ratio.exponent
    if isinstance(seq, PowerMixture) and len(seq.exponents) == 1:
        return seq.exponents[0]
    raise SequenceError("not a monomial")


def polynomial(generators: Seq[Sequence], betas: Seq, rows: Seq[Seq[int]]):
    """``sum_i betas[i] * prod_l generators[l] ** rows[i][l]``.

    Returns the sequence and the derived exponent of every monomial.  Raises
    :class:`SequenceError` when two derived exponents cannot be separated,
    since the mixture arguments rely on their distinctness.
    """
    if len(betas) != len(rows):
        raise SequenceError("one coefficient per exponent row")
    monomials, derived = [], []
    for row in rows:
        if len(row) != len(generators) or not any(row) or any(k < 0 for k in row):
            raise SequenceError("exponent rows must be nonzero and match the generators")
        used = [(g, k) for g, k in zip(generators, row) if k]
        mono = power_product([g for g, _ in used], [k for _, k in used])
        monomials.append(mono)
        derived.append(derived_exponent(mono))
    for i in range(len(derived)):
        for j in range(i + 1, len(derived)):
            if derived[i].overlaps(derived[j]):
                raise SequenceError(f"derived exponents {i} and {j} are not provably distinct")
    return linear_combination(monomials, betas), derived
