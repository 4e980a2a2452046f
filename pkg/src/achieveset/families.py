"""Sequence families with known achievement-set behaviour, and their verifiers."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence as Seq

from .compactset import IntervalUnion
from .numbers import Enclosure, enclosure_from_json, enclosure_to_json, format_rational, parse_rational
from .sequences import (
    BlockMixture,
    Explicit,
    PowerMixture,
    Ratio,
    Sequence,
    SequenceError,
    SpaceabilitySequence,
    exp_dominance,
    linear_combination,
    parse_partition,
    polynomial,
)
from .subsum import approximate, subsums_of, t_minus, t_plus

JONES_RANGE = (Fraction(1, 6), Fraction(2, 11))


class FamilyError(ValueError):
    pass


def _q(q) -> Fraction:
    q = parse_rational(q) if not isinstance(q, Fraction) else q
    if not 0 < q < 1:
        raise FamilyError(f"q must lie in (0, 1), got {q}")
    return q


# ---------------------------------------------------------------------------
# generators


def geometric(q) -> BlockMixture:
    q = _q(q)
    return BlockMixture(1, [((q,), Ratio.power(q, 1))], label=f"geometric({q})")


def exp_generator(q, r, prec: int | None = None) -> BlockMixture:
    """``x(n) = q**(r n)``; r may be an :class:`Enclosure` for irrational exponents."""
    rho = Ratio.power(_q(q), r, prec)
    return BlockMixture(1, [((rho.value,), rho)], label="exp-generator", prec=prec)


def power_generator(p, prec: int | None = None) -> PowerMixture:
    """``x(n) = n**-p``."""
    return PowerMixture([1], [p], label="power-generator", prec=prec)


def guthrie_nymann() -> BlockMixture:
    """3/4, 2/4, 3/16, 2/16, 3/64, ...: odd places 3/4**k, even places 2/4**k."""
    return BlockMixture(2, [((Fraction(3, 4), Fraction(1, 2)), Fraction(1, 4))], label="guthrie-nymann")


def jones_x(q) -> BlockMixture:
    """Blocks (4, 3, 2) * q**k for k = 0, 1, 2, ..."""
    q = _q(q)
    return BlockMixture(3, [((4, 3, 2), q)], label=f"jones-x({q})")


def jones_y(q) -> BlockMixture:
    """Blocks (1, 1, 1, 1, 1) * q**k for k = 0, 1, 2, ..."""
    q = _q(q)
    return BlockMixture(5, [((1, 1, 1, 1, 1), q)], label=f"jones-y({q})")


def _pairs(betas, qs):
    betas = [parse_rational(b) if not isinstance(b, Fraction) else b for b in betas]
    qs = [_q(q) for q in qs]
    if not betas or len(betas) != len(qs):
        raise FamilyError("betas and qs must be nonempty and of equal length")
    return betas, qs


def jones_x_combination(betas, qs) -> Sequence:
    betas, qs = _pairs(betas, qs)
    return linear_combination([jones_x(q) for q in qs], betas)


def jones_y_combination(betas, qs) -> Sequence:
    betas, qs = _pairs(betas, qs)
    return linear_combination([jones_y(q) for q in qs], betas)


def _ratio_from(obj, prec) -> Ratio:
    if isinstance(obj, Ratio):
        return obj
    if isinstance(obj, Enclosure):
        return Ratio(obj)
    if isinstance(obj, dict):
        return Ratio.power(parse_rational(obj["base"]), enclosure_from_json(obj["exponent"]), prec)
    return Ratio.rational(parse_rational(obj) if isinstance(obj, str) else obj)


def exp_mixture(betas, ratios, prec: int | None = None) -> BlockMixture:
    """``x(n) = sum_i betas[i] * ratios[i]**n``; ratios must be provably distinct."""
    if not betas or len(betas) != len(ratios):
        raise FamilyError("betas and ratios must be nonempty and of equal length")
    rs = [_ratio_from(r, prec) for r in ratios]
    for a, b in combinations(rs, 2):
        if not a.separated_from(b):
            raise FamilyError("ratios are not provably distinct")
    comps = [((Enclosure.of(parse_rational(b) if isinstance(b, str) else b) * r.value,), r)
             for b, r in zip(betas, rs)]
    try:
        return BlockMixture(1, comps, label="exp-mixture", prec=prec)
    except SequenceError as exc:
        raise FamilyError(str(exc)) from exc


def pow_mixture(betas, exponents, prec: int | None = None) -> PowerMixture:
    """``x(n) = sum_i betas[i] * n**-exponents[i]`` with distinct exponents above 1."""
    if not betas or len(betas) != len(exponents):
        raise FamilyError("betas and exponents must be nonempty and of equal length")
    exps = [enclosure_from_json(p) if isinstance(p, (str, dict)) else Enclosure.of(p) for p in exponents]
    for a, b in combinations(exps, 2):
        if a.overlaps(b):
            raise FamilyError("exponents are not provably distinct")
    try:
        return PowerMixture([parse_rational(b) if isinstance(b, str) else b for b in betas], exps,
                            label="pow-mixture", prec=prec)
    except SequenceError as exc:
        raise FamilyError(str(exc)) from exc


# ---------------------------------------------------------------------------
# the two Jones inequalities


@dataclass(frozen=True)
class InequalityRow:
    n: int
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"n": self.n, "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs), "holds": self.holds}


@dataclass(frozen=True)
class InequalityReport:
    name: str
    rows: tuple[InequalityRow, ...]
    limit_ratio: Fraction
    limit_holds: bool
    holds_for_all: bool
    eventually_from: int | None

    @property
    def all_rows_hold(self) -> bool:
        return all(r.holds for r in self.rows)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "limit_ratio": format_rational(self.limit_ratio),
            "limit_holds": self.limit_holds,
            "holds_for_all": self.holds_for_all,
            "eventually_from": self.eventually_from,
            "rows": [r.to_json() for r in self.rows],
        }


class _GeomSum:
    """``g(n) = sum_i beta_i q_i**n`` with exact tails of ``|g|``."""

    def __init__(self, betas, qs):
        self.betas, self.qs = _pairs(betas, qs)
        if any(a <= b for a, b in zip(self.qs, self.qs[1:])):
            raise FamilyError("qs must be strictly decreasing")
        ratios = [Ratio.rational(q) for q in self.qs]
        res = exp_dominance([Enclosure(b) for b in self.betas], ratios, 128)
        if res is None or res[0] == 0:
            raise FamilyError("the combination vanishes identically")
        self.sign, self.stable = res
        self.ratios = ratios

    def value(self, n: int) -> Fraction:
        return sum(b * q ** n for b, q in zip(self.betas, self.qs))

    def tail_abs(self, n: int) -> Fraction:
        """``sum_{k>n} |g(k)|``."""
        edge = max(n, self.stable - 1)
        acc = sum(abs(self.value(k)) for k in range(n + 1, edge + 1))
        return acc + self.sign * sum(b * q ** (edge + 1) / (1 - q) for b, q in zip(self.betas, self.qs))

    def lead(self) -> Fraction:
        return next(q for b, q in zip(self.betas, self.qs) if b != 0)


def _inequality(name, betas, qs, n_range, a: int, b: int, strict: bool) -> InequalityReport:
    """Compare ``a |g(n)|`` with ``b sum_{k>n} |g(k)|``."""
    g = _GeomSum(betas, qs)
    rows = []
    for n in n_range:
        lhs, rhs = a * abs(g.value(n)), b * g.tail_abs(n)
        rows.append(InequalityRow(n, lhs, rhs, lhs > rhs if strict else lhs <= rhs))
    q1 = g.lead()
    limit = Fraction(a, b) * (1 - q1) / q1
    limit_holds = limit > 1 if strict else limit <= 1
    # for n >= stable: a|g(n)| - b*tail = sign * sum_i beta_i q_i^n (a - b q_i/(1-q_i))
    coeffs = [Enclosure(beta * (a - b * q / (1 - q))) for beta, q in zip(g.betas, g.qs)]
    res = exp_dominance(coeffs, g.ratios, 128)
    start = min(n_range) if len(n_range) else 0
    eventually = None
    if res is not None:
        s = res[0] * g.sign
        good = s > 0 if strict else s <= 0
        if good:
            eventually = max(res[1], g.stable)
    holds_all = False
    if eventually is not None:
        holds_all = True
        for n in range(start, eventually):
            lhs, rhs = a * abs(g.value(n)), b * g.tail_abs(n)
            if not (lhs > rhs if strict else lhs <= rhs):
                holds_all = False
                break
    return InequalityReport(name, tuple(rows), limit, limit_holds, holds_all, eventually)


def eq1_check(betas, qs, n_range=range(0, 51)) -> InequalityReport:
    """``2 |g(n)| > 9 sum_{k>n} |g(k)|`` with ``g(n) = sum beta_i q_i**n``."""
    return _inequality("eq1", betas, qs, n_range, 2, 9, strict=True)


def eq2_check(betas, qs, n_range=range(0, 51)) -> InequalityReport:
    """``|g(n)| <= 5 sum_{k>n} |g(k)|``."""
    return _inequality("eq2", betas, qs, n_range, 1, 5, strict=False)


# ---------------------------------------------------------------------------
# digit inclusion


def digit_table(parts=(4, 3, 2), targets=range(1, 8)) -> dict[int, tuple[int, ...] | None]:
    """A representation of each target as a sum of distinct parts, or None."""
    out = {}
    for v in targets:
        rep = None
        for k in range(1, len(parts) + 1):
            for combo in combinations(parts, k):
                if sum(combo) == v:
                    rep = combo
                    break
            if rep:
                break
        out[v] = rep
    return out


@dataclass(frozen=True)
class InclusionReport:
    digits_ok: bool
    table: dict
    blocks: int
    inner_inclusion: bool
    outer_inclusion: bool
    offset: Fraction

    @property
    def passed(self) -> bool:
        return self.digits_ok and self.inner_inclusion and self.outer_inclusion

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "digits_ok": self.digits_ok,
            "table": {str(k): (list(v) if v else None) for k, v in self.table.items()},
            "blocks": self.blocks,
            "inner_inclusion": self.inner_inclusion,
            "outer_inclusion": self.outer_inclusion,
            "offset": format_rational(self.offset),
        }


def inclusion_check(betas, qs, depth: int = 12) -> InclusionReport:
    """Check ``2 sum_k g(k) + E(y) ⊆ E(x)`` at finite depth.

    ``depth`` counts x-terms; the comparison uses ``m = depth // 3`` whole
    blocks, i.e. 3m terms of x against 5m terms of y, with the offset
    ``2 sum_{k<m} g(k)``. The inequalities need only hold eventually; the
    finite inclusion itself is block-by-block and holds for any signs.
    """
    e1 = eq1_check(betas, qs, range(0, 1))
    e2 = eq2_check(betas, qs, range(0, 1))
    if e1.eventually_from is None or e2.eventually_from is None:
        raise FamilyError("parameters do not eventually satisfy both inequalities")
    table = digit_table()
    digits_ok = all(table[v] is not None for v in range(2, 8)) and table[1] is None
    g = _GeomSum(betas, qs)
    m = max(depth // 3, 1)
    x = jones_x_combination(betas, qs)
    y = jones_y_combination(betas, qs)
    offset = 2 * sum(g.value(k) for k in range(m))
    shifted = approximate(y, 5 * m).inner.translate(offset)
    ax = approximate(x, 3 * m)
    return InclusionReport(digits_ok, table, m, ax.inner.contains(shifted), ax.outer.contains(shifted), offset)


# ---------------------------------------------------------------------------
# spaceability


def spaceability_sequence(k: int, partition="dyadic") -> SpaceabilitySequence:
    """The k-th basis vector: ``2**-j`` on the j-th element of the k-th partition set."""
    if k < 1:
        raise FamilyError("basis index starts at 1")
    try:
        return SpaceabilitySequence([0] * (k - 1) + [1], partition, label=f"basis({k})")
    except SequenceError as exc:
        raise FamilyError(str(exc)) from exc


def spaceability_combine(t, partition="dyadic") -> tuple[SpaceabilitySequence, IntervalUnion]:
    """``sum_n t(n) x_n`` and the predicted set ``[sum of negative t, sum of positive t]``."""
    t = [parse_rational(v) if not isinstance(v, Fraction) else v for v in t]
    if not any(t):
        raise FamilyError("the zero combination is excluded")
    try:
        seq = SpaceabilitySequence(t, partition)
    except SequenceError as exc:
        raise FamilyError(str(exc)) from exc
    lo = -sum(t_minus(v) for v in t)
    hi = sum(t_plus(v) for v in t)
    return seq, IntervalUnion([(lo, hi)])


# ---------------------------------------------------------------------------
# gliding hump


@dataclass(frozen=True)
class GlidingHump:
    sequence: Explicit
    predicted: tuple[Fraction, Fraction]
    bound: Fraction
    starts: tuple[int, ...]

    def to_json(self) -> dict:
        return {"predicted": [format_rational(v) for v in self.predicted], "bound": format_rational(self.bound),
                "starts": list(self.starts), "terms": [format_rational(v.lo) for v in self.sequence.values]}


def gliding_hump(blocks, epsilons, starts=None, tolerance=Fraction(0)) -> GlidingHump:
    """Assemble ``y = sum_k x_k / 2**(k-1)`` from explicit blocks.

    Block k occupies positions ``starts[k], starts[k]+1, ...`` (consecutive by
    default) and must have l1 norm ``1 + epsilons[k]`` within ``tolerance``.
    The predicted interval is the hull of the first block's subsums; every
    point of it should lie within ``(1+eps_K)/2**K + 2 eps_{K-1}`` of the
    subsums of y, K being the number of blocks.
    """
    blocks = [[parse_rational(v) if isinstance(v, str) else Fraction(v) for v in b] for b in blocks]
    eps = [parse_rational(e) if isinstance(e, str) else Fraction(e) for e in epsilons]
    if not blocks or len(blocks) != len(eps):
        raise FamilyError("one epsilon per block is required")
    if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
        raise FamilyError("epsilons must be positive and strictly decreasing")
    if starts is None:
        starts, pos = [], 1
        for b in blocks:
            starts.append(pos)
            pos += len(b)
    if len(starts) != len(blocks):
        raise FamilyError("one start position per block is required")
    supports = []
    for b, s in zip(blocks, starts):
        idx = [s + i for i, v in enumerate(b) if v != 0]
        if not idx:
            raise FamilyError("blocks must be nonzero")
        supports.append((min(idx), max(idx)))
    for (a_lo, a_hi), (b_lo, b_hi) in zip(supports, supports[1:]):
        if b_lo <= a_hi:
            raise FamilyError("block supports overlap or are out of order")
    for k, (b, e) in enumerate(zip(blocks, eps), start=1):
        norm = sum(abs(v) for v in b)
        if abs(norm - (1 + e)) > Fraction(tolerance):
            raise FamilyError(f"block {k} has norm {norm}, expected {1 + e}")
    length = max(s + len(b) - 1 for b, s in zip(blocks, starts))
    terms = [Fraction(0)] * length
    for k, (b, s) in enumerate(zip(blocks, starts)):
        for i, v in enumerate(b):
            terms[s - 1 + i] += v / 2 ** k
    first = blocks[0]
    predicted = (-sum(t_minus(v) for v in first), sum(t_plus(v) for v in first))
    K = len(blocks)
    bound = (1 + eps[-1]) / 2 ** K + (2 * eps[-2] if K > 1 else 0)
    return GlidingHump(Explicit(terms, label="gliding-hump"), predicted, bound, tuple(starts))


def hump_distance(hump: GlidingHump) -> Fraction:
    """``max_{t in predicted} dist(t, subsums of y)``, exactly."""
    inner = subsums_of(v.lo for v in hump.sequence.values)
    return IntervalUnion([hump.predicted]).directed_distance(inner)


# ---------------------------------------------------------------------------
# descriptors


def _rat(params, key):
    try:
        return parse_rational(params[key])
    except KeyError:
        raise FamilyError(f"field {key!r} is required") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FamilyError(f"field {key!r}: {exc}") from None


def _rats(params, key):
    if key not in params:
        raise FamilyError(f"field {key!r} is required")
    if not isinstance(params[key], list):
        raise FamilyError(f"field {key!r} must be a list")
    try:
        return [parse_rational(v) for v in params[key]]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FamilyError(f"field {key!r}: {exc}") from None


@dataclass(frozen=True)
class FamilySpec:
    """A JSON-serializable family descriptor: ``kind`` plus exact parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    KINDS = ("geometric", "exp-mixture", "pow-mixture", "guthrie-nymann", "jones-x", "jones-y",
             "jones-x-combination", "jones-y-combination", "spaceability", "gliding-hump", "explicit",
             "polynomial", "combination", "patched", "abs")

    @classmethod
    def from_json(cls, obj) -> "FamilySpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FamilyError("descriptor must be an object with a 'kind' field")
        kind = obj["kind"]
        if kind not in cls.KINDS:
            raise FamilyError(f"unknown kind {kind!r}")
        params = {k: v for k, v in obj.items() if k not in ("kind", "derived", "warnings")}
        spec = cls(kind, params)
        spec.build()
        return spec

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.params}

    def warnings(self) -> list[str]:
        out = []
        if self.kind in ("jones-x", "jones-y"):
            q = _rat(self.params, "q")
            if not JONES_RANGE[0] <= q < JONES_RANGE[1]:
                out.append("outside verified range [1/6,2/11)")
        if self.kind in ("jones-x-combination", "jones-y-combination"):
            if any(not JONES_RANGE[0] <= q < JONES_RANGE[1] for q in _rats(self.params, "qs")):
                out.append("outside verified range [1/6,2/11)")
        return out

    def build(self, prec: int | None = None) -> Sequence:
        p, k = self.params, self.kind
        try:
            if k == "geometric":
                return geometric(_rat(p, "q"))
            if k == "guthrie-nymann":
                return guthrie_nymann()
            if k == "jones-x":
                return jones_x(_rat(p, "q"))
            if k == "jones-y":
                return jones_y(_rat(p, "q"))
            if k == "jones-x-combination":
                return jones_x_combination(_rats(p, "betas"), _rats(p, "qs"))
            if k == "jones-y-combination":
                return jones_y_combination(_rats(p, "betas"), _rats(p, "qs"))
            if k == "exp-mixture":
                return exp_mixture(_rats(p, "betas"), p.get("ratios") or [], prec)
            if k == "pow-mixture":
                return pow_mixture(_rats(p, "betas"), p.get("exponents") or [], prec)
            if k == "spaceability":
                return spaceability_combine(_rats(p, "t"), p.get("partition", "dyadic"))[0]
            if k == "gliding-hump":
                return gliding_hump(p["blocks"], p["epsilons"]).sequence
            if k == "explicit":
                return Explicit(_rats(p, "terms"))
            if k == "polynomial":
                gens = [FamilySpec.from_json(g).build(prec) for g in p["generators"]]
                return polynomial(gens, _rats(p, "betas"), p["rows"])[0]
            if k == "combination":
                parts = p["terms"]
                seqs = [FamilySpec.from_json(t["spec"]).build(prec) for t in parts]
                return linear_combination(seqs, [parse_rational(t["beta"]) for t in parts])
            if k == "patched":
                base = FamilySpec.from_json(p["base"]).build(prec)
                return base.patched(_rats(p, "head"), p.get("drop"))
            if k == "abs":
                return FamilySpec.from_json(p["base"]).build(prec).absolute()
        except KeyError as exc:
            raise FamilyError(f"field {exc.args[0]!r} is required") from None
        except SequenceError as exc:
            raise FamilyError(str(exc)) from None
        raise FamilyError(f"unknown kind {k!r}")

    def describe(self, prec: int | None = None) -> dict:
        """Canonical descriptor with derived metadata."""
        seq = self.build(prec)
        total = seq.total()
        out = self.to_json()
        out["derived"] = {
            "total": enclosure_to_json(total.rounded(64) if not total.is_exact else total),
            "absolute_total": enclosure_to_json(seq.tail_sum_abs(0) if seq.tail_sum_abs(0).is_exact
                                                else seq.tail_sum_abs(0).rounded(64)),
            "kind": seq.kind,
            "sign_profile": seq.sign_profile.to_json(),
        }
        warnings = self.warnings()
        if warnings:
            out["warnings"] = warnings
        return out
