"""Certified classification of achievement sets.

Three sufficient tests are run, each producing a replayable certificate:

* Cantor-type: ``|x(n)| > T(n)`` for every ``n >= n0``, with ``T(n)`` the tail
  sum of absolute values after ``n``;
* finite union of intervals: ``|x(n)| <= T(n)`` for every ``n >= n0``;
* Cantorval: the set contains an interval, the strict inequality holds at
  infinitely many indices, and ``|x|`` is eventually nonincreasing.

Each "for every n" claim is split in two: an exact check over a finite range,
and a structural argument from the closed form of the sequence beyond it.
When no structural argument applies the verdict is ``Undetermined``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .compactset import IntervalUnion
from .numbers import Enclosure, enclosure_to_json, format_rational, iv_precision
from .sequences import (
    BlockMixture,
    EventualForm,
    PowerMixture,
    Sequence,
    SpaceabilitySequence,
    exp_dominance,
    first_certified,
)
from .subsum import approximate, subsums_of

from mpmath import iv

CANTOR = "CantorLike"
INTERVALS = "FiniteUnionOfIntervals"
CANTORVAL = "Cantorval"
UNDETERMINED = "Undetermined"
VERDICTS = (INTERVALS, CANTOR, CANTORVAL, UNDETERMINED)

DEFAULT_HORIZON = 200
DEFAULT_DEPTH = 16
DEFAULT_MIN_LENGTH = Fraction(1, 100)


class ClassificationError(ValueError):
    """The input lies outside the trichotomy (finitely many nonzero terms)."""


class PreconditionError(ValueError):
    """The Cantorval test was called on a sequence not known to be eventually monotone."""


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class KakeyaCert:
    n0: int
    verified_to: int
    continuation: dict
    variant = "kakeya"

    def to_json(self) -> dict:
        return {"type": self.variant, "n0": self.n0, "verified_to": self.verified_to,
                "continuation": self.continuation}


@dataclass(frozen=True)
class CantorCert(KakeyaCert):
    variant = "cantor"


@dataclass(frozen=True)
class IntervalCert(KakeyaCert):
    necessity: bool = False
    variant = "interval"

    def to_json(self) -> dict:
        out = super().to_json()
        out["necessary"] = self.necessity
        return out


@dataclass(frozen=True)
class CantorvalCert:
    interval: tuple[Fraction, Fraction]
    interval_evidence: dict
    infinite_indices: dict
    monotone: dict
    variant = "cantorval"

    @property
    def interval_length(self) -> Fraction:
        return self.interval[1] - self.interval[0]

    def to_json(self) -> dict:
        return {
            "type": self.variant,
            "interval": [format_rational(self.interval[0]), format_rational(self.interval[1])],
            "interval_evidence": self.interval_evidence,
            "infinite_indices": self.infinite_indices,
            "monotone": self.monotone,
        }


@dataclass(frozen=True)
class NoCertificate:
    reasons: tuple[str, ...] = ()
    variant = "none"

    def to_json(self) -> dict:
        return {"type": "none", "reasons": list(self.reasons)}


@dataclass(frozen=True)
class Classification:
    verdict: str
    certificate: object
    horizon: int
    depth: int
    model: dict | None = None
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "horizon": self.horizon, "depth": self.depth,
               "certificate": self.certificate.to_json()}
        if self.model is not None:
            out["model"] = self.model
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        return out


# ---------------------------------------------------------------------------
# structural continuation


def _lift(form: EventualForm, model_position: int) -> int:
    return max(form.start, model_position + form.shift)


def kakeya_coefficients(model: BlockMixture, r: int) -> list[Enclosure]:
    """Coefficients of ``|x(m)| - T(m)`` at offset r as an exponential sum in the block index.

    Valid for blocks at or beyond the model's sign-stable block.
    """
    signs = [s for s, _ in model.offset_signs]
    L = model.period
    out = []
    for coeffs, ratio in model.components:
        later = sum((signs[s] * coeffs[s] for s in range(r + 1, L)), Enclosure(0))
        block = sum((signs[s] * coeffs[s] for s in range(L)), Enclosure(0))
        out.append(signs[r] * coeffs[r] - later - block * ratio.value / (1 - ratio.value))
    return out


def _block_offsets(model: BlockMixture):
    if model.offset_signs is None:
        return None
    ratios = [r for _, r in model.components]
    out = []
    for r in range(model.period):
        res = exp_dominance(kakeya_coefficients(model, r), ratios, model.prec)
        if res is None:
            return None
        out.append(res)
    return out


def _power_interval_start(model: PowerMixture) -> int | None:
    """First n where ``sum |b_j| n^-p_j <= |b_1| Z_1 lower - sum_{j>1} |b_j| Z_j upper``.

    Once true it stays true (both sides scaled by ``n**(p_1-1)`` move monotonically).
    """
    if abs(model.betas[0]).lo == 0:
        return None
    with iv_precision(model.prec + 32):
        betas = [Enclosure(abs(b).hi).to_iv() for b in model.betas]
        lead = Enclosure(abs(model.betas[0]).lo).to_iv()
        ps = [p.to_iv() for p in model.exponents]

        def pred(n: int) -> bool:
            t = iv.mpf(n)
            lhs = sum((b * t ** (-p) for b, p in zip(betas, ps)), iv.mpf(0))
            rhs = lead / ((ps[0] - 1) * (t + 1) ** (ps[0] - 1))
            for b, p in zip(betas[1:], ps[1:]):
                rhs -= b / ((p - 1) * t ** (p - 1))
            return bool(lhs.b <= rhs.a)

        return first_certified(pred, 1)


def _continuation(seq: Sequence, strict: bool):
    """Structural part of a Kakeya certificate: ``(from_position, data)`` or a reason string."""
    form = seq.eventual()
    if form is None:
        return "no closed form for the tail"
    model = form.model
    if isinstance(model, BlockMixture):
        offs = _block_offsets(model)
        if offs is None:
            return "eventual signs of the term-minus-tail sums are undecidable"
        wanted = (lambda s: s > 0) if strict else (lambda s: s <= 0)
        bad = [r for r, (s, _) in enumerate(offs) if not wanted(s)]
        if bad:
            return f"offsets {bad} have the opposite eventual sign"
        L = model.period
        K = model.stable_block
        m_star = max(max(k, K) * L + r + 1 for r, (_, k) in enumerate(offs))
        data = {
            "route": "block-offsets",
            "shift": form.shift,
            "start": form.start,
            "signs": [[s, k] for s, k in model.offset_signs],
            "offsets": [[s, k] for s, k in offs],
            "from_position": _lift(form, m_star),
        }
        return data["from_position"], data
    if isinstance(model, PowerMixture):
        if strict:
            return "power tails decay too slowly for a Cantor-type set"
        n = _power_interval_start(model)
        if n is None:
            return "integral bound never dominates"
        data = {"route": "power-integral", "shift": form.shift, "start": form.start, "model_from": n,
                "from_position": _lift(form, n)}
        if model.stabilization is not None:
            data["sign"] = list(model.stabilization)
        return data["from_position"], data
    if isinstance(model, SpaceabilitySequence):
        if strict:
            return "each term equals the remaining mass of its class"
        data = {"route": "sparse-structural", "shift": form.shift, "start": form.start,
                "from_position": form.start}
        return form.start, data
    return "unsupported closed form"


def _kakeya_test(seq: Sequence, horizon: int, strict: bool):
    if seq.is_finitely_supported:
        return None, "finitely supported"
    res = _continuation(seq, strict)
    if isinstance(res, str):
        return None, res
    p_star, data = res

    def ok(n: int) -> bool:
        t = abs(seq.term(n))
        tail = seq.tail_sum_abs(n)
        return t.lo > tail.hi if strict else t.hi <= tail.lo

    n0 = p_star
    while n0 > 1 and ok(n0 - 1):
        n0 -= 1
    if n0 > horizon:
        return None, f"first certified index {n0} lies beyond the horizon {horizon}"
    verified_to = max(horizon, p_star - 1)
    for n in range(n0, verified_to + 1):
        if not ok(n):
            return None, f"exact check failed at n={n}"
    return (n0, verified_to, data), None


def kakeya_cantor_test(seq: Sequence, horizon: int = DEFAULT_HORIZON) -> CantorCert | None:
    """Certificate that ``|x(n)|`` strictly exceeds the tail for every ``n >= n0``."""
    found, _ = _kakeya_test(seq, horizon, strict=True)
    return None if found is None else CantorCert(*found)


def kakeya_interval_test(seq: Sequence, horizon: int = DEFAULT_HORIZON) -> IntervalCert | None:
    """Certificate that ``|x(n)|`` never exceeds the tail from ``n0`` on."""
    found, _ = _kakeya_test(seq, horizon, strict=False)
    if found is None:
        return None
    return IntervalCert(*found, necessity=seq.sign_profile.eventually_nonincreasing)


# ---------------------------------------------------------------------------
# Cantorval


def _first_full_block(form: EventualForm, L: int) -> int:
    """Smallest model block whose first position is at or beyond ``form.start``."""
    return max(0, -(-(form.start - form.shift - 1) // L))


def _monotone_evidence(seq: Sequence) -> dict | None:
    prof = seq.sign_profile
    if not prof.eventually_nonincreasing:
        return None
    out = {"from_position": prof.nonincreasing_from}
    form = seq.eventual()
    if form is None:
        out["route"] = "finite"
        return out
    model = form.model
    if isinstance(model, BlockMixture):
        K = model.stable_block
        pairs = model.monotone_pairs
        L = model.period
        out.update(route="block-pairs", signs=[[s, k] for s, k in model.offset_signs], pairs=list(pairs),
                   structural_from=_lift(form, max(max(k, K) * L + r + 1 for r, k in enumerate(pairs))))
    elif isinstance(model, PowerMixture):
        s, n0 = model.stabilization
        slope = model.slope_stabilization
        out.update(route="power-slope", sign=[s, n0], slope=[slope[0], slope[1]],
                   structural_from=_lift(form, max(n0, slope[1])))
    return out


def _rational_subsums_unit(coeffs: tuple[Enclosure, ...]):
    if not all(c.is_exact for c in coeffs):
        return None
    sums = sorted(p for p, _ in subsums_of([c.lo for c in coeffs]).intervals)
    den = math.lcm(*(s.denominator for s in sums))
    ints = [s.numerator * (den // s.denominator) for s in sums]
    g = math.gcd(*ints)
    if g == 0:
        return None
    return Fraction(g, den), [v // g for v in ints]


def _tile_witness(seq: Sequence, form: EventualForm, depth: int, min_length: Fraction):
    """Interval inside the set for single-ratio block models whose block digits tile.

    With ratio ``1/B`` and block subsums forming a complete residue system mod
    B in units of ``u``, the set's translates by ``u*B*Z`` cover the line, so a
    point missing every nonzero translate of an outer enclosure is in the set.
    """
    model = form.model
    if not isinstance(model, BlockMixture) or len(model.components) != 1:
        return None
    coeffs, ratio = model.components[0]
    rho = ratio.value
    if not rho.is_exact or rho.lo.numerator != 1:
        return None
    B = rho.lo.denominator
    unit = _rational_subsums_unit(coeffs)
    if unit is None:
        return None
    u, digits = unit
    if len(digits) != B or len({d % B for d in digits}) != B:
        return None
    M = u * B
    L = model.period
    k0 = _first_full_block(form, L)
    scale = rho.lo ** k0
    best = None
    for n in range(L, max(depth, L) + 1, L):
        outer = approximate(model, n).outer
        reach = math.ceil((outer.max - outer.min) / M) + 1
        cover = None
        for k in range(-reach, reach + 1):
            if k:
                shifted = outer.translate(k * M)
                cover = shifted if cover is None else cover.union(shifted)
        pieces = cover.complement_pieces((outer.min, outer.max)) if cover else [(outer.min, outer.max)]
        if not pieces:
            continue
        a, b = max(pieces, key=lambda ab: (ab[1] - ab[0], -ab[0]))
        if best is None or b - a > best[2] - best[1]:
            best = (n, a, b)
        if (b - a) * scale >= min_length:
            break
    if best is None:
        return None
    n, a, b = best
    lo, hi = sorted((a * scale, b * scale))
    evidence = {"route": "lattice-tile", "model_depth": n, "base": B, "unit": format_rational(u),
                "digits": digits, "first_block": k0, "model_interval": [format_rational(a), format_rational(b)]}
    return (lo, hi), evidence


def _jones_witness(seq: Sequence, form: EventualForm, horizon: int):
    """Interval inside the set for period-3 models with blocks proportional to (4, 3, 2).

    Each block subsum set of (4,3,2)g contains 2g + {0,...,5}g, so the set
    contains 2*sum(g) plus the achievement set of the companion sequence with
    five equal entries per block, which is certified to be a union of intervals.
    """
    model = form.model
    if not isinstance(model, BlockMixture) or model.period != 3:
        return None
    gammas = []
    for coeffs, _ in model.components:
        if not all(c.is_exact for c in coeffs):
            return None
        c0, c1, c2 = (c.lo for c in coeffs)
        if 3 * c0 != 4 * c1 or 2 * c0 != 4 * c2:
            return None
        gammas.append(c0 / 4)
    companion = BlockMixture(5, [((g,) * 5, ratio) for g, (_, ratio) in zip(gammas, model.components)],
                             prec=model.prec)
    cert = kakeya_interval_test(companion, horizon)
    if cert is None:
        return None
    k0 = _first_full_block(form, 3)
    S = Enclosure(0)
    for j, (g, (_, ratio)) in enumerate(zip(gammas, model.components)):
        S = S + g * model.rho_pow(j, k0) / (1 - ratio.value)
    p = max(cert.n0, 5 * k0 + 1)
    tm = companion.tail_minus(p - 1)
    tp = companion.tail_plus(p - 1)
    two_s = 2 * S
    lo = two_s.hi - tm.lo
    hi = two_s.lo + tp.lo
    if lo >= hi:
        return None
    evidence = {"route": "digit-inclusion", "first_block": k0, "companion_from": p,
                "companion_certificate": cert.to_json(), "offset": enclosure_to_json(two_s)}
    return (lo, hi), evidence


def cantorval_test(seq: Sequence, horizon: int = DEFAULT_HORIZON, depth: int = DEFAULT_DEPTH,
                   min_length: Fraction = DEFAULT_MIN_LENGTH) -> CantorvalCert | None:
    """Certificate for: contains an interval, infinitely many strict indices, eventually monotone."""
    if seq.is_finitely_supported:
        raise ClassificationError("finitely supported sequences have finite achievement sets")
    monotone = _monotone_evidence(seq)
    if monotone is None:
        raise PreconditionError("|x| is not certified to be eventually nonincreasing")
    form = seq.eventual()
    if form is None or not isinstance(form.model, BlockMixture):
        return None
    model = form.model
    offs = _block_offsets(model)
    if offs is None:
        return None
    strict = [r for r, (s, _) in enumerate(offs) if s > 0]
    if not strict:
        return None
    r = strict[0]
    L = model.period
    first = max(offs[r][1], model.stable_block) * L + r + 1 + form.shift
    while first < form.start:
        first += L
    last = max(horizon, first)
    for n in range(first, last + 1, L):
        if not abs(seq.term(n)).lo > seq.tail_sum_abs(n).hi:
            return None
    rule = {"route": "block-offset", "signs": [[s, k] for s, k in model.offset_signs],
            "offset": r, "modulus": L, "residue": first % L,
            "from_position": first, "verified_to": last, "from_block": offs[r][1]}
    witness = _tile_witness(seq, form, depth, min_length) or _jones_witness(seq, form, horizon)
    if witness is None:
        return None
    interval, evidence = witness
    return CantorvalCert(interval, evidence, rule, monotone)


# ---------------------------------------------------------------------------
# driver


def classify(seq: Sequence, horizon: int = DEFAULT_HORIZON, depth: int = DEFAULT_DEPTH) -> Classification:
    """Run the three tests; the first certificate found decides the verdict."""
    if seq.is_finitely_supported:
        raise ClassificationError("finitely supported sequences have finite achievement sets")
    try:
        model = seq.to_model()
    except NotImplementedError:
        model = None
    reasons = []
    found, why = _kakeya_test(seq, horizon, strict=True)
    if found is not None:
        return Classification(CANTOR, CantorCert(*found), horizon, depth, model)
    reasons.append(f"cantor: {why}")
    found, why = _kakeya_test(seq, horizon, strict=False)
    if found is not None:
        cert = IntervalCert(*found, necessity=seq.sign_profile.eventually_nonincreasing)
        return Classification(INTERVALS, cert, horizon, depth, model)
    reasons.append(f"interval: {why}")
    try:
        cert = cantorval_test(seq, horizon, depth)
    except PreconditionError as exc:
        cert = None
        reasons.append(f"cantorval: {exc}")
    else:
        if cert is None:
            reasons.append("cantorval: no interval witness or strict rule found")
    if cert is not None:
        return Classification(CANTORVAL, cert, horizon, depth, model)
    return Classification(UNDETERMINED, NoCertificate(tuple(reasons)), horizon, depth, model, tuple(reasons))
