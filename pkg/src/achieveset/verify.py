"""Independent replay of classification certificates.

The checker rebuilds the sequence from the ``model`` recorded in a
classification and re-derives every claim with its own evaluators.  It shares
only rational/interval arithmetic (:mod:`achieveset.numbers`, mpmath) with the
code that produced the certificate.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from .numbers import Enclosure, default_precision, enclosure_from_json, iv_precision, parse_rational

ZERO = Enclosure(0)
INDEX_LIMIT = 100_000  # the producer never scans past this index


def _indices_in_range(obj) -> bool:
    if isinstance(obj, bool):
        return True
    if isinstance(obj, int):
        return -INDEX_LIMIT <= obj <= INDEX_LIMIT
    if isinstance(obj, dict):
        return all(_indices_in_range(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_indices_in_range(v) for v in obj)
    return True


@dataclass
class VerifyReport:
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.failures.append(msg)

    def require(self, cond: bool, msg: str) -> bool:
        if cond:
            self.checked.append(msg)
        else:
            self.fail(msg)
        return bool(cond)

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": self.failures, "checked": len(self.checked)}


class _Unverifiable(Exception):
    pass


# ---------------------------------------------------------------------------
# evaluators


def _rho_power(rho: Enclosure, k: int, prec: int) -> Enclosure:
    if rho.is_exact:
        return Enclosure(rho.lo ** k)
    with iv_precision(prec):
        return Enclosure.from_iv(rho.to_iv() ** k)


def _ratio(obj, prec: int) -> Enclosure:
    if isinstance(obj, dict) and "base" in obj:
        value = enclosure_from_json(obj["value"])
        base = parse_rational(obj["base"])
        exp = enclosure_from_json(obj["exponent"])
        with iv_precision(prec):
            direct = Enclosure.from_iv(Enclosure(base).to_iv() ** exp.to_iv())
        if not (value.overlaps(direct)):
            raise _Unverifiable("recorded ratio does not match base**exponent")
        return value.hull(direct) if not value.contains(direct) else value
    return enclosure_from_json(obj)


def _dominant(coeffs, scales, claim: int, mono_lead) -> bool:
    """Is ``sign(sum c_j w_j) == claim`` given per-component weights ``w_j``?

    ``mono_lead`` picks the index whose weight dominates all others' ratios
    from here on (checked by the caller) or None for a uniform-sign check.
    """
    nz = [(c, w) for c, w in zip(coeffs, scales) if not (c.lo == 0 == c.hi)]
    if not nz:
        return claim == 0
    if claim == 0:
        return False
    if all(c.lo > 0 for c, _ in nz):
        return claim == 1
    if all(c.hi < 0 for c, _ in nz):
        return claim == -1
    if mono_lead is None:
        return False
    c_lead, w_lead = coeffs[mono_lead], scales[mono_lead]
    lead_sign = 1 if c_lead.lo > 0 else (-1 if c_lead.hi < 0 else None)
    if lead_sign != claim:
        return False
    rest = sum((abs(c) * w for i, (c, w) in enumerate(zip(coeffs, scales)) if i != mono_lead), ZERO)
    return (abs(c_lead) * w_lead).lo > rest.hi


class _BlockModel:
    def __init__(self, obj, prec):
        self.prec = prec
        self.L = int(obj["period"])
        self.comps = []
        for comp in obj["components"]:
            coeffs = [enclosure_from_json(c) for c in comp["coeffs"]]
            if len(coeffs) != self.L:
                raise _Unverifiable("block length mismatch")
            rho = _ratio(comp["ratio"], prec)
            if not (rho.lo > 0 and rho.hi < 1):
                raise _Unverifiable("ratio outside (0, 1)")
            self.comps.append((coeffs, rho))
        self.signs = None
        self.stable = None

    def term(self, m: int) -> Enclosure:
        k, r = divmod(m - 1, self.L)
        return sum((c[r] * _rho_power(rho, k, self.prec) for c, rho in self.comps), ZERO)

    def _lead(self, coeffs) -> int | None:
        idx = [i for i, c in enumerate(coeffs) if not (c.lo == 0 == c.hi)]
        if not idx:
            return None
        lead = max(idx, key=lambda i: self.comps[i][1].lo)
        if any(self.comps[i][1].hi >= self.comps[lead][1].lo for i in idx if i != lead):
            return None
        return lead

    def eventual_sign(self, coeffs, claim: int, k: int) -> bool:
        scales = [_rho_power(rho, k, self.prec) for _, rho in self.comps]
        return _dominant(coeffs, scales, claim, self._lead(coeffs))

    def adopt_signs(self, signs, report: VerifyReport) -> bool:
        ok = len(signs) == self.L
        for r, (s, k) in enumerate(signs if ok else []):
            ok &= self.eventual_sign([c[r] for c, _ in self.comps], s, k)
        if report.require(ok, "per-offset term signs stabilize as claimed"):
            self.signs = [s for s, _ in signs]
            self.stable = max(k for _, k in signs)
        return ok

    def kakeya_coeffs(self, r: int):
        s = self.signs
        out = []
        for c, rho in self.comps:
            later = sum((s[t] * c[t] for t in range(r + 1, self.L)), ZERO)
            block = sum((s[t] * c[t] for t in range(self.L)), ZERO)
            out.append(s[r] * c[r] - later - block * rho / (1 - rho))
        return out

    def pair_coeffs(self, r: int):
        s = self.signs
        if r < self.L - 1:
            return [s[r] * c[r] - s[r + 1] * c[r + 1] for c, _ in self.comps]
        return [s[-1] * c[-1] - s[0] * c[0] * rho for c, rho in self.comps]

    def _closed(self, m: int, weights) -> Enclosure:
        k, r = divmod(m, self.L)
        acc = ZERO
        for c, rho in self.comps:
            part = sum((weights[t] * c[t] for t in range(r, self.L)), ZERO)
            full = sum((weights[t] * c[t] for t in range(self.L)), ZERO)
            acc = acc + part * _rho_power(rho, k, self.prec) + full * _rho_power(rho, k + 1, self.prec) / (1 - rho)
        return acc

    def tail(self, m: int, mode: str = "abs") -> Enclosure:
        if self.signs is None:
            raise _Unverifiable("tail requested before signs were verified")
        w = {"abs": self.signs,
             "plus": [1 if s > 0 else 0 for s in self.signs],
             "minus": [-1 if s < 0 else 0 for s in self.signs]}[mode]
        edge = self.stable * self.L
        acc = ZERO
        for i in range(m + 1, edge + 1):
            t = self.term(i)
            acc = acc + (abs(t) if mode == "abs" else _part(t, mode))
        acc = acc + self._closed(max(m, edge), w)
        return Enclosure(max(acc.lo, 0), max(acc.hi, 0))


def _part(t: Enclosure, mode: str) -> Enclosure:
    if mode == "plus":
        return Enclosure(max(t.lo, 0), max(t.hi, 0))
    return Enclosure(max(-t.hi, 0), max(-t.lo, 0))


def _zeta_tail(p: Enclosure, m: int, prec: int) -> Enclosure:
    if m == 0:
        return 1 + _zeta_tail(p, 1, prec)
    with iv_precision(prec):
        P = p.to_iv()
        lo = Enclosure.from_iv(iv.mpf(m + 1) ** (1 - P) / (P - 1)).lo
        hi = Enclosure.from_iv(iv.mpf(m) ** (1 - P) / (P - 1)).hi
    return Enclosure(lo, hi)


def _npow(n: int, p: Enclosure, prec: int) -> Enclosure:
    if p.is_exact and p.lo.denominator == 1:
        return Enclosure(Fraction(1, n ** int(p.lo)))
    with iv_precision(prec):
        return Enclosure.from_iv(iv.mpf(n) ** (-p.to_iv()))


class _PowerModel:
    def __init__(self, obj, prec):
        self.prec = prec
        self.betas = [enclosure_from_json(b) for b in obj["betas"]]
        self.exps = [enclosure_from_json(p) for p in obj["exponents"]]
        if any(p.lo <= 1 for p in self.exps):
            raise _Unverifiable("power exponent not above 1")
        self.sign = None

    def term(self, n: int) -> Enclosure:
        return sum((b * _npow(n, p, self.prec) for b, p in zip(self.betas, self.exps)), ZERO)

    def eventual_sign(self, coeffs, exps, claim: int, n: int) -> bool:
        idx = [i for i, c in enumerate(coeffs) if not (c.lo == 0 == c.hi)]
        lead = min(idx, key=lambda i: exps[i].hi) if idx else None
        if lead is not None and any(exps[i].lo <= exps[lead].hi for i in idx if i != lead):
            lead = None
        scales = [_npow(n, e, self.prec) for e in exps]
        return _dominant(coeffs, scales, claim, lead)

    def adopt_sign(self, sign, report: VerifyReport) -> bool:
        s, n0 = sign
        ok = report.require(self.eventual_sign(self.betas, self.exps, s, n0), "power term sign stabilizes")
        if ok:
            self.sign = (s, n0)
        return ok

    def tail(self, m: int, mode: str = "abs") -> Enclosure:
        if self.sign is None:
            raise _Unverifiable("tail requested before the sign was verified")
        s, n0 = self.sign
        edge = max(m, n0 - 1)
        acc = ZERO
        for i in range(m + 1, edge + 1):
            t = self.term(i)
            acc = acc + (abs(t) if mode == "abs" else _part(t, mode))
        w = {"abs": s, "plus": 1 if s > 0 else 0, "minus": -1 if s < 0 else 0}[mode]
        if w:
            for b, p in zip(self.betas, self.exps):
                acc = acc + w * b * _zeta_tail(p, edge, self.prec)
        return Enclosure(max(acc.lo, 0), max(acc.hi, 0))


class _SparseModel:
    def __init__(self, obj, prec):
        self.t = [parse_rational(v) for v in obj["t"]]
        name = obj["partition"]
        if name == "dyadic":
            self.mod = None
        elif name.startswith("residue:"):
            self.mod = int(name.split(":")[1])
            if len(self.t) > self.mod:
                raise _Unverifiable("more coefficients than partition classes")
        else:
            raise _Unverifiable(f"unknown partition {name}")

    def _where(self, i: int):
        if self.mod is None:
            n = 1
            while i % 2 == 0:
                i //= 2
                n += 1
            return n, (i + 1) // 2
        return (i - 1) % self.mod + 1, (i - 1) // self.mod + 1

    def _count(self, n: int, N: int) -> int:
        if self.mod is None:
            step = 1 << (n - 1)
            return (N // step + 1) // 2
        return 0 if N < n else (N - n) // self.mod + 1

    def term(self, i: int) -> Enclosure:
        n, j = self._where(i)
        return Enclosure(self.t[n - 1] / 2 ** j) if n <= len(self.t) else ZERO

    def tail(self, N: int, mode: str = "abs") -> Enclosure:
        acc = Fraction(0)
        for n, v in enumerate(self.t, start=1):
            if (mode == "plus" and v <= 0) or (mode == "minus" and v >= 0):
                continue
            acc += abs(v) / 2 ** self._count(n, N)
        return Enclosure(acc)


class _Replay:
    """The full sequence: an optional head followed by a shifted base model."""

    def __init__(self, obj, prec):
        self.head: list[Enclosure] = []
        self.drop = 0
        if obj["type"] == "patched":
            self.head = [enclosure_from_json(v) for v in obj["head"]]
            self.drop = int(obj["drop"])
            obj = obj["base"]
        kinds = {"block": _BlockModel, "power": _PowerModel, "sparse": _SparseModel}
        if obj["type"] not in kinds:
            raise _Unverifiable(f"no replay for model type {obj['type']!r}")
        self.base = kinds[obj["type"]](obj, prec)
        self.shift = len(self.head) - self.drop
        self.start = max(len(self.head) + 1, 1 + self.shift)

    def term(self, n: int) -> Enclosure:
        if n <= len(self.head):
            return self.head[n - 1]
        return self.base.term(n - self.shift)

    def tail(self, n: int, mode: str = "abs") -> Enclosure:
        h = len(self.head)
        if n >= h:
            return self.base.tail(n - self.shift, mode)
        acc = ZERO
        for v in self.head[n:]:
            acc = acc + (abs(v) if mode == "abs" else _part(v, mode))
        return acc + self.base.tail(self.drop, mode)

    def lift(self, m: int) -> int:
        return max(self.start, m + self.shift)


# ---------------------------------------------------------------------------
# certificate checks


def _check_kakeya(x: _Replay, cert: dict, strict: bool, report: VerifyReport) -> None:
    cont = cert["continuation"]
    report.require(cont.get("shift") == x.shift and cont.get("start") == x.start, "eventual form matches the model")
    route = cont["route"]
    base = x.base
    if route == "block-offsets":
        if not isinstance(base, _BlockModel) or not base.adopt_signs(cont["signs"], report):
            report.fail("block continuation needs a block model with verified signs")
            return
        ok = True
        m_star = 0
        for r, (s, k) in enumerate(cont["offsets"]):
            ok &= (s == 1) if strict else (s <= 0)
            ok &= base.eventual_sign(base.kakeya_coeffs(r), s, k)
            m_star = max(m_star, max(k, base.stable) * base.L + r + 1)
        report.require(ok and len(cont["offsets"]) == base.L, "term-minus-tail sums have the claimed eventual signs")
        report.require(cont["from_position"] >= x.lift(m_star), "continuation index follows from the offsets")
    elif route == "power-integral":
        if strict or not isinstance(base, _PowerModel):
            report.fail("integral continuation only certifies intervals of power models")
            return
        n = int(cont["model_from"])
        report.require(_power_predicate(base, n), "integral lower bound dominates from the claimed index")
        report.require(cont["from_position"] >= x.lift(n), "continuation index lifted correctly")
        sign = cont.get("sign")
        if sign is None or not base.adopt_sign(sign, report):
            report.fail("power continuation lacks a verified sign")
            return
    elif route == "sparse-structural":
        report.require(not strict and isinstance(base, _SparseModel), "structural interval route needs a sparse model")
        report.require(cont["from_position"] >= x.start, "structural route starts after the head")
    else:
        report.fail(f"unknown continuation route {route!r}")
        return
    n0, upto = int(cert["n0"]), int(cert["verified_to"])
    if not report.require(1 <= n0 <= upto, "1 <= n0 <= verified_to"):
        return
    report.require(upto >= cont["from_position"] - 1, "finite range reaches the continuation")
    bad = None
    for n in range(n0, upto + 1):
        t, tail = abs(x.term(n)), x.tail(n)
        if not (t.lo > tail.hi if strict else t.hi <= tail.lo):
            bad = n
            break
    report.require(bad is None, f"exact inequality on [{n0}, {upto}]" + ("" if bad is None else f" fails at {bad}"))


def _power_predicate(model: _PowerModel, n: int) -> bool:
    order = sorted(range(len(model.exps)), key=lambda i: model.exps[i].lo)
    betas = [abs(model.betas[i]) for i in order]
    exps = [model.exps[i] for i in order]
    if any(exps[i].hi >= exps[i + 1].lo for i in range(len(exps) - 1)):
        return False
    lhs = sum((Enclosure(b.hi) * _npow(n, p, model.prec) for b, p in zip(betas, exps)), ZERO)
    with iv_precision(model.prec):
        P = exps[0].to_iv()
        rhs = Enclosure.from_iv(Enclosure(betas[0].lo).to_iv() / ((P - 1) * iv.mpf(n + 1) ** (P - 1)))
        for b, p in zip(betas[1:], exps[1:]):
            Q = p.to_iv()
            rhs = rhs - Enclosure.from_iv(Enclosure(b.hi).to_iv() / ((Q - 1) * iv.mpf(n) ** (Q - 1)))
    return lhs.hi <= rhs.lo


def _check_monotone(x: _Replay, mono: dict, report: VerifyReport) -> None:
    base = x.base
    route = mono.get("route")
    if route == "block-pairs":
        if not isinstance(base, _BlockModel) or not base.adopt_signs(mono["signs"], report):
            report.fail("monotone evidence needs verified block signs")
            return
        ok = len(mono["pairs"]) == base.L
        structural = 0
        for r, k in enumerate(mono["pairs"]):
            coeffs = base.pair_coeffs(r)
            ok &= base.eventual_sign(coeffs, 1, k) or base.eventual_sign(coeffs, 0, k)
            structural = max(structural, max(k, base.stable) * base.L + r + 1)
        report.require(ok, "consecutive absolute terms eventually nonincreasing")
        report.require(mono["structural_from"] >= x.lift(structural), "structural monotone index")
    elif route == "power-slope":
        if not isinstance(base, _PowerModel) or not base.adopt_sign(mono["sign"], report):
            report.fail("monotone evidence needs a verified power sign")
            return
        s1, n1 = mono["slope"]
        coeffs = [b * p for b, p in zip(base.betas, base.exps)]
        exps = [p + 1 for p in base.exps]
        ok = s1 == base.sign[0] != 0 and base.eventual_sign(coeffs, exps, s1, n1)
        report.require(ok, "derivative sign makes |x| decreasing")
        report.require(mono["structural_from"] >= x.lift(max(base.sign[1], n1)), "structural monotone index")
    else:
        report.fail(f"unknown monotone route {route!r}")
        return
    lo, hi = int(mono["from_position"]), int(mono["structural_from"])
    bad = next((n for n in range(lo, hi) if not abs(x.term(n)).lo >= abs(x.term(n + 1)).hi), None)
    report.require(bad is None, "exact monotonicity before the structural index")


def _check_rule(x: _Replay, rule: dict, report: VerifyReport) -> None:
    base = x.base
    if not isinstance(base, _BlockModel) or not base.adopt_signs(rule["signs"], report):
        report.fail("strict-index rule needs a verified block model")
        return
    r, k = int(rule["offset"]), int(rule["from_block"])
    report.require(base.eventual_sign(base.kakeya_coeffs(r), 1, k), f"strict inequality at offset {r} from block {k}")
    first = max(k, base.stable) * base.L + r + 1 + x.shift
    while first < x.start:
        first += base.L
    report.require(rule["from_position"] == first and rule["modulus"] == base.L, "rule positions derived correctly")
    bad = None
    for n in range(first, int(rule["verified_to"]) + 1, base.L):
        if not abs(x.term(n)).lo > x.tail(n).hi:
            bad = n
            break
    report.require(bad is None, "exact strict inequality along the rule")


def _subset_sums(values):
    sums = {Fraction(0)}
    for v in values:
        sums |= {s + v for s in sums}
    return sorted(sums)


def _first_block(x: _Replay, L: int) -> int:
    k = 0
    while k * L + 1 + x.shift < x.start:
        k += 1
    return k


def _check_tile(x: _Replay, interval, ev: dict, report: VerifyReport) -> None:
    base = x.base
    if not isinstance(base, _BlockModel) or len(base.comps) != 1:
        report.fail("tile route needs a single-ratio block model")
        return
    coeffs, rho = base.comps[0]
    if not (rho.is_exact and rho.lo.numerator == 1 and all(c.is_exact for c in coeffs)):
        report.fail("tile route needs exact data with ratio 1/B")
        return
    B = rho.lo.denominator
    digits = _subset_sums([c.lo for c in coeffs])
    unit = Fraction(math.gcd(*(d.numerator * (math.lcm(*(e.denominator for e in digits)) // d.denominator)
                                 for d in digits)), math.lcm(*(e.denominator for e in digits)))
    scaled = [d / unit for d in digits]
    report.require(len(scaled) == B and len({int(d) % B for d in scaled}) == B,
                   "block subsums form a complete residue system")
    M = unit * B
    n = int(ev["model_depth"])
    pts = [Fraction(0)]
    for i in range(1, n + 1):
        t = base.term(i).lo
        pts = pts + [p + t for p in pts]
    pts = sorted(set(pts))
    k, r = divmod(n, base.L)
    tp = tm = Fraction(0)
    for j in range(base.L):
        c = coeffs[j].lo
        weight = rho.lo ** k * (1 if j >= r else rho.lo) / (1 - rho.lo)
        if c > 0:
            tp += c * weight
        else:
            tm -= c * weight
    a, b = (parse_rational(v) for v in ev["model_interval"])
    report.require(a < b, "model interval has positive length")
    reach = math.ceil((pts[-1] - pts[0] + tp + tm) / M) + 1
    clash = False
    for kk in range(-reach, reach + 1):
        if kk == 0:
            continue
        # translate [p - tm, p + tp] + kk*M meets the open interval (a, b)
        lo_p = a - tp - kk * M
        hi_p = b + tm - kk * M
        i = bisect.bisect_right(pts, lo_p)
        if i < len(pts) and pts[i] < hi_p:
            clash = True
            break
    report.require(not clash, "interval avoids every nonzero lattice translate of the outer set")
    k0 = int(ev["first_block"])
    report.require(k0 >= _first_block(x, base.L), "first block lies after the modified head")
    scale = rho.lo ** k0
    lo, hi = sorted((a * scale, b * scale))
    report.require(interval[0] >= lo and interval[1] <= hi, "claimed interval inside the certified one")


def _check_digits(x: _Replay, interval, ev: dict, report: VerifyReport, prec: int) -> None:
    base = x.base
    table = _subset_sums([4, 3, 2])
    report.require(all(v in table for v in range(2, 8)), "digits 2..7 are subsums of 4, 3, 2")
    if not isinstance(base, _BlockModel) or base.L != 3:
        report.fail("digit route needs a period-3 block model")
        return
    gammas = []
    for coeffs, _ in base.comps:
        c = [v.lo for v in coeffs]
        if not all(v.is_exact for v in coeffs) or 3 * c[0] != 4 * c[1] or 2 * c[0] != 4 * c[2]:
            report.fail("blocks are not proportional to (4, 3, 2)")
            return
        gammas.append(c[0] / 4)
    companion_model = {"type": "block", "period": 5, "components": [
        {"coeffs": [str(g)] * 5, "ratio": _ratio_json(rho)} for g, (_, rho) in zip(gammas, base.comps)]}
    y = _Replay(companion_model, prec)
    sub = VerifyReport()
    _check_kakeya(y, ev["companion_certificate"], False, sub)
    report.require(sub.ok, "companion interval certificate replays" + ("" if sub.ok else f": {sub.failures}"))
    if not sub.ok:
        return
    k0 = int(ev["first_block"])
    report.require(k0 >= _first_block(x, 3), "first block lies after the modified head")
    S = sum((g * _rho_power(rho, k0, prec) / (1 - rho) for g, (_, rho) in zip(gammas, base.comps)), ZERO)
    p = max(int(ev["companion_certificate"]["n0"]), 5 * k0 + 1)
    tm, tp = y.tail(p - 1, "minus"), y.tail(p - 1, "plus")
    lo, hi = 2 * S.hi - tm.lo, 2 * S.lo + tp.lo
    report.require(lo < hi and interval[0] >= lo and interval[1] <= hi, "claimed interval inside the digit-inclusion interval")


def _ratio_json(rho: Enclosure):
    if rho.is_exact:
        return str(rho.lo)
    return {"lo": str(rho.lo), "hi": str(rho.hi)}


def verify_classification(obj: dict, prec: int | None = None) -> VerifyReport:
    """Replay a classification JSON object; Undetermined verdicts carry nothing to check."""
    prec = prec or default_precision()
    report = VerifyReport()
    verdict = obj.get("verdict")
    cert = obj.get("certificate", {})
    if verdict == "Undetermined":
        report.require(cert.get("type") == "none", "undetermined verdict carries no certificate")
        return report
    if "model" not in obj:
        report.fail("classification has no model to replay")
        return report
    if not report.require(_indices_in_range(cert), f"certificate indices within +-{INDEX_LIMIT}"):
        return report
    try:
        x = _Replay(obj["model"], prec)
        kind = cert.get("type")
        if kind in ("cantor", "interval") and "horizon" in obj:
            report.require(int(cert["n0"]) <= int(obj["horizon"]), "n0 within the horizon")
        if verdict == "CantorLike" and kind == "cantor":
            _check_kakeya(x, cert, True, report)
        elif verdict == "FiniteUnionOfIntervals" and kind == "interval":
            _check_kakeya(x, cert, False, report)
        elif verdict == "Cantorval" and kind == "cantorval":
            interval = tuple(parse_rational(v) for v in cert["interval"])
            report.require(interval[0] < interval[1], "interval witness has positive length")
            _check_monotone(x, cert["monotone"], report)
            _check_rule(x, cert["infinite_indices"], report)
            ev = cert["interval_evidence"]
            if ev["route"] == "lattice-tile":
                _check_tile(x, interval, ev, report)
            elif ev["route"] == "digit-inclusion":
                _check_digits(x, interval, ev, report, prec)
            else:
                report.fail(f"unknown interval route {ev['route']!r}")
        else:
            report.fail(f"verdict {verdict!r} does not match certificate type {kind!r}")
    except _Unverifiable as exc:
        report.fail(str(exc))
    except Exception as exc:  # any malformed field is a failed replay, not a crash
        report.fail(f"malformed certificate: {exc!r}")
    return report
