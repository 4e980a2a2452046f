"""Named verification suites run by ``achieveset verify --suite``.

Each suite returns a :class:`SuiteResult` made of named checks; the checks
only combine operations from the other modules, so a suite introduces no
mathematics of its own.  Random inputs come from a seeded generator and are
reproducible.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .classifier import CANTOR, CANTORVAL, INTERVALS, CantorCert, CantorvalCert, IntervalCert, classify
from .compactset import IntervalUnion, hausdorff
from .families import (
    digit_table,
    eq1_check,
    eq2_check,
    exp_mixture,
    geometric,
    gliding_hump,
    guthrie_nymann,
    hump_distance,
    inclusion_check,
    jones_x,
    jones_x_combination,
    jones_y,
    jones_y_combination,
    pow_mixture,
    spaceability_combine,
)
from .sequences import Explicit
from .subsum import approximate, oracle_compare, subsums_of, t_minus, t_plus
from .verify import verify_classification

SEED = 20240607


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _rand_rational(rng: random.Random, max_den: int = 40) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-den, den), den)


def standard_families() -> dict:
    """Every family the constructions use, at representative parameters."""
    x, y = geometric(Fraction(1, 2)), geometric(Fraction(1, 3))
    return {
        "geometric(1/3)": geometric(Fraction(1, 3)),
        "geometric(1/2)": geometric(Fraction(1, 2)),
        "guthrie-nymann": guthrie_nymann(),
        "jones-x(1/6)": jones_x(Fraction(1, 6)),
        "jones-y(1/6)": jones_y(Fraction(1, 6)),
        "jones-x-combination": jones_x_combination([1, Fraction(-1, 2)], [Fraction(7, 40), Fraction(1, 6)]),
        "jones-y-combination": jones_y_combination([1, Fraction(-1, 2)], [Fraction(7, 40), Fraction(1, 6)]),
        "exp-mixture": exp_mixture([1, -1], [Fraction(1, 3), Fraction(1, 9)]),
        "pow-mixture": pow_mixture([2, -1], [2, 3]),
        "spaceability": spaceability_combine([1, Fraction(-1, 2), Fraction(1, 4)])[0],
        "2^-n + 3^-n": x + y,
        "2^-n - 3^-n": x - y,
    }


def _timed(fn):
    def run(*args, **kwargs) -> SuiteResult:
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def suite_oracle(seed: int = SEED, count: int = 50, depths=(8, 12, 16)) -> SuiteResult:
    """Engine inner sets equal brute-force subsum sets."""
    res = SuiteResult("oracle")
    rng = random.Random(seed)
    seqs = {f"random[{i}]": Explicit([_rand_rational(rng) for _ in range(max(depths))]) for i in range(count)}
    seqs.update(standard_families())
    bad = []
    for name, seq in seqs.items():
        for n in depths:
            rep = oracle_compare(seq, n)
            if not rep.passed:
                bad.append(f"{name}@{n}: {rep.first_discrepancy}")
    res.add(f"{len(seqs)} sequences x depths {list(depths)}", not bad, "; ".join(bad[:5]))
    return res


@_timed
def suite_lipschitz(seed: int = SEED, pairs: int = 1000, depth: int = 12) -> SuiteResult:
    """Hausdorff distance of subsum sets never exceeds the l1 distance."""
    res = SuiteResult("lipschitz")
    rng = random.Random(seed)
    violations = 0
    worst = Fraction(0)
    for _ in range(pairs):
        x = [_rand_rational(rng, 12) for _ in range(depth)]
        y = [v + _rand_rational(rng, 12) / rng.choice((1, 4, 16)) for v in x]
        d = hausdorff(subsums_of(x), subsums_of(y))
        l1 = sum(abs(a - b) for a, b in zip(x, y))
        if d > l1:
            violations += 1
        if l1:
            worst = max(worst, d / l1)
    res.add(f"{pairs} pairs at depth {depth}", violations == 0, f"violations={violations}, max ratio={worst}")
    return res


def _replays(cls) -> bool:
    return verify_classification(cls.to_json()).ok


@_timed
def suite_kakeya(time_limit: float = 1.0) -> SuiteResult:
    """Geometric sequences switch from Cantor sets to intervals at ratio 1/2."""
    res = SuiteResult("kakeya")
    cases = [(Fraction(1, 3), CANTOR), (Fraction(2, 5), CANTOR), (Fraction(49, 100), CANTOR),
             (Fraction(1, 2), INTERVALS), (Fraction(3, 5), INTERVALS), (Fraction(7, 10), INTERVALS)]
    for q, want in cases:
        start = time.perf_counter()
        cls = classify(geometric(q))
        elapsed = time.perf_counter() - start
        res.add(f"geometric({q}) -> {want}", cls.verdict == want and _replays(cls) and elapsed < time_limit,
                f"got {cls.verdict}, {elapsed:.3f}s")
    return res


@_timed
def suite_guthrie_nymann(horizon: int = 200, max_depth: int = 16) -> SuiteResult:
    """The Guthrie-Nymann sequence is a Cantorval with an explicit interval."""
    res = SuiteResult("guthrie-nymann")
    b = guthrie_nymann()
    cls = classify(b, horizon=horizon, depth=max_depth)
    cert = cls.certificate
    res.add("verdict Cantorval", cls.verdict == CANTORVAL, cls.verdict)
    if not isinstance(cert, CantorvalCert):
        return res
    res.add("certificate replays", _replays(cls))
    # even positions 2n carry 2/4^n; their tail is 5/(3*4^n)
    ok = all(Fraction(2, 4 ** n) > Fraction(5, 3 * 4 ** n) for n in range(1, horizon + 1))
    ok = ok and all(b.term(2 * n).lo == Fraction(2, 4 ** n) and b.tail_sum_abs(2 * n).lo == Fraction(5, 3 * 4 ** n)
                    for n in range(1, horizon // 2 + 1))
    rule = cert.infinite_indices
    ok = ok and rule.get("modulus") == 2 and rule.get("residue") == 0 and rule.get("verified_to", 0) >= horizon
    res.add("strict rule on even positions", ok, str({k: rule.get(k) for k in ("modulus", "residue", "verified_to")}))
    lo, hi = cert.interval
    depth = cert.interval_evidence.get("model_depth", 0)
    outer = approximate(b, depth).outer
    res.add("interval witness length >= 1/100", hi - lo >= Fraction(1, 100) and depth <= max_depth
            and outer.contains((lo, hi)), f"[{lo}, {hi}] at depth {depth}")
    return res


@_timed
def suite_jones_boundary(seed: int = SEED, per_side: int = 5) -> SuiteResult:
    """For a single ratio the two inequalities hold for all n exactly on [1/6, 2/11)."""
    res = SuiteResult("jones-boundary")
    rng = random.Random(seed)
    probes = set()
    for centre in (Fraction(1, 6), Fraction(2, 11)):
        probes.add(centre)
        while len([p for p in probes if abs(p - centre) < Fraction(1, 50)]) < 2 * per_side + 1:
            probes.add(centre + Fraction(rng.randint(-99, 99), 100 * rng.randint(50, 400)))
    for q in sorted(probes):
        e1, e2 = eq1_check([1], [q], range(0, 40)), eq2_check([1], [q], range(0, 40))
        want1, want2 = q < Fraction(2, 11), q >= Fraction(1, 6)
        res.add(f"q={q}", e1.holds_for_all == want1 and e2.holds_for_all == want2
                and e1.all_rows_hold == want1 and e2.all_rows_hold == want2,
                f"eq1={e1.holds_for_all} eq2={e2.holds_for_all}")
    verified = [q for q in sorted(probes)
                if eq1_check([1], [q], range(0, 1)).holds_for_all and eq2_check([1], [q], range(0, 1)).holds_for_all]
    res.add("verified range is [1/6, 2/11)", all(Fraction(1, 6) <= q < Fraction(2, 11) for q in verified)
            and Fraction(1, 6) in verified and Fraction(2, 11) not in verified)
    return res


def _random_jones_params(rng: random.Random):
    lo, hi = Fraction(1, 6), Fraction(2, 11)
    while True:
        q1 = lo + (hi - lo) * Fraction(rng.randint(1, 99), 100)
        q2 = lo + (hi - lo) * Fraction(rng.randint(0, 98), 100)
        if q1 > q2:
            break
    betas = [Fraction(rng.choice((-1, 1)) * rng.randint(1, 9), rng.randint(1, 5)) for _ in range(2)]
    return betas, [q1, q2]


@_timed
def suite_lineability(seed: int = SEED, count: int = 5, horizon: int = 1000) -> SuiteResult:
    """Random two-term Jones combinations: x is a Cantorval, y a union of intervals."""
    res = SuiteResult("lineability")
    table = digit_table()
    res.add("digits 2..7 are subset sums of {4,3,2}", all(table[v] for v in range(2, 8)) and table[1] is None,
            str({k: v for k, v in table.items()}))
    rng = random.Random(seed)
    for _ in range(count):
        betas, qs = _random_jones_params(rng)
        cx = classify(jones_x_combination(betas, qs), horizon=horizon)
        cy = classify(jones_y_combination(betas, qs), horizon=horizon)
        ok = isinstance(cx.certificate, CantorvalCert) and isinstance(cy.certificate, IntervalCert)
        ok = ok and _replays(cx) and _replays(cy) and inclusion_check(betas, qs, 9).passed
        res.add(f"betas={[str(b) for b in betas]} qs={[str(q) for q in qs]}", ok, f"x={cx.verdict} y={cy.verdict}")
    return res


@_timed
def suite_spaceability(seed: int = SEED, count: int = 10, depth: int = 20) -> SuiteResult:
    """Combinations of the basis sequences have interval achievement sets."""
    res = SuiteResult("spaceability")
    rng = random.Random(seed)
    for _ in range(count):
        while True:
            t = [_rand_rational(rng, 6) for _ in range(rng.randint(1, 3))]
            if any(t):
                break
        seq, predicted = spaceability_combine(t)
        ap = approximate(seq, depth)
        neg, pos = sum(t_minus(v) for v in t), sum(t_plus(v) for v in t)
        d = hausdorff(ap.outer, predicted)
        ends = ap.outer.min == ap.inner.min - ap.tail_minus == -neg and ap.outer.max == ap.inner.max + ap.tail_plus == pos
        res.add(f"t={[str(v) for v in t]}", d <= ap.error_bound and ends, f"d_H={d}, bound={ap.error_bound}")
    return res


GLIDING_BLOCKS = [[1, Fraction(1, 4)], [1, Fraction(1, 8)], [1, Fraction(1, 16)], [1, Fraction(1, 32)]]
GLIDING_EPS = [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)]


@_timed
def suite_gliding_hump(blocks=None, epsilons=None) -> SuiteResult:
    """Every point of the first block's hull is close to a subsum of y."""
    res = SuiteResult("gliding-hump")
    hump = gliding_hump(blocks or GLIDING_BLOCKS, epsilons or GLIDING_EPS)
    d = hump_distance(hump)
    res.add("displacement bound", d <= hump.bound, f"max distance {d} <= {hump.bound}")
    single = gliding_hump([[1, Fraction(1, 4)]], [Fraction(1, 4)])
    pts = subsums_of(v.lo for v in single.sequence.values)
    res.add("single block subsums", pts == IntervalUnion.from_points([0, Fraction(1, 4), 1, Fraction(5, 4)]), str(pts))
    return res


@_timed
def suite_trichotomy() -> SuiteResult:
    """Each of the three set types occurs, each with a replayable certificate."""
    res = SuiteResult("trichotomy")
    for name, seq, want in [("geometric(1/3)", geometric(Fraction(1, 3)), CANTOR),
                            ("geometric(1/2)", geometric(Fraction(1, 2)), INTERVALS),
                            ("guthrie-nymann", guthrie_nymann(), CANTORVAL),
                            ("jones-x(1/6)", jones_x(Fraction(1, 6)), CANTORVAL)]:
        cls = classify(seq)
        res.add(f"{name} -> {want}", cls.verdict == want and _replays(cls), cls.verdict)
    return res


@_timed
def suite_counterexample() -> SuiteResult:
    """2^-n gives intervals, 3^-n a Cantor set, their sum a Cantor set, their difference intervals."""
    res = SuiteResult("counterexample")
    x, y = geometric(Fraction(1, 2)), geometric(Fraction(1, 3))
    for name, seq, want in [("x", x, INTERVALS), ("y", y, CANTOR), ("x+y", x + y, CANTOR), ("x-y", x - y, INTERVALS)]:
        cls = classify(seq)
        res.add(f"{name} -> {want}", cls.verdict == want and _replays(cls), cls.verdict)
    return res


@_timed
def suite_components(max_depth: int = 14) -> SuiteResult:
    """Inner and outer sets of geometric(1/4) have 2^n components at depth n."""
    res = SuiteResult("components")
    seq = geometric(Fraction(1, 4))
    bad = [n for n in range(max_depth + 1)
           if not (len(approximate(seq, n).inner) == 2 ** n and approximate(seq, n).outer.component_count() == 2 ** n)]
    res.add(f"depths 0..{max_depth}", not bad, f"failing depths {bad}")
    return res


def _transforms():
    return [("scale -2", lambda s: s.scaled(-2)), ("scale 3", lambda s: s.scaled(3)),
            ("scale -1/7", lambda s: s.scaled(Fraction(-1, 7))), ("abs", lambda s: s.absolute()),
            ("new head", lambda s: s.patched([Fraction(5), Fraction(-7, 3), Fraction(0)], 3))]


@_timed
def suite_invariance() -> SuiteResult:
    """Scaling, absolute values and head changes leave the verdict unchanged."""
    res = SuiteResult("invariance")
    for name, seq in standard_families().items():
        base = classify(seq).verdict
        for label, tf in _transforms():
            got = classify(tf(seq)).verdict
            res.add(f"{name} / {label}", got == base, f"{base} -> {got}")
    return res


SUITES = {
    "oracle": suite_oracle,
    "lipschitz": suite_lipschitz,
    "kakeya": suite_kakeya,
    "guthrie-nymann": suite_guthrie_nymann,
    "jones-boundary": suite_jones_boundary,
    "lineability": suite_lineability,
    "spaceability": suite_spaceability,
    "gliding-hump": suite_gliding_hump,
    "trichotomy": suite_trichotomy,
    "counterexample": suite_counterexample,
    "components": suite_components,
    "invariance": suite_invariance,
}


def run_suite(name: str) -> SuiteResult:
    return SUITES[name]()
