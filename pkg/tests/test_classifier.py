import copy
import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from achieveset.classifier import (
    CANTOR,
    CANTORVAL,
    INTERVALS,
    UNDETERMINED,
    CantorCert,
    CantorvalCert,
    ClassificationError,
    IntervalCert,
    PreconditionError,
    cantorval_test,
    classify,
    kakeya_cantor_test,
    kakeya_interval_test,
)
from achieveset.families import (
    exp_mixture,
    geometric,
    guthrie_nymann,
    jones_x,
    jones_x_combination,
    jones_y,
    pow_mixture,
    power_generator,
    spaceability_combine,
)
from achieveset.sequences import BlockMixture, Explicit
from achieveset.verify import verify_classification


def replays(result) -> bool:
    return verify_classification(json.loads(json.dumps(result.to_json()))).ok


def test_kakeya_cantor_examples():
    cert = kakeya_cantor_test(geometric(F(2, 5)))
    assert isinstance(cert, CantorCert) and cert.n0 == 1
    assert kakeya_cantor_test(geometric(F(1, 2))) is None
    assert kakeya_cantor_test(guthrie_nymann()) is None


def test_kakeya_interval_examples():
    # 1 > pi^2/6 - 1 at n = 1, so the inequality starts at n = 2
    cert = kakeya_interval_test(pow_mixture([1], [2]))
    assert isinstance(cert, IntervalCert) and cert.n0 == 2 and cert.necessity
    assert kakeya_interval_test(geometric(F(1, 2))).n0 == 1
    assert isinstance(kakeya_interval_test(jones_y(F(1, 6))), IntervalCert)


def test_cantorval_examples():
    gn = cantorval_test(guthrie_nymann())
    assert isinstance(gn, CantorvalCert) and gn.interval == (F(2, 3), 1)
    assert isinstance(cantorval_test(jones_x(F(1, 6))), CantorvalCert)
    assert cantorval_test(geometric(F(1, 3))) is None


def test_cantorval_precondition_is_distinct():
    with pytest.raises(PreconditionError):
        cantorval_test(spaceability_combine([1, F(-1, 2), F(1, 4)])[0])


def test_classify_examples():
    assert classify(geometric(F(1, 3))).verdict == CANTOR
    assert classify(geometric(F(1, 2))).verdict == INTERVALS
    assert classify(guthrie_nymann()).verdict == CANTORVAL


def test_finitely_supported_input_is_rejected():
    with pytest.raises(ClassificationError):
        classify(Explicit([1, F(1, 2), F(1, 4)]))


@pytest.mark.parametrize("seq", [
    geometric(F(1, 3)), geometric(F(7, 10)), guthrie_nymann(), jones_x(F(1, 6)), jones_y(F(1, 6)),
    pow_mixture([2, -1], [2, 3]), power_generator(F(3, 2)), exp_mixture([1, -1], [F(1, 3), F(1, 9)]),
    spaceability_combine([1, F(-1, 2)])[0], jones_x_combination([F(1, 3), -4], [F(7, 40), F(1, 6)]),
    guthrie_nymann().patched([5, -1, F(1, 7)], 3),
])
def test_certificates_replay(seq):
    result = classify(seq, horizon=400)
    assert result.verdict != UNDETERMINED
    assert replays(result)


def _tamper(obj):
    cert = obj["certificate"]
    if cert["type"] in ("cantor", "interval"):
        cert["n0"] = 1
        cert["type"] = "interval" if cert["type"] == "cantor" else "cantor"
        obj["verdict"] = CANTOR if cert["type"] == "cantor" else INTERVALS
    else:
        lo, hi = cert["interval"]
        cert["interval"] = [lo, str(F(hi) + 1)]
    return obj


@pytest.mark.parametrize("seq", [geometric(F(1, 3)), geometric(F(1, 2)), guthrie_nymann(), jones_x(F(1, 6))])
def test_tampered_certificates_fail(seq):
    obj = _tamper(copy.deepcopy(classify(seq).to_json()))
    assert not verify_classification(obj).ok


def test_wrong_model_fails_replay():
    obj = classify(geometric(F(1, 3))).to_json()
    obj["model"]["components"][0]["ratio"] = "1/2"
    assert not verify_classification(obj).ok


def test_undetermined_carries_reasons():
    # a slow power tail forced below the horizon: n0 cannot fit in a horizon of 1
    result = classify(pow_mixture([1], [2]), horizon=1)
    assert result.verdict == UNDETERMINED
    assert result.diagnostics and replays(result)


def _random_model(rng: random.Random):
    if rng.random() < 0.5:
        qs = sorted({F(rng.randint(1, 19), 20) for _ in range(rng.randint(1, 2))}, reverse=True)
        return exp_mixture([F(rng.choice((-1, 1)) * rng.randint(1, 5), rng.randint(1, 4)) for _ in qs], qs)
    period = rng.randint(2, 3)
    coeffs = tuple(F(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(period))
    return BlockMixture(period, [(coeffs, F(rng.randint(1, 9), 10))])


def test_verdicts_never_switch_across_horizons():
    rng = random.Random(7)
    for _ in range(1000):
        seq = _random_model(rng)
        verdicts = {classify(seq, horizon=h, depth=8).verdict for h in (12, 48)} - {UNDETERMINED}
        assert len(verdicts) <= 1


families = [geometric(F(1, 3)), geometric(F(3, 5)), guthrie_nymann(), jones_x(F(1, 6)), jones_y(F(1, 6)),
            pow_mixture([2, -1], [2, 3])]
nonzero = st.fractions(min_value=-20, max_value=20, max_denominator=9).filter(bool)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(families))), nonzero)
def test_scale_invariance(i, c):
    seq = families[i]
    scaled = classify(seq.scaled(c))
    assert scaled.verdict == classify(seq).verdict
    assert replays(scaled)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(families))),
       st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=7), min_size=0, max_size=5),
       st.integers(0, 5))
def test_finite_modification_invariance(i, head, drop):
    seq = families[i]
    mod = classify(seq.patched(head, drop))
    assert mod.verdict == classify(seq).verdict
    assert replays(mod)


@pytest.mark.parametrize("i", range(len(families)))
def test_sign_invariance(i):
    seq = families[i].scaled(-1) if i % 2 else families[i]
    assert classify(seq.absolute()).verdict == classify(seq).verdict


def _mutations(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _mutations(v, path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _mutations(v, path + (i,))
    else:
        yield path


def _set(obj, path, value):
    for p in path[:-1]:
        obj = obj[p]
    obj[path[-1]] = value


@pytest.mark.parametrize("seq", [geometric(F(1, 3)), pow_mixture([1], [2]), guthrie_nymann(), jones_x(F(1, 6))])
def test_checker_survives_mutations(seq):
    """Every single-field corruption yields a report, never an exception."""
    base = classify(seq).to_json()
    for path in _mutations(base):
        for value in (0, -1, "1/0", None, 10 ** 6):
            obj = copy.deepcopy(base)
            _set(obj, path, value)
            verify_classification(obj)
