"""Report serialisation, schema, verdict logic and independent claim re-verification."""
import copy
import json

import jsonschema
import pytest

from finring.config import guards, set_guards
from finring.invariance import suites as S
from finring.invariance.recheck import count_claims, recheck
from finring.invariance.report import (
    CLAIM_CAP, FALSIFIED, NOT_MET, VERIFIED, TheoremSuiteReport, dumps, summary, validate,
)
from finring.modules.catalog import module_from_name
from finring.rings.catalog import ring_by_name


@pytest.fixture(scope="module")
def payload():
    old = guards()
    set_guards(S.suite_guards())
    try:
        reps = []
        for ring, name in [("Z4", "Z4/2"), ("Z4", "Z4 (+) Z4"), ("Z9", "3Z9")]:
            M = module_from_name(ring_by_name(ring), name)
            for fn in S.MODULE_SUITES.values():
                reps.append(fn(M, "injective"))
        reps += S.verify_section2_suite(ring_by_name("F2 x F2"))
        return json.loads(dumps(reps))
    finally:
        set_guards(old)


def test_payload_validates(payload):
    validate(payload)
    assert {r["verdict"] for r in payload["reports"]} <= {VERIFIED, NOT_MET}


def test_schema_rejects_bad_verdict(payload):
    bad = copy.deepcopy(payload)
    bad["reports"][0]["verdict"] = "probably"
    with pytest.raises(jsonschema.ValidationError):
        validate(bad)
    bad = copy.deepcopy(payload)
    del bad["reports"][0]["checks"]
    with pytest.raises(jsonschema.ValidationError):
        validate(bad)


def test_recheck_passes_on_genuine_claims(payload):
    assert count_claims(payload) > 100
    assert recheck(payload) == []


def _nonzero(m):
    return any(any(r) for r in m)


def _tamper(payload, kind, mutate, pick=lambda c: True):
    bad = copy.deepcopy(payload)
    for rep in bad["reports"]:
        for c in rep["claims"]:
            if c["kind"] == kind and pick(c):
                mutate(c)
                return bad
    pytest.skip(f"no claim of kind {kind}")


@pytest.mark.parametrize("kind,mutate,pick", [
    ("end_clean", lambda c: c.__setitem__("a", [[x + (i == j) for j, x in enumerate(r)]
                                                 for i, r in enumerate(c["a"])]), lambda c: True),
    ("end_exchange", lambda c: c.__setitem__("r", [[0] * len(r) for r in c["r"]]), lambda c: _nonzero(c["e"])),
    ("in_radical", lambda c: c.__setitem__("map", [[1 if i == j else 0 for j in range(len(r))]
                                                   for i, r in enumerate(c["map"])]), lambda c: True),
    ("envelope", lambda c: c.__setitem__("matrix", [[0] * len(r) for r in c["matrix"]]), lambda c: True),
    ("unit_sum", lambda c: c.__setitem__("target", [x + 1 for x in c["target"]]), lambda c: True),
])
def test_recheck_detects_tampering(payload, kind, mutate, pick):
    bad = _tamper(payload, kind, mutate, pick)
    fails = recheck(bad)
    assert len(fails) == 1 and fails[0]["kind"] == kind


def test_recheck_flags_unknown_kind(payload):
    bad = copy.deepcopy(payload)
    bad["reports"][0]["claims"].append({"kind": "nonsense"})
    fails = recheck(bad)
    assert fails and "nonsense" in fails[-1]["reason"]


def test_recheck_rejects_bad_ring_context(payload):
    bad = copy.deepcopy(payload)
    rep = next(r for r in bad["reports"] if r["claims"] and r["context"]["rings"])
    spec = next(iter(rep["context"]["rings"].values()))
    spec["one"] = [0] * len(spec["one"])
    from finring.errors import AxiomViolation
    with pytest.raises(AxiomViolation):
        recheck(bad)


def test_claim_cap():
    r = TheoremSuiteReport("t", {})
    for i in range(CLAIM_CAP + 10):
        r.claim("thing", i=i)
    assert len(r.claims) == CLAIM_CAP
    assert r.claim_counts["thing"] == CLAIM_CAP + 10


def test_verdict_logic():
    r = TheoremSuiteReport("t", {})
    r.check("a", True)
    r.note("size", 3)
    assert r.finish().verdict == VERIFIED
    r = TheoremSuiteReport("t", {})
    r.hypothesis(False, "nope")
    assert r.finish().verdict == NOT_MET
    r = TheoremSuiteReport("t", {})
    r.hypothesis(False, "nope")
    r.check("a", False, {"x": 1})
    assert r.finish().verdict == FALSIFIED
    assert any("failed checks: a" in f for f in r.findings)
    assert summary([r]) == {VERIFIED: 0, NOT_MET: 0, FALSIFIED: 1}


def test_dumps_is_canonical(payload):
    text = dumps(payload["reports"])
    assert json.loads(text) == payload
    assert dumps(json.loads(text)["reports"]) == text
    assert "time" not in text
