"""Command-line interface: outputs, JSON reports and exit codes."""
import json

import pytest

from finring.cli import main
from finring.config import guards, set_guards
from finring.invariance.report import validate


@pytest.fixture(autouse=True)
def _restore_guards():
    old = guards()
    yield
    set_guards(old)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(out):
    rows = {}
    for line in out.splitlines():
        key, _, value = line.partition("  ")
        if value:
            rows[key.strip()] = value.strip()
    return rows


def test_ring_info(capsys):
    code, out, _ = run(capsys, "ring", "info", "--builtin", "M2(F2)")
    f = fields(out)
    assert code == 0
    assert (f["order"], f["radical order"], f["regular"], f["units"]) == ("16", "1", "True", "6")
    assert f["blocks (n, q)"] == "[[2, 2]]"


def test_ring_types(capsys):
    code, out, _ = run(capsys, "ring", "types", "--ring", "F2 x M2(F3)")
    assert code == 0
    assert "81" in out


def test_ring_build_from_file(tmp_path, capsys):
    spec = {"name": "Z3", "additive_orders": [3], "mult_constants": [[[1]]], "one": [1]}
    p = tmp_path / "z3.json"
    p.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "ring", "info", str(p))
    assert code == 0 and fields(out)["order"] == "3"


def test_ring_build_rejects_bad_identity(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"name": "bad", "additive_orders": [2], "mult_constants": [[[1]]], "one": [0]}))
    code, _, err = run(capsys, "ring", "build", str(p))
    assert code == 2 and "identity" in err


def test_malformed_json_is_spec_error(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run(capsys, "ring", "build", str(p))[0] == 2


def test_unknown_ring_is_spec_error(capsys):
    assert run(capsys, "ring", "info", "--ring", "Q8(F7)")[0] == 2


def test_size_guard_exit(capsys):
    code, _, err = run(capsys, "module", "info", "--ring", "M9(F9)")
    assert code == 3 and "size guard" in err


def test_guard_override_triggers_size_guard(capsys):
    code, _, _ = run(capsys, "--guards", "max_ring=8", "ring", "info", "--ring", "M2(F2)")
    assert code == 3


def test_module_envelope(capsys):
    code, out, _ = run(capsys, "module", "envelope", "--ring", "Z4", "--module", "Z4/2")
    f = fields(out)
    assert code == 0
    assert (f["X order"], f["u"], f["Gal"]) == ("4", "[[2]]", "[[[1]], [[3]]]")


def test_check_invariant_reports_witness(capsys):
    code, out, _ = run(capsys, "check", "invariant", "--ring", "Z4", "--module", "Z4 (+) Z4/2",
                       "--class", "injective")
    assert code == 0
    assert "False" in fields(out).values()


def test_check_direction_mismatch(capsys):
    code, _, err = run(capsys, "check", "endo", "--ring", "Z4", "--module", "Z4/2", "--class", "projective")
    assert code == 2 and "envelopes" in err


def test_verify_writes_valid_report(tmp_path, capsys):
    p = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "radical", "--ring", "Z4", "--max-module", "8", "--report", str(p))
    assert code == 0
    assert "FALSIFIED: 0" in out
    validate(p.read_text())
    code, out, _ = run(capsys, "recheck", str(p))
    assert code == 0 and "failures: 0" in out


def test_verify_single_module(capsys):
    code, out, _ = run(capsys, "verify", "noZ2", "--ring", "Z9", "--module", "3Z9", "--class", "injective")
    assert code == 0 and "verified: 2" in out          # no-z2 and two-unit


def test_verify_module_needs_ring(capsys):
    assert run(capsys, "verify", "radical", "--module", "Z4")[0] == 2


def test_recheck_tampered_report_exits_4(tmp_path, capsys):
    p = tmp_path / "r.json"
    run(capsys, "verify", "exchange-clean", "--ring", "Z4", "--module", "Z4", "--class", "injective",
        "--report", str(p))
    data = json.loads(p.read_text())
    claim = next(c for r in data["reports"] for c in r["claims"] if c["kind"] == "end_clean")
    claim["a"] = [[x + (i == j) for j, x in enumerate(row)] for i, row in enumerate(claim["a"])]
    p.write_text(json.dumps(data))
    code, out, _ = run(capsys, "recheck", str(p))
    assert code == 4 and "failures: 1" in out


def test_recheck_rejects_non_report(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"reports": 3}))
    assert run(capsys, "recheck", str(p))[0] == 2


def test_search_semisimple(capsys):
    code, out, _ = run(capsys, "search", "--rings", "F2 x F2", "--max-module", "8")
    assert code == 0 and "findings: 0" in out


def test_parallel_matches_serial(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["verify", "decomposition", "--ring", "UT2(F2)", "--max-module", "16"]
    assert run(capsys, *base, "--report", str(a))[0] == 0
    assert run(capsys, *base, "--parallel", "3", "--report", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
