"""Theorem-suite reports: verdicts, checks and self-contained witness bundles.

Everything in a report is plain JSON: ring and module tables are embedded as
specs, module maps as coefficient matrices and elements as coefficient
tuples, so ``recheck`` can rebuild and verify every claim without any of
the invariance machinery.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

VERIFIED = "verified"
NOT_MET = "hypothesis-not-met"
FALSIFIED = "FALSIFIED"
VERDICTS = (VERIFIED, NOT_MET, FALSIFIED)

CLAIM_CAP = 256         # claims kept per kind; the rest are counted, not serialised


def _plain(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class TheoremSuiteReport:
    theorem: str
    instance: dict
    verdict: str = VERIFIED
    checks: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    claim_counts: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)
    context: dict = field(default_factory=lambda: {"rings": {}, "modules": {}})
    _hypothesis: bool = True

    # ---- building ----------------------------------------------------------
    def _register(self, table: str, name: str, spec: dict) -> str:
        store = self.context[table]
        key, n = name, 1
        while key in store and store[key] != spec:
            n += 1
            key = f"{name}#{n}"
            spec = dict(spec, name=key)
        store[key] = spec
        return key

    def ring(self, R) -> str:
        return self._register("rings", R.name, R.to_spec())

    def module(self, M) -> str:
        spec = dict(M.to_spec(), ring=self.ring(M.ring))
        return self._register("modules", M.name, spec)

    def check(self, name: str, ok, detail=None) -> bool:
        ok = bool(ok)
        self.checks[name] = ok if detail is None else {"holds": ok, "detail": _plain(detail)}
        return ok

    def note(self, name: str, value):
        """Informational value (never affects the verdict)."""
        self.info[name] = _plain(value)

    def claim(self, kind: str, **data):
        n = self.claim_counts.get(kind, 0)
        self.claim_counts[kind] = n + 1
        if n < CLAIM_CAP:
            self.claims.append({"kind": kind, **_plain(data)})

    def hypothesis(self, ok: bool, why: str) -> bool:
        if not ok:
            self._hypothesis = False
            self.findings.append(f"hypothesis not met: {why}")
        return ok

    def finding(self, text: str):
        self.findings.append(text)

    def falsify(self, text: str):
        self.findings.append(f"falsified: {text}")
        self.checks.setdefault("internal", False)

    def finish(self) -> "TheoremSuiteReport":
        failed = [k for k, v in self.checks.items() if _failed(v)]
        if failed:
            self.verdict = FALSIFIED
            self.findings.append("failed checks: " + ", ".join(sorted(failed)))
        elif not self._hypothesis:
            self.verdict = NOT_MET
        else:
            self.verdict = VERIFIED
        return self

    # ---- output --------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "instance": _plain(self.instance),
            "verdict": self.verdict,
            "checks": _plain(self.checks),
            "info": _plain(self.info),
            "claims": self.claims,
            "claim_counts": dict(sorted(self.claim_counts.items())),
            "findings": list(self.findings),
            "context": self.context,
        }


def _failed(v) -> bool:
    if v is False:
        return True
    return isinstance(v, dict) and v.get("holds") is False


def dumps(reports) -> str:
    """Canonical JSON text for a list of reports (sorted keys, fixed separators)."""
    payload = {"format": "finring-report", "version": 1,
               "reports": [r.to_dict() if isinstance(r, TheoremSuiteReport) else r for r in reports]}
    return json.dumps(payload, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def summary(reports) -> dict:
    out = {v: 0 for v in VERDICTS}
    for r in reports:
        d = r.to_dict() if isinstance(r, TheoremSuiteReport) else r
        out[d["verdict"]] += 1
    return out


def schema() -> dict:
    with resources.files("finring").joinpath("data/report.schema.json").open() as fh:
        return json.load(fh)


def validate(payload) -> None:
    """Raise ``jsonschema.ValidationError`` when ``payload`` violates the shipped schema."""
    import jsonschema
    if isinstance(payload, str):
        payload = json.loads(payload)
    jsonschema.validate(payload, schema())
