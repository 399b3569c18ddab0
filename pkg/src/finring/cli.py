"""Command line front end: ``finring ring|module|check|verify|search|recheck``.

Exit codes: 0 success, 2 malformed input, 3 size guard, 4 a
FALSIFIED verdict or an internal assertion.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import CONVENTIONS, set_guards
from .errors import AxiomViolation, InternalAssertion, SizeGuard, SpecError, WorkbenchError

EXIT_SPEC, EXIT_GUARD, EXIT_FALSIFIED = 2, 3, 4


# ---- argument resolution ---------------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc


def _ring(args):
    from .rings.catalog import ring_by_name
    from .rings.core import build_ring
    spec = getattr(args, "spec", None)
    if spec:
        data = _load_json(spec)
        return build_ring(data["ring"] if "ring" in data and isinstance(data["ring"], dict) else data)
    name = getattr(args, "builtin", None) or getattr(args, "ring", None)
    if not name:
        raise SpecError("give a ring with --builtin/--ring NAME or a spec file")
    return ring_by_name(name)


def _module(args, ring):
    from .modules.catalog import module_from_name
    from .modules.core import build_module
    if getattr(args, "module_spec", None):
        data = _load_json(args.module_spec)
        return build_module(ring, data.get("module", data))
    if not getattr(args, "module", None):
        raise SpecError("give a module with --module NAME or --module-spec FILE")
    return module_from_name(ring, args.module)


class _Out:
    """Collects lines for the terminal and a JSON result for ``--report``."""

    def __init__(self, args):
        self.args = args
        self.result: dict = {}

    def line(self, key, value):
        print(f"{key:<28} {value}")
        self.result[key] = value if isinstance(value, (int, float, str, bool, list, dict, type(None))) else str(value)

    def table(self, header, rows):
        widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
                  for i, h in enumerate(header)]
        print("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))

    def save(self, command):
        if getattr(self.args, "report", None):
            with open(self.args.report, "w") as fh:
                json.dump({"command": command, "result": self.result}, fh, sort_keys=True, indent=1)
                fh.write("\n")


# ---- ring ------------------------------------------------------------------------------------

def cmd_ring(args) -> int:
    from .rings import structure as st
    from .rings.subrings import OWN, SHARED, enumerate_unit_stable_subrings, split_subring, unit_generated_subring
    from .rings.unitsums import sum_of_k_units
    R = _ring(args)
    out = _Out(args)
    sub = args.subcommand
    out.line("ring", R.name)
    out.line("order", R.size)
    if sub in ("build", "info"):
        J = st.jacobson_radical(R)
        out.line("additive orders", list(R.orders))
        out.line("characteristic", R.characteristic)
        out.line("commutative", R.is_commutative)
        out.line("radical order", J.order)
        out.line("regular", st.is_von_neumann_regular(R))
        out.line("units", len(st.units(R)))
        out.line("idempotents", len(st.idempotents(R)))
        z = st.has_Z2_quotient(R)
        out.line("Z2 quotient", "none" if z is None else list(z.character))
        if J.is_zero():
            out.line("blocks (n, q)", [list(b) for b in st.block_signature(R)])
    elif sub == "radical":
        J = st.jacobson_radical(R)
        out.line("radical order", J.order)
        out.line("nilpotency index", st.nilpotency_index(R, J))
        out.line("members", [list(R.coeffs(a)) for a in J.members])
    elif sub == "units":
        U = st.units(R)
        out.line("units", len(U))
        out.line("members", [list(R.coeffs(a)) for a in U.elements])
    elif sub == "wedderburn":
        blocks = st.artin_wedderburn(R)
        out.table(["n", "q", "central idempotent"],
                  [(b.n, b.q, list(R.coeffs(b.central_idempotent))) for b in blocks])
        out.result["blocks"] = [{"n": b.n, "q": b.q, "central_idempotent": list(R.coeffs(b.central_idempotent))}
                                for b in blocks]
    elif sub == "types":
        td = st.type_decomposition(R)
        out.line("e1", list(R.coeffs(td.e1)))
        out.line("T1 order", len(td.t1))
        out.line("T2 order", len(td.t2))
        out.line("two-unit witnesses", len(td.witnesses))
        out.line("blocks (n, q)", [list(b) for b in sorted(td.block_list())])
    elif sub == "unitsum":
        a = R.elem(json.loads(args.element)) if args.element else R.one
        w = sum_of_k_units(R, a, args.k)
        out.line("element", list(R.coeffs(a)))
        out.line("k", args.k)
        out.line("witness", "none" if w is None else [list(R.coeffs(u)) for u in w.summands])
    elif sub == "subrings":
        td = st.type_decomposition(R)
        convs = (SHARED, OWN) if args.convention == "both" else (args.convention,)
        for conv in convs:
            subs = enumerate_unit_stable_subrings(R, conv)
            rows = []
            for S in subs:
                sp = split_subring(S, td.e2)
                rows.append((S.order, sp.regular, sp.eps_central_idempotent, sp.r1_abelian_regular,
                             sp.r2_regular, sp.r2_equals_t2, sp.r2_is_r_cap_t2))
            print(f"[{conv}]")
            out.table(["order", "regular", "central eps", "R1 ab.reg", "R2 reg", "R2=T2", "R2=R^T2"], rows)
            out.result[conv] = [list(r) for r in rows]
        out.line("unit-generated order", unit_generated_subring(R).order)
    out.save(f"ring {sub}")
    return 0


# ---- module ------------------------------------------------------------------------------

def cmd_module(args) -> int:
    from .invariance.records import build_record, cogalois_group, end_maps, galois_group
    from .modules.homs import _invariant_orders, end_ring
    from .modules.injective import is_injective
    from .modules.projective import is_projective
    from .modules.radical import radical, socle
    from .rings.structure import block_signature, jacobson_radical, units
    from .invariance.induced import radical_quotient
    R = _ring(args)
    M = _module(args, R)
    out = _Out(args)
    sub = args.subcommand
    out.line("module", M.name)
    out.line("order", M.size)
    if sub in ("build", "info"):
        out.line("additive orders", list(M.orders))
        out.line("element orders (order, count)", [list(t) for t in _invariant_orders(M)])
        out.line("socle order", socle(M).order)
        out.line("radical order", radical(M).order)
        out.line("injective", is_injective(M))
        out.line("projective", is_projective(M))
    elif sub in ("envelope", "cover"):
        rec = build_record(M, "injective" if sub == "envelope" else "projective", seed=args.seed)
        out.line("X", rec.X.name)
        out.line("X order", rec.X.size)
        out.line("u" if sub == "envelope" else "p", rec.hom.matrix.tolist())
        gd = galois_group(rec) if sub == "envelope" else cogalois_group(rec)
        E = end_maps(rec.X)
        out.line("Gal" if sub == "envelope" else "coGal", [E.matrices[g].tolist() for g in gd.group])
        out.line("|Aut X|", gd.aut_order)
    elif sub == "end":
        E = end_ring(M)
        RQ = radical_quotient(E.ring)
        out.line("|End|", E.ring.size)
        out.line("|J(End)|", RQ.J.order)
        out.line("End/J blocks (n, q)", [list(b) for b in block_signature(RQ.quotient)])
    elif sub == "aut":
        E = end_maps(M)
        out.line("|Aut|", len(E.automorphisms))
        shown = E.automorphisms[: args.limit]
        out.line("automorphisms", [E.matrices[a].tolist() for a in shown])
    out.save(f"module {sub}")
    return 0


# ---- check ---------------------------------------------------------------------------------

_CHECKS = {
    "invariant": ("injective", "automorphism"),
    "endo": ("injective", "endomorphism"),
    "coinvariant": ("projective", "automorphism"),
    "coendo": ("projective", "endomorphism"),
}


def cmd_check(args) -> int:
    from .invariance.classes import get_class
    from .invariance.records import build_record, end_maps, is_invariant
    default_cls, scope = _CHECKS[args.predicate]
    cls = get_class(args.cls or default_cls)
    expected = "envelope" if args.predicate in ("invariant", "endo") else "cover"
    if cls.direction != expected:
        raise SpecError(f"'{args.predicate}' needs a class providing {expected}s; {cls.name} does not")
    R = _ring(args)
    M = _module(args, R)
    rec = build_record(M, cls, seed=args.seed)
    rep = is_invariant(rec, scope)
    out = _Out(args)
    out.line("module", M.name)
    out.line("class", cls.name)
    out.line(f"{scope}-{'invariant' if expected == 'envelope' else 'coinvariant'}", rep.holds)
    out.line("maps checked", rep.checked)
    if rep.violation is not None:
        g, x, gx = rep.violation
        X = rec.X
        out.line("witness g", end_maps(X).matrices[g].tolist())
        out.line("moved element", [list(map(int, X.coords[x])), list(map(int, X.coords[gx]))])
    out.save(f"check {args.predicate}")
    return 0


# ---- verify ---------------------------------------------------------------------------------

SUITE_NAMES = ("section2", "radical", "decomposition", "exchange-clean", "noZ2", "all")
_SUITE_THEOREMS = {
    "radical": ("radical",),
    "decomposition": ("decomposition", "summand-closure"),
    "exchange-clean": ("exchange-clean",),
    "noZ2": ("no-z2", "two-unit"),
    "all": ("envelope-or-cover", "galois", "radical", "decomposition", "summand-closure", "two-unit",
            "exchange-clean", "no-z2"),
}


def _tasks(suite, max_module, max_generators, classes, convention, rings=None, module=None):
    """Canonical task list; each task is a plain tuple so it can cross process boundaries."""
    from .rings.catalog import catalog_data
    groups_ = catalog_data()["groups"]
    tasks = []
    if suite in ("section2", "all") and module is None:
        names = rings or groups_["section2"]
        convs = ("shared-identity", "own-identity") if convention == "both" else (convention,)
        for name in names:
            tasks.append(("section2", name, convs))
        if suite == "all" and not rings:
            for name in groups_["henriksen"]:
                for n in (2, 3, 4):
                    tasks.append(("henriksen", name, n))
    if suite != "section2":
        names = rings or groups_["modules"]
        for name in names:
            tasks.append(("modules", name, max_module, max_generators, tuple(classes), _SUITE_THEOREMS[suite], module))
    return tasks


def _worker_init():
    from .invariance.suites import suite_guards
    set_guards(suite_guards())


def _run_task(task) -> list[dict]:
    from .invariance import suites as S
    from .modules.catalog import module_from_name, module_instances
    from .rings.catalog import ring_by_name
    kind, name = task[0], task[1]
    R = ring_by_name(name)
    if kind == "section2":
        return [r.to_dict() for r in S.verify_section2_suite(R, task[2])]
    if kind == "henriksen":
        return [S.verify_henriksen(R, task[2]).to_dict()]
    _, _, max_module, max_generators, classes, theorems, module = task
    mods = [module_from_name(R, module)] if module else module_instances(R, max_module, max_generators)
    out = []
    for M in mods:
        for cls in classes:
            for th in theorems:
                if th == "envelope-or-cover":
                    out.append(S.verify_minimal_map(M, cls).to_dict())
                else:
                    out.append(S.MODULE_SUITES[th](M, cls).to_dict())
    return out


def run_tasks(tasks, parallel=1) -> list[dict]:
    """Run tasks (in a worker pool when ``parallel > 1``), merging results in task order."""
    if parallel <= 1:
        _worker_init()
        return [r for t in tasks for r in _run_task(t)]
    # split module tasks per ring into one task per (ring, class) for better balance
    with ProcessPoolExecutor(max_workers=parallel, initializer=_worker_init) as pool:
        results = list(pool.map(_run_task, tasks))
    return [r for chunk in results for r in chunk]


def _split_for_pool(tasks):
    out = []
    for t in tasks:
        if t[0] == "modules" and len(t[4]) > 1:
            out += [t[:4] + ((c,),) + t[5:] for c in t[4]]
        else:
            out.append(t)
    return out


def cmd_verify(args) -> int:
    from .invariance.report import dumps, summary, validate
    classes = ("injective", "projective") if args.cls is None else (args.cls,)
    rings = [args.ring] if args.ring else None
    tasks = _tasks(args.suite, args.max_module, args.max_generators, classes, args.convention, rings, args.module)
    if args.parallel > 1:
        # per-class tasks run concurrently, then are interleaved back into the serial order
        split = _split_for_pool(tasks)
        with ProcessPoolExecutor(max_workers=args.parallel, initializer=_worker_init) as pool:
            chunks = list(pool.map(_run_task, split))
        reports = _interleave(tasks, split, chunks)
    else:
        reports = run_tasks(tasks, 1)
    text = dumps(reports)
    validate(text)
    counts = summary(reports)
    _print_summary(reports)
    print(f"verified: {counts['verified']}  hypothesis-not-met: {counts['hypothesis-not-met']}  "
          f"FALSIFIED: {counts['FALSIFIED']}")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return EXIT_FALSIFIED if counts["FALSIFIED"] else 0


def _interleave(tasks, split, chunks):
    """Restore serial order: for module tasks the serial loop is module -> class -> theorem."""
    out = []
    pos = 0
    for t in tasks:
        if t[0] == "modules" and len(t[4]) > 1:
            parts = chunks[pos:pos + len(t[4])]
            pos += len(t[4])
            per = len(t[5])
            n_mod = len(parts[0]) // per
            for i in range(n_mod):
                for p in parts:
                    out += p[i * per:(i + 1) * per]
        else:
            out += chunks[pos]
            pos += 1
    return out


def _print_summary(reports):
    from collections import Counter
    tally = Counter((r["theorem"], r["verdict"]) for r in reports)
    theorems = sorted({t for t, _ in tally})
    rows = [(t, tally[(t, "verified")], tally[(t, "hypothesis-not-met")], tally[(t, "FALSIFIED")]) for t in theorems]
    _Out(argparse.Namespace()).table(["theorem", "verified", "hypothesis-not-met", "FALSIFIED"], rows)
    for r in reports:
        if r["verdict"] == "FALSIFIED":
            print(f"FALSIFIED {r['theorem']} {r['instance']}: {'; '.join(r['findings'])}")


# ---- search / recheck -----------------------------------------------------------------------

def cmd_search(args) -> int:
    from .invariance.report import dumps, validate
    from .invariance.suites import search_counterexamples, suite_guards
    from .rings.catalog import catalog, ring_by_name
    set_guards(suite_guards())
    rings = [ring_by_name(n) for n in args.rings] if args.rings else catalog(args.group)
    classes = ("injective", "projective") if args.cls is None else (args.cls,)
    reports, searched = search_counterexamples(rings, args.max_module, args.max_generators, classes)
    print(f"searched (module, class) pairs: {searched}")
    print(f"findings: {len(reports)}")
    for r in reports:
        print(f"  {r.instance['ring']}  {r.instance['module']}  {r.instance['class']}")
    text = dumps(reports)
    validate(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return 0


def cmd_recheck(args) -> int:
    from .invariance.recheck import count_claims, recheck
    from .invariance.report import validate
    with open(args.path) as fh:
        text = fh.read()
    try:
        validate(text)
    except Exception as exc:            # jsonschema.ValidationError and JSON errors
        raise SpecError(f"report does not match the schema: {exc}") from exc
    failures = recheck(text)
    print(f"claims rechecked: {count_claims(text)}")
    print(f"failures: {len(failures)}")
    for f in failures[:20]:
        print(f"  report {f['report']} ({f['theorem']}) claim {f['claim']} [{f['kind']}]: {f['reason']}")
    return EXIT_FALSIFIED if failures else 0


# ---- parser ------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finring", description="Finite rings and modules workbench.")
    p.add_argument("--guards", help="guard ceilings, e.g. max_end=8192,max_ring=8192")
    sub = p.add_subparsers(dest="command", required=True)

    def ring_args(q):
        q.add_argument("--builtin", "--ring", dest="builtin", help="catalog or parsed ring name, e.g. 'M2(F2)'")
        q.add_argument("--report", help="write a JSON result here")

    r = sub.add_parser("ring", help="ring constructions and structure")
    r.add_argument("subcommand", choices=["build", "info", "radical", "units", "wedderburn", "types", "unitsum",
                                          "subrings"])
    r.add_argument("spec", nargs="?", help="ring spec JSON file")
    ring_args(r)
    r.add_argument("--element", help="coefficient list, e.g. [1,0]")
    r.add_argument("-k", type=int, default=2)
    r.add_argument("--convention", choices=CONVENTIONS, default="both")

    def module_args(q):
        q.add_argument("--ring", required=False)
        q.add_argument("--spec", help="ring spec JSON file")
        q.add_argument("--module", help="module name, e.g. 'Z4 (+) Z4/2'")
        q.add_argument("--module-spec", help="module spec JSON file")
        q.add_argument("--seed", type=int, default=None)
        q.add_argument("--report", help="write a JSON result here")

    m = sub.add_parser("module", help="module constructions")
    m.add_argument("subcommand", choices=["build", "info", "envelope", "cover", "end", "aut"])
    module_args(m)
    m.add_argument("--limit", type=int, default=32, help="automorphisms to print")

    c = sub.add_parser("check", help="invariance predicates")
    c.add_argument("predicate", choices=sorted(_CHECKS))
    module_args(c)
    c.add_argument("--class", dest="cls", choices=["injective", "projective"])

    v = sub.add_parser("verify", help="theorem suites")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.add_argument("--max-module", type=int, default=64)
    v.add_argument("--max-generators", type=int, default=2)
    v.add_argument("--class", dest="cls", choices=["injective", "projective"])
    v.add_argument("--ring", help="restrict to one ring")
    v.add_argument("--module", help="restrict to one module (needs --ring)")
    v.add_argument("--convention", choices=CONVENTIONS, default="both")
    v.add_argument("--parallel", type=int, default=1)
    v.add_argument("--report", help="write the JSON reports here")

    s = sub.add_parser("search", help="automorphism- but not endomorphism-(co)invariant modules")
    s.add_argument("--group", default="search", help="catalog group to search")
    s.add_argument("--rings", nargs="*", help="explicit ring names (overrides --group)")
    s.add_argument("--max-module", type=int, default=16)
    s.add_argument("--max-generators", type=int, default=2)
    s.add_argument("--class", dest="cls", choices=["injective", "projective"])
    s.add_argument("--report")

    k = sub.add_parser("recheck", help="re-verify every witness in a report")
    k.add_argument("path")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"ring": cmd_ring, "module": cmd_module, "check": cmd_check, "verify": cmd_verify,
                "search": cmd_search, "recheck": cmd_recheck}
    try:
        if args.guards:
            from dataclasses import replace
            from .config import guards, parse_override
            set_guards(replace(guards(), **parse_override(args.guards)))
        if getattr(args, "parallel", 1) < 1:
            raise SpecError("--parallel must be >= 1")
        if getattr(args, "module", None) and args.command == "verify" and not args.ring:
            raise SpecError("--module needs --ring")
        return handlers[args.command](args)
    except (SpecError, AxiomViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except SizeGuard as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InternalAssertion as exc:
        print(f"FALSIFIED (internal assertion): {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
