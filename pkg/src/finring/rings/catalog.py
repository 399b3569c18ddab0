"""Standard constructions and the shipped ring catalog."""
from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from itertools import product as iproduct

import numpy as np

from ..errors import AxiomViolation, InternalAssertion, SpecError
from .core import FiniteRing, TwoSidedIdeal, ideal_generated
from .core import quotient_ring as _quotient_ring

# monic irreducible polynomials, low degree first (coefficients of x^0..x^{d-1}; x^d implied)
IRREDUCIBLE = {
    4: (2, (1, 1)),       # x^2 + x + 1
    8: (2, (1, 1, 0)),    # x^3 + x + 1
    9: (3, (1, 0)),       # x^2 + 1
}


def _checked(make):
    try:
        return make()
    except AxiomViolation as exc:
        raise InternalAssertion(f"catalog constructor produced an invalid ring: {exc}") from exc


def cyclic_ring(n: int) -> FiniteRing:
    if n < 2:
        raise SpecError("Z_n needs n >= 2")
    return _checked(lambda: FiniteRing(f"Z{n}", [n], [[[1]]], [1], ["1"]))


def polynomial_quotient(base: int, lower: tuple, name=None) -> FiniteRing:
    """``Z_base[x]/(x^d - sum lower[i] x^i)`` for the monic polynomial with
    lower coefficients ``lower`` written as ``x^d + lower[d-1] x^{d-1} + ... + lower[0]``."""
    d = len(lower)
    if d < 1:
        raise SpecError("polynomial degree must be >= 1")
    # x^d = -sum lower[i] x^i
    red = [(-c) % base for c in lower]
    powers = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(2 * d - 1):
        powers.append(cur[:])
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [(cur[i] + top * red[i]) % base for i in range(d)]
    consts = [[powers[i + j] for j in range(d)] for i in range(d)]
    one = [1] + [0] * (d - 1)
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, d)]
    return _checked(lambda: FiniteRing(name or f"Z{base}[x]/(deg {d})", [base] * d, consts, one, labels))


def field(q: int) -> FiniteRing:
    if q in (2, 3, 5, 7):
        r = cyclic_ring(q)
        return FiniteRing(f"F{q}", r.orders, r.consts, r.one_vec, ["1"])
    if q not in IRREDUCIBLE:
        raise SpecError(f"field of order {q} not in the catalog (have 2, 3, 4, 5, 7, 8, 9)")
    p, lower = IRREDUCIBLE[q]
    return polynomial_quotient(p, lower, name=f"F{q}")


def _relabel(ring, name):
    return FiniteRing(name, ring.orders, ring.consts, ring.one_vec, ring.basis_labels, validate=False)


def matrix_ring(base: FiniteRing, n: int, upper=False, name=None) -> FiniteRing:
    """``M_n(base)`` (or upper triangular matrices); basis ``E_ij * b_l``."""
    if n < 1:
        raise SpecError("matrix size must be >= 1")
    cells = [(i, j) for i in range(n) for j in range(n) if not upper or i <= j]
    k = base.k
    pos = {(c, l): t for t, (c, l) in enumerate(iproduct(cells, range(k)))}
    K = len(pos)
    consts = np.zeros((K, K, K), dtype=np.int64)
    for ((i, j), l), a in pos.items():
        for ((j2, m), l2), b in pos.items():
            if j != j2:
                continue
            for t in range(k):
                consts[a, b, pos[((i, m), t)]] = base.consts[l, l2, t]
    one = np.zeros(K, dtype=np.int64)
    for i in range(n):
        for t in range(k):
            one[pos[((i, i), t)]] = base.one_vec[t]
    orders = [base.orders[l] for (_, l) in pos]
    labels = [f"E{i + 1}{j + 1}*{base.basis_labels[l]}" if k > 1 else f"E{i + 1}{j + 1}" for ((i, j), l) in pos]
    tag = "UT" if upper else "M"
    return _checked(lambda: FiniteRing(name or f"{tag}{n}({base.name})", orders, consts, one, labels))


def upper_triangular_ring(base: FiniteRing, n: int, name=None) -> FiniteRing:
    return matrix_ring(base, n, upper=True, name=name)


def product_ring(*factors: FiniteRing, name=None) -> FiniteRing:
    if not factors:
        raise SpecError("product of no rings")
    K = sum(f.k for f in factors)
    consts = np.zeros((K, K, K), dtype=np.int64)
    one, orders, labels = [], [], []
    off = 0
    for idx, f in enumerate(factors):
        consts[off:off + f.k, off:off + f.k, off:off + f.k] = f.consts
        one += list(f.one_vec)
        orders += list(f.orders)
        labels += [f"{lab}@{idx}" for lab in f.basis_labels]
        off += f.k
    return _checked(lambda: FiniteRing(name or " x ".join(f.name for f in factors), orders, consts, one, labels))


def group_algebra(base: FiniteRing, group_orders, name=None) -> FiniteRing:
    """``base[G]`` for the abelian group ``G = Z_{g_1} x ... x Z_{g_r}``."""
    group_orders = tuple(int(g) for g in group_orders)
    elems = list(iproduct(*[range(g) for g in group_orders]))
    gpos = {g: i for i, g in enumerate(elems)}
    k = base.k
    K = len(elems) * k
    consts = np.zeros((K, K, K), dtype=np.int64)
    for g, a in gpos.items():
        for h, b in gpos.items():
            gh = gpos[tuple((x + y) % o for x, y, o in zip(g, h, group_orders))]
            consts[a * k:(a + 1) * k, b * k:(b + 1) * k, gh * k:(gh + 1) * k] = base.consts
    one = np.zeros(K, dtype=np.int64)
    one[:k] = base.one_vec
    orders = list(base.orders) * len(elems)
    gname = "x".join(f"C{g}" for g in group_orders)
    labels = [f"g{''.join(map(str, g))}*{lab}" for g in elems for lab in base.basis_labels]
    return _checked(lambda: FiniteRing(name or f"{base.name}[{gname}]", orders, consts, one, labels))


def quotient_ring(ring: FiniteRing, ideal, name=None) -> FiniteRing:
    """``R/I`` where ``ideal`` is a TwoSidedIdeal or a list of generators (indices)."""
    if not isinstance(ideal, TwoSidedIdeal):
        ideal = ideal_generated(ring, ideal)
    q, _ = _quotient_ring(ring, ideal)
    return _relabel(q, name or f"{ring.name}/I")


# ---- names ----------------------------------------------------------------

def _split_top(text, sep):
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append(cur)
            cur = ""
            i += len(sep)
            continue
        cur += ch
        i += 1
    parts.append(cur)
    return [p.strip() for p in parts]


def _parse_poly(text, modulus):
    """Monic polynomial text like ``x^2+x+1`` -> lower coefficient tuple."""
    terms = re.findall(r"([+-]?)\s*(\d*)\s*(x(?:\^(\d+))?)?", text.replace(" ", ""))
    coeffs = {}
    for sign, num, xpart, exp in terms:
        if not num and not xpart:
            continue
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if xpart else 0
        coeffs[e] = coeffs.get(e, 0) + c
    deg = max(coeffs)
    if coeffs[deg] % modulus != 1:
        raise SpecError(f"polynomial {text!r} must be monic")
    return tuple(coeffs.get(i, 0) % modulus for i in range(deg))


@lru_cache(maxsize=None)
def from_name(name: str) -> FiniteRing:
    """Parse catalog names such as ``Z4``, ``F9``, ``M2(F3)``, ``UT2(F2)``,
    ``F2[x]/(x^2)``, ``F2[C2xC2]`` and products ``F2 x M2(F3)``."""
    text = name.strip()
    parts = _split_top(text, " x ")
    if len(parts) > 1:
        return product_ring(*[from_name(p) for p in parts], name=text)
    m = re.fullmatch(r"Z(\d+)", text)
    if m:
        return cyclic_ring(int(m.group(1)))
    m = re.fullmatch(r"F(\d+)", text)
    if m:
        return field(int(m.group(1)))
    m = re.fullmatch(r"(M|UT)(\d+)\((.+)\)", text)
    if m:
        return matrix_ring(from_name(m.group(3)), int(m.group(2)), upper=m.group(1) == "UT", name=text)
    m = re.fullmatch(r"([ZF])(\d+)\[x\]/\((.+)\)", text)
    if m:
        p = int(m.group(2))
        return polynomial_quotient(p, _parse_poly(m.group(3), p), name=text)
    m = re.fullmatch(r"(.+)\[((?:C\d+x?)+)\]", text)
    if m:
        gorders = [int(g) for g in re.findall(r"C(\d+)", m.group(2))]
        return group_algebra(from_name(m.group(1)), gorders, name=text)
    raise SpecError(f"unrecognised ring name {name!r}")


def _ring_arg(value):
    if isinstance(value, FiniteRing):
        return value
    if isinstance(value, str):
        return from_name(value)
    if isinstance(value, dict):
        from .core import build_ring
        return build_ring(value)
    raise SpecError(f"cannot interpret {value!r} as a ring")


def from_builtin(spec: dict, name=None) -> FiniteRing:
    """Construct from ``{"kind": ..., "params": {...}}``."""
    kind = spec.get("kind")
    p = spec.get("params", {})
    try:
        if kind == "name":
            r = from_name(p["name"])
        elif kind == "cyclic":
            r = cyclic_ring(int(p["n"]))
        elif kind == "field":
            r = field(int(p["q"]))
        elif kind == "matrix":
            r = matrix_ring(_ring_arg(p["ring"]), int(p["n"]))
        elif kind == "upper_triangular":
            r = upper_triangular_ring(_ring_arg(p["ring"]), int(p["n"]))
        elif kind == "product":
            r = product_ring(*[_ring_arg(f) for f in p["factors"]])
        elif kind == "polynomial_quotient":
            r = polynomial_quotient(int(p["modulus"]), tuple(p["lower_coefficients"]))
        elif kind == "group_algebra":
            r = group_algebra(_ring_arg(p["ring"]), p["group"])
        elif kind == "quotient":
            base = _ring_arg(p["ring"])
            gens = [base.elem(v) for v in p["ideal_generators"]]
            r = quotient_ring(base, gens)
        else:
            raise SpecError(f"unknown builtin kind {kind!r}")
    except KeyError as exc:
        raise SpecError(f"builtin {kind!r} missing parameter {exc}") from exc
    return _relabel(r, name) if name else r


@lru_cache(maxsize=None)
def catalog_data() -> dict:
    with resources.files("finring").joinpath("data/catalog.json").open() as fh:
        return json.load(fh)


def catalog(group: str = "all") -> list[FiniteRing]:
    """Rings of a named catalog group, in catalog order."""
    data = catalog_data()
    if group not in data["groups"]:
        raise SpecError(f"unknown catalog group {group!r}")
    return [ring_by_name(n) for n in data["groups"][group]]


def ring_by_name(name: str) -> FiniteRing:
    for entry in catalog_data()["rings"]:
        if entry["name"] == name:
            if "builtin" in entry:
                return from_builtin(entry["builtin"], name=name)
            from .core import build_ring
            return build_ring(entry)
    return from_name(name)
