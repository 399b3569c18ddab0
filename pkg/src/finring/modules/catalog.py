"""Module names, spec files and the exhaustive instance lists."""
from __future__ import annotations

import re
from functools import lru_cache

import numpy as np

from ..errors import SpecError
from ..rings.core import FiniteRing
from .core import (FiniteModule, Submodule, direct_sum, enumerate_submodules, generated_submodule,
                   materialize, quotient_module, regular_module)
from .homs import is_isomorphic


def _split_sum(text):
    parts, depth, cur, i = [], 0, "", 0
    while i < len(text):
        ch = text[i]
        if depth == 0 and text.startswith("(+)", i):
            parts.append(cur.strip())
            cur = ""
            i += 3
            continue
        depth += ch in "(["
        depth -= ch in ")]"
        cur += ch
        i += 1
    parts.append(cur.strip())
    return parts


def module_from_name(ring: FiniteRing, name: str) -> FiniteModule:
    """``R`` (regular), ``R/k`` (quotient by ``k R``), ``kR`` (the submodule ``k R``)
    and direct sums ``A (+) B``; ``k`` is an integer multiple of the identity or a
    coefficient tuple such as ``(1,0,1)``."""
    text = name.strip()
    parts = _split_sum(text)
    if len(parts) > 1:
        return direct_sum(*[module_from_name(ring, p) for p in parts], name=text)
    if text.startswith("(") and text.endswith(")") and "," not in text:
        return module_from_name(ring, text[1:-1])
    R = regular_module(ring)
    if text in (ring.name, "R"):
        return FiniteModule(ring, R.orders, R.act, name=text, validate=False)
    m = re.fullmatch(r"(.+)/(\(?[\d,\s]+\)?)", text)
    if m and m.group(1).strip() in (ring.name, "R"):
        a = _ring_element(ring, m.group(2))
        Q, _ = quotient_module(R, generated_submodule(R, [a]), name=text)
        return Q
    m = re.fullmatch(r"(\(?[\d,\s]+\)?)\s*(.+)", text)
    if m and m.group(2).strip() in (ring.name, "R"):
        a = _ring_element(ring, m.group(1))
        S, _ = materialize(generated_submodule(R, [a]), name=text)
        return S
    raise SpecError(f"unrecognised module name {name!r} over {ring.name}")


def _ring_element(ring, text):
    text = text.strip()
    if text.startswith("("):
        vals = [int(v) for v in text.strip("()").split(",") if v.strip()]
        return ring.elem(vals)
    return int(ring.encode(int(text) * np.array(ring.one_vec)))


def from_builtin(ring: FiniteRing, spec: dict, name=None) -> FiniteModule:
    kind = spec.get("kind")
    p = spec.get("params", {})
    if kind == "regular":
        M = regular_module(ring)
    elif kind == "name":
        M = module_from_name(ring, p["name"])
    elif kind == "quotient":
        base = _module_arg(ring, p.get("module", "R"))
        gens = [base.elem(v) for v in p["submodule_generators"]]
        M, _ = quotient_module(base, generated_submodule(base, gens))
    elif kind == "direct_sum":
        M = direct_sum(*[_module_arg(ring, s) for s in p["summands"]])
    else:
        raise SpecError(f"unknown module builtin {kind!r}")
    if name:
        M = FiniteModule(ring, M.orders, M.act, name=name, validate=False)
    return M


def _module_arg(ring, value):
    if isinstance(value, FiniteModule):
        return value
    if isinstance(value, str):
        return module_from_name(ring, value)
    if isinstance(value, dict):
        from .core import build_module
        return build_module(ring, value)
    raise SpecError(f"cannot interpret {value!r} as a module")


def _fmt(vec):
    return "(" + ",".join(str(int(v)) for v in vec) + ")"


def _signature(M):
    from .homs import _invariant_orders
    from .radical import radical, socle
    return (M.size, _invariant_orders(M), socle(M).order, radical(M).order)


@lru_cache(maxsize=None)
def _instances_cached(ring_key, ring, max_order, max_generators):
    R = regular_module(ring)
    reps = []
    buckets: dict = {}
    for t in range(1, max_generators + 1):
        F = direct_sum(*([R] * t), name=f"{ring.name}^{t}") if t > 1 else R
        for K in enumerate_submodules(F):
            if F.size // K.order > max_order or K.order == F.size:
                continue
            gens = [F.coords[int(x)] for x in _generators(F, K)]
            label = f"{F.name}/<{';'.join(_fmt(g) for g in gens)}>" if gens else F.name
            Q, _ = quotient_module(F, K, name=label)
            sig = _signature(Q)
            bucket = buckets.setdefault(sig, [])
            if any(is_isomorphic(Q, other)[0] for other in bucket):
                continue
            bucket.append(Q)
            reps.append((Q.size, t, len(reps), Q))
    reps.sort(key=lambda r: r[:3])
    return tuple(r[3] for r in reps)


def _generators(F, K: Submodule):
    """Least-index module generators of ``K``, chosen greedily."""
    from .core import cyclic_submodule, submodule_sum, zero_submodule
    cur = zero_submodule(F)
    out = []
    for x in K.members:
        if cur.mask[x]:
            continue
        out.append(int(x))
        cur = submodule_sum(cur, cyclic_submodule(F, x))
        if cur.order == K.order:
            break
    return out


def module_instances(ring: FiniteRing, max_order: int = 64, max_generators: int = 2) -> list[FiniteModule]:
    """One representative of every isomorphism class of nonzero modules with at
    most ``max_generators`` generators and order at most ``max_order``, ordered by
    (order, generator count, discovery order)."""
    return list(_instances_cached(ring.fingerprint(), ring, max_order, max_generators))
