"""Finite abelian groups given concretely inside Z_{o_1} x ... x Z_{o_t}.

Every additive group the workbench handles (rings, modules, ideals, hom
groups, quotients) ends up here to be enumerated and split into cyclic
factors, which is what lets the results be packaged back into the
"cyclic orders + structure constants" representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm, prod

import numpy as np

from .errors import InternalAssertion, SizeGuard


def keys(rows: np.ndarray) -> list[bytes]:
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    return [r.tobytes() for r in rows]


def key(row) -> bytes:
    return np.ascontiguousarray(row, dtype=np.int64).tobytes()


def span(gens, orders, limit=None) -> np.ndarray:
    """All Z-combinations of ``gens`` in the product group, sorted lexicographically."""
    orders = np.asarray(orders, dtype=np.int64)
    t = orders.shape[0]
    elems = np.zeros((1, t), dtype=np.int64)
    expo = lcm(*[int(o) for o in orders]) if t else 1
    for g in np.asarray(gens, dtype=np.int64).reshape(-1, t):
        g = g % orders
        if not g.any():
            continue
        mults = [np.zeros(t, dtype=np.int64)]
        cur = g.copy()
        while cur.any() and len(mults) <= expo:
            mults.append(cur)
            cur = (cur + g) % orders
        mults = np.array(mults)
        elems = np.unique(((elems[:, None, :] + mults[None, :, :]) % orders).reshape(-1, t), axis=0)
        if limit is not None and len(elems) > limit:
            raise SizeGuard("group span", len(elems), limit)
    return elems


def sumset(a: np.ndarray, b: np.ndarray, orders) -> np.ndarray:
    orders = np.asarray(orders, dtype=np.int64)
    t = orders.shape[0]
    return np.unique(((a[:, None, :] + b[None, :, :]) % orders).reshape(-1, t), axis=0)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``G/B = <g_1> (+) ... (+) <g_k>`` with ``ord(g_i) = orders[i]``.

    ``elements`` lists the coset representatives of every coefficient vector
    in mixed-radix order (first coordinate most significant), and ``coeffs``
    maps the key of any element of ``G`` to the index of its coset.
    """

    gens: np.ndarray
    orders: tuple
    elements: np.ndarray
    index_of: dict

    def index(self, row) -> int:
        return self.index_of[key(row)]


def _multiples(x, orders, upto):
    out = [np.zeros_like(x)]
    cur = x.copy()
    for _ in range(upto):
        out.append(cur)
        cur = (cur + x) % orders
    return np.array(out)


def coefficient_vectors(orders) -> np.ndarray:
    """All coefficient vectors for cyclic orders, in mixed-radix order."""
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(o, dtype=np.int64) for o in orders], indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


def decompose(elems: np.ndarray, orders, base: np.ndarray | None = None) -> Decomposition:
    """Split ``G/B`` into cyclic factors by greedy maximal-order selection.

    ``elems`` must list the whole subgroup ``G`` and ``base`` (default ``{0}``)
    a subgroup of it.  At each step the element of largest order modulo the
    part already generated is chosen (least such element), then replaced by
    the least member of its coset having that same order modulo ``B``; the
    lifting lemma for finite abelian groups guarantees one exists, and the
    chosen cyclic groups then form a direct sum.
    """
    orders = np.asarray(orders, dtype=np.int64)
    t = orders.shape[0]
    elems = np.asarray(elems, dtype=np.int64).reshape(-1, t)
    if base is None:
        base = np.zeros((1, t), dtype=np.int64)
    base = np.asarray(base, dtype=np.int64).reshape(-1, t)
    n = len(elems)
    if n % len(base):
        raise InternalAssertion("base is not a subgroup of the group")
    quotient_size = n // len(base)
    expo = lcm(*[int(o) for o in orders]) if t else 1
    elem_keys = keys(elems)
    base_keys = set(keys(base))
    # multiples[k, i] = k * elems[i]
    mults = np.stack([(k * elems) % orders for k in range(expo + 1)])
    mult_keys = [keys(mults[k]) for k in range(expo + 1)]

    def rel_orders(member):
        out = np.zeros(n, dtype=np.int64)
        for k in range(1, expo + 1):
            hit = np.array([kk in member for kk in mult_keys[k]])
            out[(out == 0) & hit] = k
        return out

    pos = {k2: i for i, k2 in enumerate(elem_keys)}
    ord_base = rel_orders(base_keys)
    gens, gen_orders = [], []
    current = base.copy()
    cur_keys = set(keys(current))
    while len(current) < n:
        rel = rel_orders(cur_keys)
        m = int(rel.max())
        cand = int(np.flatnonzero(rel == m)[0])
        coset = (elems[cand] + current) % orders
        ck = keys(coset)
        # least element of the coset whose order modulo B equals m
        members = sorted(pos[k2] for k2 in ck)
        pick = next((i for i in members if ord_base[i] == m), None)
        if pick is None:
            raise InternalAssertion("no order-preserving lift in cyclic decomposition")
        g = elems[pick]
        gens.append(g)
        gen_orders.append(m)
        current = sumset(current, _multiples(g, orders, m - 1), orders)
        cur_keys = set(keys(current))
    if prod(gen_orders) != quotient_size:
        raise InternalAssertion("cyclic decomposition is not direct")
    gens_arr = np.array(gens, dtype=np.int64).reshape(len(gens), t)
    coeffs = coefficient_vectors(gen_orders)
    reps = (coeffs @ gens_arr) % orders if gens else np.zeros((1, t), dtype=np.int64)
    index_of = {}
    for i, rep in enumerate(reps):
        for kk in keys((rep + base) % orders):
            index_of[kk] = i
    if len(index_of) != n:
        raise InternalAssertion("cyclic decomposition does not cover the group")
    return Decomposition(gens_arr, tuple(int(o) for o in gen_orders), reps, index_of)
