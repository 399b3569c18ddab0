"""Structural predicates and decompositions of finite rings.

All scans are vectorised over the memoised multiplication table, so they
are exhaustive rather than sampled.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield
from functools import lru_cache

import numpy as np

from ..errors import (InternalAssertion, NotApplicable, NotSemisimple,
                      PreconditionViolation)
from .core import FiniteRing, RingMap, TwoSidedIdeal, corner_ring, is_two_sided_ideal, mask_of


@dataclass(frozen=True, eq=False)
class UnitGroup:
    ring: FiniteRing
    elements: np.ndarray       # sorted indices
    inverse: np.ndarray        # inverse[a] for units, -1 otherwise
    mask: np.ndarray

    def __len__(self):
        return len(self.elements)

    def pairs(self):
        return [(int(a), int(self.inverse[a])) for a in self.elements]


_unit_cache: dict = {}


def units(ring: FiniteRing) -> UnitGroup:
    """Invertible elements with their inverses (one-sided suffices in a finite ring)."""
    key = id(ring)
    hit = _unit_cache.get(key)
    if hit is not None and hit.ring is ring:
        return hit
    hits = ring.table == ring.one
    mask = hits.any(axis=1)
    inv = np.where(mask, hits.argmax(axis=1), -1).astype(np.int64)
    elements = np.flatnonzero(mask)
    ug = UnitGroup(ring, elements, inv, mask)
    _unit_cache[key] = ug
    return ug


def is_unit(ring, a) -> bool:
    return bool(units(ring).mask[a])


def idempotents(ring: FiniteRing) -> np.ndarray:
    t = ring.table
    idx = np.arange(ring.size)
    return np.flatnonzero(t[idx, idx] == idx)


def center(ring: FiniteRing) -> np.ndarray:
    t = ring.table
    b = ring.basis
    return np.flatnonzero((t[:, b] == t[b, :].T).all(axis=1))


def is_central(ring, a) -> bool:
    t = ring.table
    return bool((t[a, ring.basis] == t[ring.basis, a]).all())


def jacobson_radical(ring: FiniteRing) -> TwoSidedIdeal:
    """``{a : 1 - r a`` is a unit for every ``r}``."""
    u = units(ring).mask
    t = ring.table
    good = np.ones(ring.size, dtype=bool)
    step = max(1, 2 ** 22 // ring.size)
    for lo in range(0, ring.size, step):
        good &= u[ring.one_minus[t[lo:lo + step]]].all(axis=0)
    members = np.flatnonzero(good)
    ideal = TwoSidedIdeal(ring, members)
    if not is_two_sided_ideal(ring, members):
        raise InternalAssertion("computed radical is not a two-sided ideal")
    return ideal


def nilpotency_index(ring: FiniteRing, ideal: TwoSidedIdeal) -> int:
    """Least k with I^k = 0 (raises if I is not nilpotent)."""
    t = ring.table
    from .core import additive_closure
    cur = ideal.members
    k = 1
    while not (len(cur) == 1 and cur[0] == 0):
        if k > ring.size:
            raise PreconditionViolation("ideal is not nilpotent")
        cur = additive_closure(ring, np.unique(t[np.ix_(cur, ideal.members)]))
        k += 1
    return k


def quasi_inverses(ring: FiniteRing) -> np.ndarray:
    """``out[a]`` = least x with ``a x a = a``, or -1."""
    t = ring.table
    n = ring.size
    out = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        ok = t[t[a], a] == a
        if ok.any():
            out[a] = int(np.argmax(ok))
    return out


def is_von_neumann_regular(ring: FiniteRing) -> bool:
    return bool((quasi_inverses(ring) >= 0).all())


def is_abelian_regular(ring: FiniteRing) -> bool:
    if not is_von_neumann_regular(ring):
        return False
    cen = mask_of(ring, center(ring))
    return bool(cen[idempotents(ring)].all())


def is_right_self_injective(ring: FiniteRing) -> bool:
    """Baer criterion for the regular right module."""
    from ..modules.injective import is_injective
    from ..modules.core import regular_module
    return is_injective(regular_module(ring))


# ---- Wedderburn -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WedderburnBlock:
    """One simple factor ``c R`` of a semisimple ring together with an explicit
    isomorphism ``model = M_n(F_q) -> c R``."""

    central_idempotent: int
    n: int
    q: int
    model: FiniteRing
    to_ring: np.ndarray           # model index -> ring index
    from_ring: dict               # ring index (in the block) -> model index
    matrix_units: tuple           # matrix_units[i][j] ring index of e_ij
    field_generator: int

    @property
    def members(self):
        return np.sort(self.to_ring)


def _primitive_in_block(ring, block_members, e, q, exclude):
    """Least idempotent f of the simple block with ``|fRf| = q`` orthogonal to
    every idempotent in ``exclude``."""
    t = ring.table
    for f in block_members:
        if f == 0 or t[f, f] != f:
            continue
        if any(t[f, g] != 0 or t[g, f] != 0 for g in exclude):
            continue
        corner = np.unique(t[f][t[:, f]])
        if len(corner) == q:
            return int(f)
    raise InternalAssertion("no primitive idempotent found in a simple block")


def _field_generator(ring, center_members, e, q):
    """Element of the block centre satisfying the stored irreducible polynomial."""
    from .catalog import IRREDUCIBLE
    if q not in IRREDUCIBLE:
        return e
    p, lower = IRREDUCIBLE[q]
    t = ring.table
    d = len(lower)
    for z in center_members:
        # z^d + sum lower[i] z^i == 0 with z^0 = e
        pw = [e]
        for _ in range(d):
            pw.append(int(t[pw[-1], z]))
        acc = ring.coords[pw[d]].copy()
        for i, c in enumerate(lower):
            acc = acc + c * ring.coords[pw[i]]
        if not (acc % ring._ord).any():
            return int(z)
    raise InternalAssertion(f"no root of the field polynomial of F{q} in a block centre")


def artin_wedderburn(ring: FiniteRing) -> list[WedderburnBlock]:
    """Simple blocks of a semisimple ring, each with a verified isomorphism from
    ``M_n(F_q)``; ordered by central idempotent index."""
    return list(_wedderburn_cached(ring))


_aw_cache: dict = {}


def _wedderburn_cached(ring):
    hit = _aw_cache.get(id(ring))
    if hit is not None and hit[0] is ring:
        return hit[1]
    out = _wedderburn(ring)
    _aw_cache[id(ring)] = (ring, out)
    return out


def _wedderburn(ring: FiniteRing):
    from .catalog import field, matrix_ring
    if not jacobson_radical(ring).is_zero():
        raise NotSemisimple(f"{ring.name} has a nonzero Jacobson radical")
    t = ring.table
    cen = center(ring)
    cen_idem = [int(c) for c in cen if t[c, c] == c and c != 0]
    # primitive central idempotents: nonzero central idempotents with no proper central sub-idempotent
    prim = [c for c in cen_idem if not any(d != c and t[c, d] == d for d in cen_idem)]
    blocks = []
    total = np.zeros(ring.k, dtype=np.int64)
    for c in sorted(prim):
        total = (total + ring.coords[c]) % ring._ord
        members = np.unique(t[c])
        block_center = np.array([z for z in cen if t[c, z] == z])
        q = len(block_center)
        n = 1
        while q ** (n * n) < len(members):
            n += 1
        if q ** (n * n) != len(members):
            raise InternalAssertion("block order is not a square power of its centre order")
        prims = []
        for _ in range(n):
            prims.append(_primitive_in_block(ring, members, c, q, prims))
        if int(ring.encode(sum(ring.coords[f] for f in prims))) != c:
            raise InternalAssertion("primitive idempotents do not sum to the block identity")
        units_row = [prims[0]]
        back = [prims[0]]
        for j in range(1, n):
            row = np.unique(t[prims[0]][t[:, prims[j]]])
            col = np.unique(t[prims[j]][t[:, prims[0]]])
            found = None
            for x in row:
                hit = col[t[x, col] == prims[0]]
                if len(hit):
                    found = (int(x), int(hit[0]))
                    break
            if found is None:
                raise InternalAssertion("matrix units could not be completed")
            units_row.append(found[0])
            back.append(found[1])
        # e_ij = e_i0 e_0j; e_jj = e_j0 e_0j is a nonzero idempotent of the field f_j R f_j, hence f_j
        mu = [[int(t[back[i], units_row[j]]) for j in range(n)] for i in range(n)]
        z = _field_generator(ring, block_center, c, q)
        fq = field(q)
        model = fq if n == 1 else matrix_ring(fq, n)
        # image of model basis element E_ij * x^l is e_ij z^l
        zpow = [c]
        for _ in range(fq.k - 1):
            zpow.append(int(t[zpow[-1], z]))
        images = []
        for i in range(n):
            for j in range(n):
                for l in range(fq.k):
                    images.append(int(t[mu[i][j], zpow[l]]))
        img = ring.coords[images]
        to_ring = ring.encode(model.coords @ img)
        # verification: bijective onto the block, unital, multiplicative on basis pairs
        if len(np.unique(to_ring)) != model.size or model.size != len(members):
            raise InternalAssertion("Wedderburn map is not bijective")
        if to_ring[model.one] != c:
            raise InternalAssertion("Wedderburn map is not unital")
        mb = model.basis
        lhs = to_ring[model.table[np.ix_(mb, mb)]]
        rhs = t[np.ix_(to_ring[mb], to_ring[mb])]
        if not np.array_equal(lhs, rhs):
            raise InternalAssertion("Wedderburn map is not multiplicative")
        from_ring = {int(r): i for i, r in enumerate(to_ring)}
        blocks.append(WedderburnBlock(c, n, q, model, to_ring, from_ring,
                                      tuple(tuple(r) for r in mu), z))
    if ring.encode(total) != ring.one:
        raise InternalAssertion("central idempotents do not sum to one")
    return tuple(blocks)


def block_signature(ring) -> list[tuple[int, int]]:
    return sorted((b.n, b.q) for b in artin_wedderburn(ring))


# ---- type decomposition -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class TypeDecomposition:
    ring: FiniteRing
    e1: int
    e2: int
    blocks: tuple
    t1: np.ndarray                 # members of e1 S
    t2: np.ndarray                 # members of e2 S
    witnesses: dict                # s in T2 -> (u1, u1_inv_in_T2, u2, u2_inv_in_T2)

    def block_list(self):
        return [(b.n, b.q) for b in self.blocks]


def corner_units(ring: FiniteRing, e: int):
    """Units of the corner ring ``eRe`` (identity ``e``), as ring indices with inverses."""
    t = ring.table
    members = np.unique(t[e][t[:, e]])
    sub = t[np.ix_(members, members)]
    hits = sub == e
    mask = hits.any(axis=1)
    inv = {int(members[i]): int(members[hits[i].argmax()]) for i in np.flatnonzero(mask)}
    return members, inv


def two_unit_witnesses(ring: FiniteRing, e: int, targets=None) -> dict:
    """For each target in ``eRe`` the least unit ``u1`` of ``eRe`` with
    ``target - u1`` a unit of ``eRe``; targets without a split are omitted."""
    members, inv = corner_units(ring, e)
    unit_list = np.array(sorted(inv), dtype=np.int64)
    is_u = np.zeros(ring.size, dtype=bool)
    is_u[unit_list] = True
    targets = members if targets is None else np.asarray(targets)
    out = {}
    if not len(unit_list):
        return out
    coords = ring.coords
    for s in targets:
        diffs = ring.encode(coords[s] - coords[unit_list])
        ok = is_u[diffs]
        if ok.any():
            i = int(np.argmax(ok))
            u1 = int(unit_list[i])
            u2 = int(diffs[i])
            out[int(s)] = (u1, inv[u1], u2, inv[u2])
    return out


def type_decomposition(ring: FiniteRing, check_injective: bool = True) -> TypeDecomposition:
    """Split a regular self-injective ring into its abelian part (field blocks)
    and the part made of matrix blocks of size >= 2, witnessing every element
    of the latter as a sum of two units."""
    if not is_von_neumann_regular(ring):
        raise NotApplicable(f"{ring.name} is not von Neumann regular")
    if check_injective and not is_right_self_injective(ring):
        raise NotApplicable(f"{ring.name} is not right self-injective")
    blocks = artin_wedderburn(ring)
    t = ring.table
    e1v = np.zeros(ring.k, dtype=np.int64)
    for b in blocks:
        if b.n == 1:
            e1v = e1v + ring.coords[b.central_idempotent]
    e1 = int(ring.encode(e1v))
    e2 = int(ring.one_minus[e1])
    t1 = np.unique(t[e1])
    t2 = np.unique(t[e2])
    witnesses = {}
    if e2 != 0:
        witnesses = two_unit_witnesses(ring, e2)
        if len(witnesses) != len(t2):
            missing = sorted(set(t2.tolist()) - set(witnesses))
            raise InternalAssertion(f"T2 elements without a two-unit split: {missing[:5]}")
    td = TypeDecomposition(ring, e1, e2, tuple(blocks), t1, t2, witnesses)
    _check_type_decomposition(td)
    return td


def _check_type_decomposition(td: TypeDecomposition):
    ring, t = td.ring, td.ring.table
    if t[td.e1, td.e1] != td.e1 or t[td.e1, td.e2] != 0 or not is_central(ring, td.e1):
        raise InternalAssertion("type decomposition idempotent is not central")
    idem = [int(f) for f in td.t1 if t[f, f] == f]
    if idem and not (t[np.ix_(idem, td.t1)] == t[np.ix_(td.t1, idem)].T).all():
        raise InternalAssertion("T1 has a non-central idempotent")
    for s, (u1, v1, u2, v2) in td.witnesses.items():
        if ring.add(u1, u2) != s or t[u1, v1] != td.e2 or t[u2, v2] != td.e2:
            raise InternalAssertion(f"two-unit witness for {s} does not verify")


# ---- idempotents modulo nil ideals -----------------------------------------

def lift_idempotent(ring: FiniteRing, x: int, ideal: TwoSidedIdeal | None = None):
    """Idempotent ``e`` congruent to ``x`` modulo a nil ideal (default J).

    Iterates ``x <- 3x^2 - 2x^3``; returns ``(e, steps)`` where ``steps`` counts
    iterations that changed the element.
    """
    if ideal is None:
        ideal = jacobson_radical(ring)
    t = ring.table
    x = int(x)
    if ring.sub(t[x, x], x) not in ideal:
        raise PreconditionViolation(f"x^2 - x is not in the ideal for x={ring.coeffs(x)}")
    steps = 0
    for _ in range(ring.size + 1):
        x2 = int(t[x, x])
        if x2 == x:
            return x, steps
        x3 = int(t[x2, x])
        x = int(ring.encode(3 * ring.coords[x2] - 2 * ring.coords[x3]))
        steps += 1
    raise InternalAssertion("idempotent lifting did not stabilise")


# ---- exchange and clean -------------------------------------------------------

def principal_right_ideal_masks(ring: FiniteRing) -> np.ndarray:
    """``M[a, y]`` is True when ``y`` lies in ``aR``."""
    n = ring.size
    m = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), n)
    m[rows, ring.table.reshape(-1)] = True
    return m


def exchange_witnesses(ring: FiniteRing) -> np.ndarray:
    """``w[a]`` = least idempotent ``e`` in ``aR`` with ``1 - e`` in ``(1 - a)R``, or -1."""
    n = ring.size
    idem = idempotents(ring)
    m = principal_right_ideal_masks(ring)
    om = ring.one_minus
    ok = m[:, idem] & m[om][:, om[idem]]
    return np.where(ok.any(axis=1), idem[ok.argmax(axis=1)], -1)


def is_exchange_ring(ring: FiniteRing) -> bool:
    return bool((exchange_witnesses(ring) >= 0).all())


def clean_witnesses(ring: FiniteRing) -> np.ndarray:
    """``w[a]`` = least idempotent ``e`` with ``a - e`` a unit, or -1."""
    idem = idempotents(ring)
    u = units(ring).mask
    diffs = ring.encode(ring.coords[:, None, :] - ring.coords[idem][None, :, :])
    ok = u[diffs]
    return np.where(ok.any(axis=1), idem[ok.argmax(axis=1)], -1)


def clean_decomposition(ring: FiniteRing, a: int):
    """``(e, u)`` with ``e`` idempotent, ``u`` a unit and ``e + u = a``; None if ``a`` is not clean."""
    idem = idempotents(ring)
    u = units(ring).mask
    for e in idem:
        d = int(ring.sub(a, e))
        if u[d]:
            return int(e), d
    return None


def is_clean_ring(ring: FiniteRing) -> bool:
    return bool((clean_witnesses(ring) >= 0).all())


def idempotents_lift(ring: FiniteRing) -> bool:
    """Every idempotent of ``R/J`` is the image of an idempotent of ``R``."""
    from .core import quotient_ring
    J = jacobson_radical(ring)
    if J.is_zero():
        return True
    q, proj = quotient_ring(ring, J)
    images = set(proj.table[idempotents(ring)].tolist())
    return set(idempotents(q).tolist()) <= images


# ---- homomorphisms onto Z_2 ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class Z2Quotient:
    character: tuple               # coefficients c_i with chi(b_i) = c_i mod 2
    kernel: TwoSidedIdeal


def z2_characters(ring: FiniteRing) -> list[tuple]:
    """All ring homomorphisms onto Z_2, as coefficient tuples, least first."""
    even = [i for i, d in enumerate(ring.orders) if d % 2 == 0]
    if not even:
        return []
    k = ring.k
    out = []
    one = np.array(ring.one_vec)
    c = ring.consts
    for bits in range(1, 2 ** len(even)):
        chi = np.zeros(k, dtype=np.int64)
        for pos, i in enumerate(even):
            if bits >> pos & 1:
                chi[i] = 1
        if int(one @ chi) % 2 != 1:
            continue
        prod_vals = (c @ chi) % 2
        if np.array_equal(prod_vals, np.outer(chi, chi) % 2):
            out.append(tuple(int(v) for v in chi))
    return sorted(out)


def has_Z2_quotient(ring: FiniteRing):
    """``Z2Quotient`` for the least character, or None."""
    chars = z2_characters(ring)
    if not chars:
        return None
    chi = np.array(chars[0])
    members = np.flatnonzero((ring.coords @ chi) % 2 == 0)
    ideal = TwoSidedIdeal(ring, members)
    if not is_two_sided_ideal(ring, members):
        raise InternalAssertion("kernel of a Z_2 character is not an ideal")
    return Z2Quotient(tuple(chars[0]), ideal)
