"""Subrings generated by units and subrings stable under left multiplication by units."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import guards
from ..errors import InternalAssertion
from .core import FiniteRing, additive_closure, subring
from .structure import is_abelian_regular, is_von_neumann_regular, units

SHARED = "shared-identity"
OWN = "own-identity"


@dataclass(frozen=True, eq=False)
class Subring:
    parent: FiniteRing
    members: np.ndarray           # sorted parent indices
    one: int | None               # identity of the subring (parent index), None if it has none

    @property
    def order(self):
        return len(self.members)

    def ring(self, name=None) -> FiniteRing:
        if self.one is None:
            raise InternalAssertion("subring without identity cannot be materialised")
        return subring(self.parent, self.members, self.one, name)[0]


def unit_generated_subring(S: FiniteRing) -> Subring:
    """Additive closure of the unit group; closed under products because units are."""
    members = additive_closure(S, units(S).elements)
    t = S.table
    mask = np.zeros(S.size, dtype=bool)
    mask[members] = True
    if not mask[t[np.ix_(members, members)]].all():
        raise InternalAssertion("sums of units are not closed under multiplication")
    return Subring(S, members, S.one)


def _closure(S: FiniteRing, mask: np.ndarray, unit_elems) -> np.ndarray:
    """Least subset containing ``mask`` closed under +, x and left multiplication by units."""
    t = S.table
    mask = mask.copy()
    mask[0] = True
    while True:
        cur = np.flatnonzero(mask)
        nxt = np.zeros_like(mask)
        nxt[additive_closure(S, cur)] = True
        m = np.flatnonzero(nxt)
        nxt[t[np.ix_(m, m)].reshape(-1)] = True
        nxt[t[np.ix_(unit_elems, m)].reshape(-1)] = True
        if (nxt == mask).all():
            return mask
        mask = nxt


def subring_identity(S: FiniteRing, members) -> int | None:
    """Least element acting as a two-sided identity on ``members``."""
    t = S.table
    for e in members:
        if (t[e, members] == members).all() and (t[members, e] == members).all():
            return int(e)
    return None


_closed_cache: dict = {}


def _closed_subsets(S: FiniteRing) -> dict:
    """Every subset closed under +, x and left multiplication by units, keyed by mask bytes."""
    hit = _closed_cache.get(id(S))
    if hit is not None and hit[0] is S:
        return hit[1]
    U = units(S).elements
    start = _closure(S, np.zeros(S.size, dtype=bool), U)
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for mask in frontier:
            for x in np.flatnonzero(~mask):
                grown = mask.copy()
                grown[x] = True
                grown = _closure(S, grown, U)
                key = grown.tobytes()
                if key not in seen:
                    seen[key] = grown
                    nxt.append(grown)
        frontier = nxt
    _closed_cache[id(S)] = (S, seen)
    return seen


def enumerate_unit_stable_subrings(S: FiniteRing, convention: str = OWN) -> list[Subring]:
    """Every subring ``R`` with ``u R`` inside ``R`` for all units ``u`` of ``S``.

    Closed subsets are found by breadth-first adjunction of single elements to
    already closed subsets, starting from ``{0}``; every closed subset is
    reached because adjoining its elements one at a time stays inside it.
    ``shared-identity`` keeps those containing ``1_S``; ``own-identity`` keeps
    the nonzero ones that have some identity element of their own.
    """
    guards().check(f"unit-stable subring search in {S.name}", S.size, "max_subring_search")
    if convention not in (SHARED, OWN):
        raise ValueError(f"convention must be {SHARED!r} or {OWN!r}")
    U = units(S).elements
    seen = _closed_subsets(S)
    out = []
    for mask in seen.values():
        members = np.flatnonzero(mask)
        if convention == SHARED:
            if not mask[S.one]:
                continue
            one = S.one
        else:
            if len(members) == 1:
                continue
            one = subring_identity(S, members)
            if one is None:
                continue
        out.append(Subring(S, members, one))
    out.sort(key=lambda r: (r.order, r.members.tolist()))
    for r in out:
        if not np.isin(S.table[np.ix_(U, r.members)], r.members).all():
            raise InternalAssertion("enumerated subring is not unit-stable")
    return out


@dataclass(frozen=True)
class SubringSplit:
    """``R = R1 x R2`` with ``eps`` central in ``R``, ``R2 = eps R`` and ``R1 = (1_R - eps) R``."""

    eps: int
    regular: bool
    eps_central_idempotent: bool
    r1_abelian_regular: bool
    r2_regular: bool
    r2_equals_t2: bool
    r2_is_r_cap_t2: bool           # R2 = R meet T2, the identity-independent form of the T2 claim
    r1_members: tuple
    r2_members: tuple


def split_subring(R: Subring, e2: int) -> SubringSplit:
    """Split a unit-stable subring along the idempotent ``e2`` of the type decomposition of its parent."""
    S = R.parent
    t = S.table
    members = R.members
    one = R.one
    eps = int(t[one, e2])
    inside = bool(np.isin(eps, members))
    idem = bool(t[eps, eps] == eps)
    central = inside and idem and bool((t[eps, members] == t[members, eps]).all())
    ring = R.ring()
    regular = is_von_neumann_regular(ring)
    r2 = np.unique(t[eps, members])
    comp = int(S.sub(one, eps))
    r1 = np.unique(t[comp, members])

    def part_ok(part, ident, abelian):
        if len(part) == 1:
            return True                 # the zero factor is allowed on either side
        sub = subring(S, part, ident)[0]
        return is_abelian_regular(sub) if abelian else is_von_neumann_regular(sub)

    r1_ok = central and part_ok(r1, comp, True)
    r2_ok = central and part_ok(r2, eps, False)
    t2 = np.unique(t[e2])
    cap = np.intersect1d(members, t2)
    return SubringSplit(eps, regular, central, r1_ok, r2_ok, bool(np.array_equal(r2, t2)),
                        bool(np.array_equal(r2, cap)),
                        tuple(int(x) for x in r1), tuple(int(x) for x in r2))
