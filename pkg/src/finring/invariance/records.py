"""Envelope and cover records, Galois groups and the invariance predicates.

Throughout, ``End(X)`` is enumerated as matrices (the full hom group), and
every endomorphism is also kept as an image row over the elements of X so
that subset tests and compositions are plain array lookups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import InternalAssertion, PreconditionViolation
from ..modules.core import FiniteModule, Submodule
from ..modules.homs import ModuleHom, hom_set
from .classes import COVER, ENVELOPE, ModuleClass, get_class
from .perm import RowIndex, greedy_generators, is_closed


class EndMaps:
    """All endomorphisms of a module in lexicographic matrix order, with image rows."""

    CHUNK = 4096

    def __init__(self, M: FiniteModule):
        self.module = M
        if M.m == 0:
            self.matrices = np.zeros((1, 0, 0), dtype=np.int64)
            self.images = np.zeros((1, 1), dtype=np.int64)
        else:
            self.matrices = hom_set(M, M).matrices
            dtype = np.int16 if M.size < 2 ** 15 else np.int64
            parts = []
            for s in range(0, len(self.matrices), self.CHUNK):
                chunk = self.matrices[s:s + self.CHUNK]
                parts.append(M.encode(np.einsum("xg,igh->ixh", M.coords, chunk)).astype(dtype))
            self.images = np.concatenate(parts)
        self.bijective = (self.images[:, 1:] != 0).all(axis=1) if M.size > 1 else np.ones(1, dtype=bool)
        self.index = RowIndex(self.images)

    def __len__(self):
        return len(self.matrices)

    @cached_property
    def automorphisms(self) -> np.ndarray:
        return np.flatnonzero(self.bijective)

    @cached_property
    def identity(self) -> int:
        return self.index.find(np.arange(self.module.size))

    def hom(self, i) -> ModuleHom:
        return ModuleHom(self.module, self.module, self.matrices[int(i)])


_maps_cache: dict = {}


def end_maps(M: FiniteModule) -> EndMaps:
    hit = _maps_cache.get(id(M))
    if hit is not None and hit.module is M:
        return hit
    out = EndMaps(M)
    _maps_cache[id(M)] = out
    return out


@dataclass(frozen=True, eq=False)
class _Record:
    cls: ModuleClass
    module: FiniteModule
    X: FiniteModule
    hom: ModuleHom                  # u: M -> X or p: X -> M
    construction: object = field(repr=False, default=None)

    @property
    def direction(self):
        return self.cls.direction

    @cached_property
    def stable_sub(self) -> Submodule:
        """The submodule of X whose stability defines (co)invariance: Im u or Ker p."""
        return self.hom.image() if self.direction == ENVELOPE else self.hom.kernel()

    @cached_property
    def _lookup(self):
        """Envelope: X index -> M index on Im u.  Cover: least preimage of each M element."""
        if self.direction == ENVELOPE:
            pos = np.full(self.X.size, -1, dtype=np.int64)
            pos[self.hom.table] = np.arange(self.module.size)
            return pos
        pre = np.full(self.module.size, -1, dtype=np.int64)
        table = self.hom.table
        for x in range(self.X.size - 1, -1, -1):
            pre[table[x]] = x
        return pre

    def restrict_rows(self, rows: np.ndarray) -> np.ndarray:
        """For endomorphisms of X (image rows), the induced endomorphisms of M as
        image rows; a row containing -1 marks an endomorphism that does not induce one.

        Envelope: ``f`` with ``u o f = g o u``.  Cover: ``f`` with ``f o p = p o g``.
        """
        rows = np.atleast_2d(rows)
        if self.direction == ENVELOPE:
            return self._lookup[rows[:, self.hom.table]]
        p = self.hom.table
        f = p[rows[:, self._lookup]]
        ok = (f[:, p] == p[rows]).all(axis=1)
        f[~ok] = -1
        return f

    def induced_matrix(self, row) -> np.ndarray | None:
        """Matrix of the endomorphism of M induced by an endomorphism of X (or None)."""
        f = self.restrict_rows(row)[0]
        if (f < 0).any():
            return None
        M = self.module
        gens = [M.elem(v) for v in np.eye(M.m, dtype=np.int64)]
        return M.coords[f[gens]] if M.m else np.zeros((0, 0), dtype=np.int64)


class EnvelopeRecord(_Record):
    """A monic envelope ``u: M -> X``."""


class CoverRecord(_Record):
    """An epic cover ``p: X -> M``."""


_record_cache: dict = {}


def build_record(M: FiniteModule, cls="injective", seed=None) -> _Record:
    """Envelope or cover record; memoised per (module object, class, seed) so that
    the End(X) caches are shared between suites."""
    cls = get_class(cls)
    key = (id(M), cls.name, seed)
    hit = _record_cache.get(key)
    if hit is not None and hit.module is M:
        return hit
    made = cls.construct(M, seed=seed)
    if cls.direction == ENVELOPE:
        rec = EnvelopeRecord(cls, M, made.X, made.u, made)
    else:
        rec = CoverRecord(cls, M, made.X, made.p, made)
    _record_cache[key] = rec
    return rec


# ---- Galois groups ----------------------------------------------------------

@dataclass(frozen=True)
class GaloisData:
    """``group`` holds EndMaps positions (in End(X)) of Gal(u) or coGal(p)."""

    group: tuple
    aut_order: int
    closed: bool
    closure_failure: tuple | None
    delta: dict | None = None       # Aut(X) position -> Aut(M) position (EndMaps of M)
    delta_checks: dict | None = None


def _galois_members(rec: _Record) -> np.ndarray:
    E = end_maps(rec.X)
    aut = E.automorphisms
    rows = E.images[aut]
    t = rec.hom.table
    if rec.direction == ENVELOPE:
        fixed = (rows[:, t] == t[None, :]).all(axis=1)          # g o u = u
    else:
        fixed = (t[rows] == t[None, :]).all(axis=1)             # p o g = p
    return aut[fixed]


def galois_group(rec: _Record) -> GaloisData:
    """``Gal(u) = {g in Aut(X) : g o u = u}``, with subgroup closure verified."""
    if rec.direction != ENVELOPE:
        raise PreconditionViolation("the Galois group is defined for envelopes")
    return _galois(rec)


def cogalois_group(rec: _Record) -> GaloisData:
    """``coGal(p) = {g in Aut(X) : p o g = p}``, with subgroup closure verified."""
    if rec.direction != COVER:
        raise PreconditionViolation("the co-Galois group is defined for covers")
    return _galois(rec)


def _galois(rec):
    E = end_maps(rec.X)
    members = _galois_members(rec)
    closed, fail = is_closed(E.images, members, E.index)
    return GaloisData(tuple(int(m) for m in members), len(E.automorphisms), closed, fail)


# ---- invariance predicates ----------------------------------------------------

@dataclass(frozen=True)
class InvarianceReport:
    holds: bool
    scope: str                      # "automorphism" or "endomorphism"
    checked: int                    # number of maps of X examined
    violation: tuple | None         # (EndMaps position of g, element x of the stable submodule, g(x))
    induced_automorphisms: bool | None = None   # every induced f is bijective (automorphism scope)
    mutual_checks: bool | None = None           # stability <=> restriction <=> equality, per map


def _invariance(rec: _Record, scope: str) -> InvarianceReport:
    E = end_maps(rec.X)
    idx = E.automorphisms if scope == "automorphism" else np.arange(len(E))
    sub = rec.stable_sub
    members = sub.members
    rows = E.images[idx]
    stable = sub.mask[rows[:, members]].all(axis=1)
    violation = None
    if not stable.all():
        i = int(np.argmax(~stable))
        bad = np.flatnonzero(~sub.mask[rows[i, members]])[0]
        x = int(members[bad])
        violation = (int(idx[i]), x, int(rows[i, x]))
    induced_ok = None
    mutual = None
    if scope == "automorphism":
        restricted = rec.restrict_rows(rows)
        extends = (restricted >= 0).all(axis=1)
        # for bijections of X: stable <=> an induced f exists <=> g maps the submodule onto itself
        onto = np.array([len(np.unique(r[members])) == len(members) for r in rows]) & stable
        mutual = bool(np.array_equal(stable, extends) and np.array_equal(stable, onto))
        if stable.all():
            induced_ok = bool((np.sort(restricted, axis=1) == np.arange(rec.module.size)).all())
    return InvarianceReport(bool(stable.all()), scope, len(idx), violation, induced_ok, mutual)


def is_invariant(rec: _Record, scope: str = "automorphism") -> InvarianceReport:
    """Automorphism-/endomorphism-invariance (envelopes) or coinvariance (covers).

    For a monic envelope this is stability of ``Im u`` under every
    automorphism (endomorphism) of X; for an epic cover, stability of
    ``Ker p``.  Both reduce to the factorisation definitions because ``u`` is
    monic and ``p`` is epic.
    """
    if scope not in ("automorphism", "endomorphism"):
        raise ValueError("scope must be 'automorphism' or 'endomorphism'")
    return _invariance(rec, scope)


def is_automorphism_invariant(M, cls="injective"):
    rec = build_record(M, cls)
    _require(rec, ENVELOPE)
    return is_invariant(rec, "automorphism")


def is_endomorphism_invariant(M, cls="injective"):
    rec = build_record(M, cls)
    _require(rec, ENVELOPE)
    return is_invariant(rec, "endomorphism")


def is_automorphism_coinvariant(M, cls="projective"):
    rec = build_record(M, cls)
    _require(rec, COVER)
    return is_invariant(rec, "automorphism")


def is_endomorphism_coinvariant(M, cls="projective"):
    rec = build_record(M, cls)
    _require(rec, COVER)
    return is_invariant(rec, "endomorphism")


def _require(rec, direction):
    if rec.direction != direction:
        raise PreconditionViolation(f"class {rec.cls.name} provides {rec.direction}s, not {direction}s")


# ---- the map Aut(X) -> Aut(M) -------------------------------------------------

def delta_map(rec: _Record) -> GaloisData:
    """Restriction ``Aut(X) -> Aut(M)`` with its homomorphism, surjectivity and kernel checks."""
    inv = is_invariant(rec, "automorphism")
    if not inv.holds:
        raise PreconditionViolation("the module is not automorphism-(co)invariant")
    EX = end_maps(rec.X)
    EM = end_maps(rec.module)
    aut = EX.automorphisms
    restricted = rec.restrict_rows(EX.images[aut])
    target = EM.index.find_many(restricted)
    if (target < 0).any():
        raise InternalAssertion("induced map is not an endomorphism of M")
    delta = dict(zip(aut.tolist(), target.tolist()))
    gal = _galois(rec)
    # homomorphism: delta(g o s) = delta(g) o delta(s) for all g and generators s
    gens = greedy_generators(EX.images, aut, EX.index)
    hom_ok = True
    for s in gens:
        comp = EX.index.find_many(EX.images[aut][:, EX.images[s]])
        lhs = np.array([delta[int(c)] for c in comp])
        rhs = EM.index.find_many(EM.images[target][:, EM.images[delta[int(s)]]])
        if not np.array_equal(lhs, rhs):
            hom_ok = False
            break
    image = set(target.tolist())
    kernel = sorted(int(g) for g, f in delta.items() if f == EM.identity)
    checks = {
        "homomorphism": hom_ok,
        "generators": len(gens),
        "surjective": image == set(EM.automorphisms.tolist()),
        "kernel_is_galois": kernel == list(gal.group),
        "order_identity": len(aut) == len(EM.automorphisms) * len(gal.group),
        "aut_X": len(aut),
        "aut_M": len(EM.automorphisms),
        "galois": len(gal.group),
    }
    return GaloisData(gal.group, gal.aut_order, gal.closed, gal.closure_failure, delta, checks)


def moved_element(rec: _Record, matrix) -> tuple | None:
    """``(x, g(x))`` for the least x of the stable submodule that the endomorphism
    ``g`` (row-vector matrix of X) moves outside it, or None when ``g`` keeps it."""
    X = rec.X
    g = ModuleHom(X, X, np.asarray(matrix, dtype=np.int64), check=True)
    sub = rec.stable_sub
    out = g.table[sub.members]
    bad = np.flatnonzero(~sub.mask[out])
    if not len(bad):
        return None
    return int(sub.members[bad[0]]), int(out[bad[0]])
