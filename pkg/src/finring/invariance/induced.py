"""The ring map ``End(M) -> End(X)/J(End(X))`` induced by an envelope or cover.

Each ``f`` in End(M) is extended to some ``g`` in End(X) (``g u = u f`` for
envelopes, ``p g = f p`` for covers); ``phi(f)`` is the class of ``g``.
Nothing about the extension is assumed: the extension set is solved as an
affine system, the J-coset coherence is tested, and the ring-map axioms are
checked on the tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import CoherenceFailure, ExtensionNotFound, InternalAssertion
from ..modules.core import FiniteModule
from ..modules.homs import EndRing, HomSystem, affine_homs, end_ring
from ..rings.core import FiniteRing, RingMap, TwoSidedIdeal, quotient_ring
from ..rings.structure import jacobson_radical
from .classes import ENVELOPE


def _generator_elems(M: FiniteModule) -> np.ndarray:
    return np.array([M.elem(v) for v in np.eye(M.m, dtype=np.int64)], dtype=np.int64)


def rows_to_end(E: EndRing, rows: np.ndarray) -> np.ndarray:
    """EndRing indices of the endomorphisms given by image rows (-1 rows are invalid)."""
    M = E.module
    rows = np.atleast_2d(rows)
    mats = M.coords[rows[:, _generator_elems(M)]]
    return E.index_many(mats)


@dataclass(frozen=True, eq=False)
class RadicalQuotient:
    """``E / J(E)`` with its projection; ``lift[q]`` is the least preimage of ``q``."""

    ring: FiniteRing
    J: TwoSidedIdeal
    quotient: FiniteRing
    proj: RingMap

    @cached_property
    def lift(self) -> np.ndarray:
        out = np.full(self.quotient.size, -1, dtype=np.int64)
        p = self.proj.table
        out[p[::-1]] = np.arange(self.ring.size)[::-1]
        return out


_rq_cache: dict = {}


def radical_quotient(ring: FiniteRing) -> RadicalQuotient:
    hit = _rq_cache.get(id(ring))
    if hit is not None and hit.ring is ring:
        return hit
    J = jacobson_radical(ring)
    q, proj = quotient_ring(ring, J)
    out = RadicalQuotient(ring, J, q, proj)
    _rq_cache[id(ring)] = out
    return out


@dataclass(frozen=True, eq=False)
class InducedRingMap:
    record: object
    EM: EndRing
    EX: EndRing
    QX: RadicalQuotient
    extension: np.ndarray          # End(M) index -> one extension (End(X) index)
    phi: np.ndarray                # End(M) index -> End(X)/J index
    K: TwoSidedIdeal               # kernel of phi
    ambiguity: np.ndarray          # End(X) indices h with h u = 0 (resp. p h = 0)
    checks: dict

    @property
    def psi_image(self) -> np.ndarray:
        return np.unique(self.phi)

    @property
    def psi_surjective(self) -> bool:
        return len(self.psi_image) == self.QX.quotient.size


def _extension_system(rec, F: np.ndarray) -> HomSystem:
    X, M = rec.X, rec.module
    sys = HomSystem(X, X)
    if rec.direction == ENVELOPE:
        U = rec.hom.matrix
        target = X.reduce(F @ U)                                     # u o f as a matrix M -> X
        for g in range(M.m):
            sys.add_left_value(U[g], target[g])
    else:
        P = rec.hom.matrix
        sys.add_post(P, M.orders, M.reduce(P @ F))                   # f o p
    return sys


def _extends(rec, F: np.ndarray, G: np.ndarray) -> bool:
    """Direct check of ``g u = u f`` (resp. ``p g = f p``) on matrices."""
    X, M = rec.X, rec.module
    if rec.direction == ENVELOPE:
        U = rec.hom.matrix
        return bool(np.array_equal(X.reduce(U @ G), X.reduce(F @ U)))
    P = rec.hom.matrix
    return bool(np.array_equal(M.reduce(G @ P), M.reduce(P @ F)))


def induced_map(rec) -> InducedRingMap:
    """Construct and check ``phi``, ``K`` and ``Psi`` for an envelope or cover record."""
    M, X = rec.module, rec.X
    EM, EX = end_ring(M), end_ring(X)
    QX = radical_quotient(EX.ring)
    RM = EM.ring
    # one extension per additive generator, combined linearly for every f
    basis_ext = []
    for b in RM.basis:
        F = EM.matrices[b]
        sol = _extension_system(rec, F).solve()
        if sol is None:
            raise ExtensionNotFound(f"endomorphism {F.tolist()} of {M.name} does not extend")
        G = sol[0]
        if not _extends(rec, F, G):
            raise InternalAssertion("solved extension fails the factorisation check")
        basis_ext.append(G)
    coeffs = RM.coords
    Gs = np.tensordot(coeffs, np.array(basis_ext), axes=(1, 0)) if RM.k else np.zeros((1, X.m, X.m), dtype=np.int64)
    ext = EX.index_many(Gs)
    if (ext < 0).any():
        raise InternalAssertion("combined extension is not an endomorphism of X")
    bad = [i for i in range(RM.size) if not _extends(rec, EM.matrices[i], EX.matrices[ext[i]])]
    if bad:
        raise ExtensionNotFound(f"combined extension fails for End(M) element {bad[0]}")
    # all extensions of f form ext[f] + Z; coherence means Z inside J(End X)
    zero = _extension_system(rec, np.zeros((M.m, M.m), dtype=np.int64))
    Z = EX.index_many(affine_homs(zero, f"extensions of zero into End({X.name})"))
    outside = Z[~QX.J.mask[Z]]
    if len(outside):
        raise CoherenceFailure(f"two extensions differ by {EX.matrices[outside[0]].tolist()} outside J(End X)")
    phi = QX.proj.table[ext]
    K = TwoSidedIdeal(RM, np.flatnonzero(phi == 0))
    checks = _ring_map_checks(RM, QX.quotient, phi)
    checks["coherence"] = True
    checks["ambiguity_size"] = int(len(Z))
    checks["kernel_order"] = K.order
    checks["psi_injective"] = len(np.unique(phi)) * K.order == RM.size
    if not all(checks[k] for k in ("unital", "additive", "multiplicative", "psi_injective")):
        raise InternalAssertion(f"induced map fails its ring-map checks: {checks}")
    return InducedRingMap(rec, EM, EX, QX, ext, phi, K, Z, checks)


# the cover case runs through the same construction
induced_map_cover = induced_map


def _ring_map_checks(R: FiniteRing, Q: FiniteRing, phi: np.ndarray) -> dict:
    b = R.basis
    add_ok = bool(np.array_equal(phi[R.add(np.arange(R.size)[:, None], np.array(b)[None, :])],
                                 Q.add(phi[:, None], phi[b][None, :])))
    # with additivity, products of basis pairs determine all products
    mult_ok = bool(np.array_equal(phi[R.table[np.ix_(b, b)]], Q.table[np.ix_(phi[b], phi[b])]))
    return {"unital": bool(phi[R.one] == Q.one), "additive": add_ok, "multiplicative": mult_ok}


def lifting_check(im: InducedRingMap) -> dict:
    """Every ``j`` in J(End X) restricts to some ``k`` in K (``u k = j u``, resp. ``p j = k p``)."""
    rec = im.record
    J = im.QX.J.members
    rows = im.EX.images[J]
    restricted = rec.restrict_rows(rows)
    ok_rows = (restricted >= 0).all(axis=1)
    if not ok_rows.all():
        j = int(J[np.argmax(~ok_rows)])
        return {"holds": False, "checked": int(len(J)), "failure": j}
    ks = rows_to_end(im.EM, restricted)
    in_k = im.K.mask[ks]
    if not in_k.all():
        j = int(J[np.argmax(~in_k)])
        return {"holds": False, "checked": int(len(J)), "failure": j}
    return {"holds": True, "checked": int(len(J)), "failure": None}


def restrict_to_end(im: InducedRingMap, g: int) -> int:
    """End(M) index of the endomorphism induced by ``g`` in End(X), or -1."""
    row = im.EX.images[g]
    f = im.record.restrict_rows(row)
    if (f < 0).any():
        return -1
    return int(rows_to_end(im.EM, f)[0])
