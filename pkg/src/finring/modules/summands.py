"""Direct summands from idempotent endomorphisms and square-freeness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InternalAssertion
from ..rings.structure import idempotents
from .core import FiniteModule, Submodule, materialize
from .homs import EndRing, end_ring, is_isomorphic


@dataclass(frozen=True, eq=False)
class DecompositionWitness:
    """``M = eM (+) (1-e)M`` for an idempotent ``e`` of End(M) (a ring index)."""

    module: FiniteModule
    e: int
    N: Submodule
    L: Submodule


def summand(E: EndRing, e: int) -> Submodule:
    """``eM`` as a submodule of M."""
    return Submodule(E.module, np.unique(E.images[e]))


def decompose_by(E: EndRing, e: int) -> DecompositionWitness:
    R = E.ring
    if R.table[e, e] != e:
        raise InternalAssertion("decomposition needs an idempotent endomorphism")
    N = summand(E, e)
    L = summand(E, int(R.one_minus[e]))
    M = E.module
    if (N.mask & L.mask).sum() != 1 or N.order * L.order != M.size:
        raise InternalAssertion("eM and (1-e)M do not form a direct sum")
    return DecompositionWitness(M, int(e), N, L)


def summand_idempotents(E: EndRing) -> list[int]:
    """One idempotent for each distinct summand ``eM`` (least index first)."""
    seen, out = set(), []
    for e in idempotents(E.ring):
        key = summand(E, int(e)).key
        if key not in seen:
            seen.add(key)
            out.append(int(e))
    return out


@dataclass(frozen=True)
class SquareFreeReport:
    square_free: bool
    pairs_scanned: int
    witness: tuple | None          # (e1, e2, a, b) with b a = e1, a b = e2 in End(M)


def is_square_free(M: FiniteModule, E: EndRing | None = None) -> SquareFreeReport:
    """Scan every pair of nonzero orthogonal idempotents ``e1, e2`` of End(M).

    ``e1 M`` and ``e2 M`` are isomorphic exactly when some ``a`` in
    ``e2 End(M) e1`` and ``b`` in ``e1 End(M) e2`` satisfy ``b a = e1`` and
    ``a b = e2``; a found pair is confirmed independently by an invertible-hom
    search between the materialised summands.
    """
    if M.size == 1:
        return SquareFreeReport(True, 0, None)
    E = end_ring(M) if E is None else E
    R = E.ring
    t = R.table
    idem = [int(e) for e in idempotents(R) if e != 0]
    scanned = 0
    for i, e1 in enumerate(idem):
        for e2 in idem:
            if e2 == e1 or t[e1, e2] or t[e2, e1]:
                continue
            scanned += 1
            A = np.unique(t[t[e2]][:, e1])
            B = np.unique(t[t[e1]][:, e2])
            hit = (t[np.ix_(B, A)] == e1) & (t[np.ix_(A, B)].T == e2)
            if hit.any():
                bi, ai = np.argwhere(hit)[0]
                a, b = int(A[ai]), int(B[bi])
                Na, _ = materialize(summand(E, e1))
                Nb, _ = materialize(summand(E, e2))
                if not is_isomorphic(Na, Nb)[0]:
                    raise InternalAssertion("idempotent equivalence without a module isomorphism")
                return SquareFreeReport(False, scanned, (e1, e2, a, b))
    return SquareFreeReport(True, scanned, None)
