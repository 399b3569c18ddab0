"""Socle, radical, essential and superfluous submodules, simple decompositions."""
from __future__ import annotations

import numpy as np

from ..rings.structure import jacobson_radical
from .core import (FiniteModule, Submodule, annihilator_in_module, cyclic_submodule, submodule_sum,
                   times_ideal, whole, zero_submodule)


def cyclic_masks(M: FiniteModule) -> np.ndarray:
    """``out[x, y]`` is True when ``y`` lies in ``xR``."""
    n = M.size
    out = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), M.ring.size)
    out[rows, M.act_table.reshape(-1)] = True
    return out


def socle(M: FiniteModule) -> Submodule:
    """Annihilator of the Jacobson radical, which for finite rings is the sum of the simple submodules."""
    return annihilator_in_module(M, jacobson_radical(M.ring).members)


def radical(M: FiniteModule) -> Submodule:
    """``M J``, the intersection of the maximal submodules."""
    return times_ideal(M, jacobson_radical(M.ring).members)


def is_essential(sub: Submodule, M: FiniteModule | None = None) -> bool:
    """Every nonzero cyclic submodule meets ``sub`` nontrivially."""
    M = sub.parent if M is None else M
    cyc = cyclic_masks(M)[1:]
    meets = (cyc & sub.mask[None, :])
    meets[:, 0] = False
    return bool(meets.any(axis=1).all())


def is_superfluous(sub: Submodule, M: FiniteModule | None = None) -> bool:
    """``sub`` lies in every maximal submodule, i.e. in ``M J``."""
    M = sub.parent if M is None else M
    return sub <= radical(M)


def simple_elements(M: FiniteModule) -> np.ndarray:
    """Nonzero ``x`` whose cyclic submodule ``xR`` is simple."""
    cyc = cyclic_masks(M)
    sizes = cyc.sum(axis=1)
    out = []
    for x in range(1, M.size):
        inside = np.flatnonzero(cyc[x])
        inside = inside[inside != 0]
        if (sizes[inside] == sizes[x]).all():
            out.append(x)
    return np.array(out, dtype=np.int64)


def simple_decomposition(M: FiniteModule, target: Submodule, rng=None):
    """Split a semisimple submodule into simple summands.

    Returns ``[(generator, Submodule)]``; candidates are taken in increasing
    index order, or in a permuted order when ``rng`` is given.
    """
    cands = [x for x in simple_elements(M) if target.mask[x]]
    if rng is not None:
        cands = [cands[i] for i in rng.permutation(len(cands))]
    cur = zero_submodule(M)
    parts = []
    for x in cands:
        if cur.mask[x]:
            continue
        S = cyclic_submodule(M, x)
        if (S.mask & cur.mask).sum() != 1:
            continue
        parts.append((int(x), S))
        cur = submodule_sum(cur, S)
        if cur.order == target.order:
            break
    if cur.order != target.order:
        from ..errors import InternalAssertion
        raise InternalAssertion("submodule is not semisimple")
    return parts


def composition_length(M: FiniteModule) -> int:
    """Length via the radical series and the semisimple layers."""
    from .core import quotient_module
    length = 0
    cur = M
    while cur.size > 1:
        top, _ = quotient_module(cur, radical(cur))
        length += len(simple_decomposition(top, whole(top)))
        from .core import materialize
        cur, _ = materialize(radical(cur))
    return length
