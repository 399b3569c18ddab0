"""Projectivity, primitive idempotents and projective covers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InternalAssertion
from ..rings.core import FiniteRing, quotient_ring
from ..rings.structure import artin_wedderburn, jacobson_radical, lift_idempotent
from .core import (FiniteModule, Submodule, direct_sum, materialize, quotient_module, regular_module, whole)
from .homs import HomSystem, ModuleHom, affine_homs, non_bijective
from .radical import is_superfluous, radical, simple_decomposition


def free_cover_map(M: FiniteModule):
    """``F = R^m -> M`` sending the i-th basis vector to the i-th additive generator."""
    R = regular_module(M.ring)
    F = direct_sum(*([R] * M.m), name=f"{M.ring.name}^{M.m}")
    one = np.array(M.ring.one_vec)
    rows = []
    for g in range(M.m):
        # generator b_c of the g-th copy maps to gen_g * b_c
        for c in range(M.ring.k):
            rows.append(M.act[g, c])
    return F, ModuleHom(F, M, np.array(rows, dtype=np.int64).reshape(F.m, M.m))


def projective_section(M: FiniteModule):
    """A hom ``s: M -> R^m`` with ``p o s = id``, or None."""
    if not M.m:
        return None
    F, p = free_cover_map(M)
    sys = HomSystem(M, F)
    sys.add_post(p.matrix, M.orders, np.eye(M.m, dtype=np.int64))
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleHom(M, F, sol[0])


def is_projective(M: FiniteModule) -> bool:
    """``M`` is a direct summand of a free module: the free cover splits."""
    if not M.m:
        return True
    return projective_section(M) is not None


_prim_cache: dict = {}


def primitive_idempotents(ring: FiniteRing) -> list[int]:
    """Complete set of orthogonal primitive idempotents summing to 1.

    Diagonal matrix units of the Wedderburn blocks of ``R/J`` are lifted one
    at a time inside the corner ring complementary to those already lifted,
    which keeps the lifts orthogonal.
    """
    hit = _prim_cache.get(id(ring))
    if hit is not None and hit[0] is ring:
        return hit[1]
    t = ring.table
    J = jacobson_radical(ring)
    if J.is_zero():
        q, proj = ring, None
    else:
        q, proj = quotient_ring(ring, J)
    targets = []
    for b in artin_wedderburn(q):
        for i in range(b.n):
            targets.append(int(b.matrix_units[i][i]))
    lifted = []
    rest = ring.one
    for pos, ebar in enumerate(targets):
        if pos == len(targets) - 1:
            e = rest
        else:
            x = ebar if proj is None else int(np.flatnonzero(proj.table == ebar)[0])
            x = int(t[t[rest, x], rest])
            e, _ = lift_idempotent(ring, x, J)
        if t[e, e] != e or (proj is not None and proj.table[e] != ebar) or (proj is None and e != ebar):
            raise InternalAssertion("idempotent lift does not reduce to the matrix unit")
        if any(t[e, f] or t[f, e] for f in lifted):
            raise InternalAssertion("lifted idempotents are not orthogonal")
        lifted.append(int(e))
        rest = int(ring.sub(rest, e))
    if rest != 0:
        raise InternalAssertion("lifted idempotents do not sum to one")
    _prim_cache[id(ring)] = (ring, lifted)
    return lifted


def principal_module(ring: FiniteRing, e: int):
    """``eR`` as a module together with its inclusion into the regular module."""
    R = regular_module(ring)
    sub = Submodule(R, np.unique(ring.table[e]))
    return materialize(sub, name=f"e{e}R")


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    module: FiniteModule
    X: FiniteModule
    p: ModuleHom
    summands: tuple          # (primitive idempotent e_i, element m_i of M with m_i e_i = m_i)


def projective_cover(M: FiniteModule, seed=None) -> ProjectiveCover:
    """``p: X -> M`` with ``X = (+) e_i R`` projective and ``Ker p`` superfluous."""
    rng = None if not seed else np.random.default_rng(seed)
    ring = M.ring
    prims = primitive_idempotents(ring)
    rad = radical(M)
    top, pi = quotient_module(M, rad)
    parts = simple_decomposition(top, whole(top), rng) if top.size > 1 else []
    pieces, incls, gens = [], [], []
    for t_el, T in parts:
        cands = [int(x) for x in T.members if x]
        if rng is not None:
            cands = [cands[i] for i in rng.permutation(len(cands))]
        chosen = None
        for x in cands:
            for e in prims:
                y = int(top.act_table[x, e])
                if y:
                    chosen = (e, y)
                    break
            if chosen:
                break
        if chosen is None:
            raise InternalAssertion("simple top summand killed by every primitive idempotent")
        e, y = chosen
        pre = np.flatnonzero(pi.table == y)
        if rng is not None:
            pre = pre[rng.permutation(len(pre))]
        m_i = int(M.act_table[int(pre[0]), e])
        P, incl = principal_module(ring, e)
        pieces.append(P)
        incls.append(incl)
        gens.append((e, m_i))
    if not pieces:
        X = FiniteModule(ring, (), np.zeros((0, ring.k, 0)), name="0", validate=False)
        return ProjectiveCover(M, X, ModuleHom(X, M, np.zeros((0, M.m), dtype=np.int64)), ())
    X = direct_sum(*pieces, name=f"P({M.name})") if len(pieces) > 1 else pieces[0]
    rows = []
    for P, incl, (e, m_i) in zip(pieces, incls, gens):
        # generator g of eR is the ring element incl(gen_g); it maps to m_i * that element
        ring_elems = ring.encode(incl.matrix)
        for r in ring_elems:
            rows.append(M.coords[M.act_table[m_i, r]])
    p = ModuleHom(X, M, np.array(rows, dtype=np.int64).reshape(X.m, M.m))
    if not p.is_surjective():
        raise InternalAssertion("cover map is not onto")
    return ProjectiveCover(M, X, p, tuple(gens))


def cofixing_endomorphisms(p: ModuleHom) -> np.ndarray:
    """Matrices of every ``h`` in End(X) with ``p o h = p``."""
    X = p.source
    sys = HomSystem(X, X)
    sys.add_post(p.matrix, p.target.orders, p.matrix)
    return affine_homs(sys, f"{{h : p o h = p}} in End({X.name})")


def cover_condition_violations(p: ModuleHom) -> list[np.ndarray]:
    """Endomorphisms ``h`` of X with ``p o h = p`` that are not automorphisms."""
    X = p.source
    fixed = cofixing_endomorphisms(p)
    return [fixed[i] for i in non_bijective(X, X, fixed)]


def verify_cover(cov: ProjectiveCover) -> dict:
    X, p = cov.X, cov.p
    if not X.m:
        return {"projective": True, "epi": cov.module.size == 1, "superfluous_kernel": True,
                "cover_condition": True}
    return {
        "projective": is_projective(X),
        "epi": p.is_surjective(),
        "superfluous_kernel": is_superfluous(p.kernel()),
        "cover_condition": not cover_condition_violations(p),
    }


def cover_isomorphism(a: ProjectiveCover, b: ProjectiveCover):
    """A bijective ``theta: X_a -> X_b`` with ``p_b o theta = p_a``, or None."""
    Xa, Xb = a.X, b.X
    if Xa.size != Xb.size:
        return None
    if not Xa.m:
        return ModuleHom(Xa, Xb, np.zeros((0, 0), dtype=np.int64))
    sys = HomSystem(Xa, Xb)
    sys.add_post(b.p.matrix, a.module.orders, a.p.matrix)
    sol = sys.solve()
    if sol is None:
        return None
    theta = ModuleHom(Xa, Xb, sol[0])
    return theta if theta.is_bijective() else None
