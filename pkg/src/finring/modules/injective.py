"""Injectivity and injective envelopes.

The envelope of a simple module is grown inside the character dual of the
ring (an injective cogenerator): starting from a copy of the simple module,
cyclic submodules are adjoined while the copy stays essential.  A maximal
essential extension inside an injective module is an injective hull.  The
envelope of ``M`` is the direct sum of the hulls of the simple summands of
its socle, with ``u`` obtained by extending the socle embedding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InternalAssertion
from .core import (FiniteModule, Submodule, annihilator_in_module, character_dual, cyclic_submodule,
                   direct_sum, enumerate_submodules, materialize, regular_module, submodule_sum)
from .homs import HomSystem, ModuleHom, affine_homs, hom_count, hom_set, non_bijective
from .radical import cyclic_masks, is_essential, simple_decomposition, socle

_ideal_cache: dict = {}


def right_ideals(ring):
    """All right ideals of ``ring`` (submodules of the regular module)."""
    hit = _ideal_cache.get(id(ring))
    if hit is not None and hit[0] is ring:
        return hit[1]
    R = regular_module(ring)
    ideals = enumerate_submodules(R)
    _ideal_cache[id(ring)] = (ring, (R, ideals))
    return R, ideals


def baer_defects(M: FiniteModule):
    """Right ideals ``I`` for which some hom ``I -> M`` does not extend to ``R``.

    Restriction ``Hom(R, M) -> Hom(I, M)`` has kernel ``ann_M(I)``, so every
    hom extends exactly when ``|Hom(I, M)| = |M| / |ann_M(I)|``.
    """
    R, ideals = right_ideals(M.ring)
    bad = []
    for I in ideals:
        if I.is_zero() or I.is_whole():
            continue
        Imod, _ = materialize(I)
        ann = annihilator_in_module(M, I.members)
        if hom_count(Imod, M) * ann.order != M.size:
            bad.append(I)
    return bad


def is_injective(M: FiniteModule) -> bool:
    """Baer criterion over every right ideal."""
    return not baer_defects(M)


def _order(cands, rng):
    cands = list(cands)
    if rng is None:
        return cands
    return [cands[i] for i in rng.permutation(len(cands))]


def hull_in(C: FiniteModule, start: Submodule, rng=None) -> Submodule:
    """Maximal essential extension of ``start`` inside ``C``."""
    cyc = cyclic_masks(C)
    cur = start

    def essential_over(N_mask):
        inside = np.flatnonzero(N_mask)[1:]
        hits = cyc[inside] & start.mask[None, :]
        hits[:, 0] = False
        return bool(hits.any(axis=1).all())

    changed = True
    while changed:
        changed = False
        for x in _order(range(1, C.size), rng):
            if cur.mask[x]:
                continue
            N = submodule_sum(cur, cyclic_submodule(C, x))
            if essential_over(N.mask):
                cur = N
                changed = True
                break
    return cur


def _least_monic(S: FiniteModule, C: FiniteModule, rng=None) -> ModuleHom:
    homs = hom_set(S, C)
    order = _order(range(len(homs)), rng)
    for i in order:
        h = homs.hom(i)
        if h.is_injective():
            return h
    raise InternalAssertion(f"no embedding of a simple module into {C.name}")


@dataclass(frozen=True, eq=False)
class InjectiveEnvelope:
    module: FiniteModule
    X: FiniteModule
    u: ModuleHom
    summands: tuple          # (socle generator in M, hull submodule of the dual)


def injective_envelope(M: FiniteModule, seed=None) -> InjectiveEnvelope:
    """``u: M -> X`` with ``X`` injective and ``Im u`` essential.

    Seed 0 (or None) takes least candidates everywhere; any other seed
    permutes the search orders (for uniqueness checks).
    """
    rng = None if not seed else np.random.default_rng(seed)
    ring = M.ring
    C = character_dual(ring)
    soc = socle(M)
    parts = simple_decomposition(M, soc, rng)
    hulls, embeds, gens = [], [], []
    for x, S in parts:
        Smod, incl = materialize(S)
        sigma = _least_monic(Smod, C, rng)
        T = sigma.image()
        E = hull_in(C, T, rng)
        Emod, e_incl = materialize(E)
        # position of sigma(x) inside the materialised hull
        x_in_S = _preimage(incl, x)
        c = sigma(x_in_S)
        hulls.append(Emod)
        embeds.append(E.decomposition.index_of)
        gens.append((x, c))
    if not hulls:
        X = FiniteModule(ring, (), np.zeros((0, ring.k, 0)), name="0", validate=False)
        return InjectiveEnvelope(M, X, ModuleHom(M, X, np.zeros((M.m, 0), dtype=np.int64)), ())
    X = direct_sum(*hulls, name=f"E({M.name})") if len(hulls) > 1 else hulls[0]
    offsets = np.cumsum([0] + [H.m for H in hulls])
    from .. import groups

    def constrain(sys: HomSystem):
        for i, (x, c) in enumerate(gens):
            vec = np.zeros(X.m, dtype=np.int64)
            cv = groups.coefficient_vectors(hulls[i].orders)[embeds[i][groups.key(C.coords[c])]]
            vec[offsets[i]:offsets[i + 1]] = cv
            sys.add_left_value(M.coords[x], vec)

    sys = HomSystem(M, X)
    constrain(sys)
    sol = sys.solve()
    if sol is None:
        raise InternalAssertion("socle embedding does not extend to the envelope")
    u = ModuleHom(M, X, sol[0])
    if not u.is_injective():
        raise InternalAssertion("envelope map is not monic")
    return InjectiveEnvelope(M, X, u, tuple((x, E) for (x, _), E in zip(gens, hulls)))


def _preimage(h: ModuleHom, y) -> int:
    hit = np.flatnonzero(h.table == y)
    if not len(hit):
        raise InternalAssertion("element outside the image")
    return int(hit[0])


def fixing_endomorphisms(u: ModuleHom) -> np.ndarray:
    """Matrices of every ``h`` in End(X) with ``h o u = u``."""
    X = u.target
    sys = HomSystem(X, X)
    for g in range(u.source.m):
        sys.add_left_value(u.matrix[g], u.matrix[g])
    return affine_homs(sys, f"{{h : h o u = u}} in End({X.name})")


def envelope_condition_violations(u: ModuleHom) -> list[np.ndarray]:
    """Endomorphisms ``h`` of X with ``h o u = u`` that are not automorphisms.

    The affine set is enumerated directly, so no multiplication table of
    End(X) is needed.
    """
    X = u.target
    fixed = fixing_endomorphisms(u)
    return [fixed[i] for i in non_bijective(X, X, fixed)]


def verify_envelope(env: InjectiveEnvelope) -> dict:
    X, u = env.X, env.u
    checks = {
        "injective": is_injective(X) if X.m else True,
        "monic": u.is_injective(),
        "essential": is_essential(u.image()) if X.m else True,
    }
    checks["envelope_condition"] = (not envelope_condition_violations(u)) if X.m else True
    return checks


def envelope_isomorphism(a: InjectiveEnvelope, b: InjectiveEnvelope):
    """A bijective ``theta: X_a -> X_b`` with ``theta o u_a = u_b``, or None."""
    Xa, Xb = a.X, b.X
    if Xa.size != Xb.size:
        return None
    if not Xa.m:
        return ModuleHom(Xa, Xb, np.zeros((0, 0), dtype=np.int64))
    sys = HomSystem(Xa, Xb)
    ua = a.u.matrix
    for g in range(a.module.m):
        sys.add_left_value(ua[g], b.u.matrix[g])
    sol = sys.solve()
    if sol is None:
        return None
    theta = ModuleHom(Xa, Xb, sol[0])
    return theta if theta.is_bijective() else None
