"""Finite right modules over finite rings, their submodules and basic constructions.

A module is stored like a ring: cyclic additive factors ``orders`` and
action constants ``act[g, b]`` = coefficient vector of ``gen_g * b_b`` for
ring basis element ``b_b``.  Elements are indexed in mixed-radix order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np

from .. import groups
from ..config import guards
from ..errors import AxiomViolation, SizeGuard, SpecError
from ..rings.core import FiniteRing


class FiniteModule:
    def __init__(self, ring: FiniteRing, orders, act, name="M", validate=True):
        self.ring = ring
        self.name = str(name)
        self.orders = tuple(int(o) for o in orders)
        m, k = len(self.orders), ring.k
        self.m = m
        self._ord = np.array(self.orders, dtype=np.int64)
        a = np.array(act, dtype=np.int64).reshape(m, k, m)
        self.act = a % self._ord if m else a
        self.act.setflags(write=False)
        self.size = prod(self.orders)
        if self.size >= 1 << 62:            # element indices must fit in int64
            raise SizeGuard(f"module {self.name}", self.size, 1 << 62)
        self._strides = np.array([prod(self.orders[i + 1:]) for i in range(m)], dtype=np.int64)
        if any(o < 2 for o in self.orders):
            raise SpecError("module additive orders must be >= 2")
        if validate:
            self._validate()

    def __repr__(self):
        return f"FiniteModule({self.name!r} over {self.ring.name}, order={self.size})"

    def _validate(self):
        m, R = self.m, self.ring
        if not m:
            return
        o, a = self._ord, self.act
        for g in range(m):
            for b in range(R.k):
                if ((self.orders[g] * a[g, b]) % o).any():
                    raise AxiomViolation("well-definedness (generator order)", (g, b))
                if ((R.orders[b] * a[g, b]) % o).any():
                    raise AxiomViolation("well-definedness (ring basis order)", (g, b))
        one = np.array(R.one_vec)
        unit = np.einsum("b,gbh->gh", one, a) % o
        if not np.array_equal(unit, np.eye(m, dtype=np.int64) % o):
            bad = int(np.argwhere((unit != np.eye(m, dtype=np.int64) % o).any(axis=1))[0][0])
            raise AxiomViolation("unital action", (bad, "1"))
        # (g * b_i) * b_j == g * (b_i b_j)
        left = np.einsum("gih,hjl->gijl", a, a) % o
        right = np.einsum("ijc,gcl->gijl", R.consts, a) % o
        bad = np.argwhere((left != right).any(axis=-1))
        if bad.size:
            g, i, j = (int(x) for x in bad[0])
            raise AxiomViolation("associativity of the action", (g, i, j))

    # ---- element views ----------------------------------------------------
    @cached_property
    def coords(self) -> np.ndarray:
        guards().check(f"element list of {self.name}", self.size, "max_module")
        c = groups.coefficient_vectors(self.orders)
        c.setflags(write=False)
        return c

    def encode(self, arr):
        arr = np.asarray(arr, dtype=np.int64)
        if not self.m:
            return np.zeros(arr.shape[:-1], dtype=np.int64)
        return (arr % self._ord) @ self._strides

    def elem(self, vec) -> int:
        return int(self.encode(np.asarray(vec).reshape(self.m)))

    def coeffs(self, x) -> tuple:
        return tuple(int(v) for v in self.coords[int(x)])

    def reduce(self, arr):
        return np.asarray(arr, dtype=np.int64) % self._ord if self.m else np.asarray(arr)

    def action_matrix(self, r: int) -> np.ndarray:
        """Matrix of ``x -> x * r`` on coefficient rows."""
        rho = self.ring.coords[int(r)]
        return np.einsum("b,gbh->gh", rho, self.act)

    def basis_action_matrices(self) -> np.ndarray:
        return np.transpose(self.act, (1, 0, 2))

    @cached_property
    def act_table(self) -> np.ndarray:
        """``act_table[x, r]`` = index of ``x * r``."""
        R = self.ring
        n, N = self.size, R.size
        guards().check(f"action table of {self.name}", n * N, "max_end") if n * N > 2 ** 22 else None
        out = np.empty((n, N), dtype=np.int32)
        if not self.m:
            out[:] = 0
            return out
        mats = np.einsum("rb,gbh->rgh", R.coords, self.act)       # (N, m, m)
        step = max(1, 2 ** 20 // (n * self.m * self.m + 1))
        for lo in range(0, N, step):
            prodv = np.einsum("xg,rgh->xrh", self.coords, mats[lo:lo + step]) % self._ord
            out[:, lo:lo + step] = prodv @ self._strides
        out.setflags(write=False)
        return out

    def act_on(self, x, r):
        return self.act_table[x, r]

    def add(self, x, y):
        return self.encode(self.coords[x] + self.coords[y])

    def sub(self, x, y):
        return self.encode(self.coords[x] - self.coords[y])

    def neg(self, x):
        return self.encode(-self.coords[x])

    def to_spec(self) -> dict:
        return {"name": self.name, "ring": self.ring.name, "additive_orders": list(self.orders),
                "action_constants": self.act.tolist()}

    def fingerprint(self):
        return repr((self.ring.fingerprint(), self.orders, self.act.tobytes())).encode()


# ---- submodules ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Submodule:
    """Submodule given by its sorted member indices in ``parent``."""

    parent: FiniteModule
    members: np.ndarray

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.size, dtype=bool)
        m[self.members] = True
        return m

    @property
    def order(self):
        return len(self.members)

    def __contains__(self, x):
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return (isinstance(other, Submodule) and other.parent is self.parent
                and np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash(self.members.tobytes())

    def __le__(self, other):
        return bool(other.mask[self.members].all())

    def is_zero(self):
        return self.order == 1

    def is_whole(self):
        return self.order == self.parent.size

    @cached_property
    def decomposition(self):
        return groups.decompose(self.parent.coords[self.members], self.parent.orders)

    @cached_property
    def basis(self):
        """Canonical generating rows (cyclic decomposition of the additive group)."""
        return self.decomposition.gens

    def key(self):
        return self.mask.tobytes()


def submodule_from_mask(M: FiniteModule, mask) -> Submodule:
    return Submodule(M, np.flatnonzero(mask))


def zero_submodule(M):
    return Submodule(M, np.array([0], dtype=np.int64))


def whole(M):
    return Submodule(M, np.arange(M.size))


def generated_submodule(M: FiniteModule, elems) -> Submodule:
    """Smallest submodule containing the given element indices."""
    elems = np.unique(np.asarray(list(elems), dtype=np.int64))
    if not len(elems):
        return zero_submodule(M)
    orbit = np.unique(M.act_table[elems].ravel())
    rows = groups.span(M.coords[orbit], M.orders)
    return Submodule(M, np.sort(M.encode(rows)))


def cyclic_submodule(M, x) -> Submodule:
    return Submodule(M, np.unique(M.act_table[int(x)]))


def submodule_sum(A: Submodule, B: Submodule) -> Submodule:
    M = A.parent
    s = M.encode(M.coords[A.members][:, None, :] + M.coords[B.members][None, :, :])
    return Submodule(M, np.unique(s))


def intersection(A: Submodule, B: Submodule) -> Submodule:
    return submodule_from_mask(A.parent, A.mask & B.mask)


def annihilator_in_module(M: FiniteModule, ring_elems) -> Submodule:
    """``{x in M : x r = 0`` for all listed ring elements ``r}``."""
    ring_elems = np.asarray(list(ring_elems), dtype=np.int64)
    if not len(ring_elems):
        return whole(M)
    return submodule_from_mask(M, (M.act_table[:, ring_elems] == 0).all(axis=1))


def times_ideal(M: FiniteModule, ring_elems) -> Submodule:
    """``M I``: additive span of products ``x r``."""
    ring_elems = np.asarray(list(ring_elems), dtype=np.int64)
    prods = np.unique(M.act_table[:, ring_elems].ravel())
    return Submodule(M, np.sort(M.encode(groups.span(M.coords[prods], M.orders))))


def enumerate_submodules(M: FiniteModule, limit: int | None = None) -> list[Submodule]:
    """All submodules, ordered by (order, member list)."""
    cyc = {}
    for x in range(M.size):
        s = cyclic_submodule(M, x)
        cyc.setdefault(s.key(), s)
    cyclics = sorted(cyc.values(), key=lambda s: (s.order, s.members.tolist()))
    seen = {}
    zero = zero_submodule(M)
    frontier = [zero]
    seen[zero.key()] = zero
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclics:
                if C <= S:
                    continue
                T = submodule_sum(S, C)
                k = T.key()
                if k not in seen:
                    seen[k] = T
                    nxt.append(T)
                    if limit is not None and len(seen) > limit:
                        from ..errors import SizeGuard
                        raise SizeGuard(f"submodule lattice of {M.name}", len(seen), limit)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.order, s.members.tolist()))


# ---- constructions ---------------------------------------------------------------

def build_module(ring: FiniteRing, spec: dict) -> FiniteModule:
    if "builtin" in spec:
        from .catalog import from_builtin
        return from_builtin(ring, spec["builtin"], name=spec.get("name"))
    try:
        return FiniteModule(ring, spec["additive_orders"], spec["action_constants"], spec.get("name", "M"))
    except KeyError as exc:
        raise SpecError(f"module spec missing field {exc}") from exc


def regular_module(ring: FiniteRing) -> FiniteModule:
    return FiniteModule(ring, ring.orders, ring.consts, name=ring.name, validate=False)


def direct_sum(*mods: FiniteModule, name=None) -> FiniteModule:
    ring = mods[0].ring
    if any(M.ring is not ring for M in mods):
        raise SpecError("direct sum of modules over different rings")
    m = sum(M.m for M in mods)
    act = np.zeros((m, ring.k, m), dtype=np.int64)
    orders = []
    off = 0
    for M in mods:
        act[off:off + M.m, :, off:off + M.m] = M.act
        orders += list(M.orders)
        off += M.m
    nm = name or " (+) ".join(M.name for M in mods)
    return FiniteModule(ring, orders, act, name=nm, validate=False)


def materialize(sub: Submodule, name=None):
    """Submodule as a stand-alone module plus the inclusion hom."""
    from .homs import ModuleHom
    M = sub.parent
    if sub.is_zero():
        Z = FiniteModule(M.ring, (), np.zeros((0, M.ring.k, 0)), name=name or "0", validate=False)
        return Z, ModuleHom(Z, M, np.zeros((0, M.m), dtype=np.int64))
    d = sub.decomposition
    gens = d.gens
    k = M.ring.k
    cvecs = groups.coefficient_vectors(d.orders)
    act = np.zeros((len(d.orders), k, len(d.orders)), dtype=np.int64)
    prodv = np.einsum("gh,bhl->gbl", gens, M.basis_action_matrices()) % M._ord
    for g in range(len(d.orders)):
        for b in range(k):
            act[g, b] = cvecs[d.index(prodv[g, b])]
    S = FiniteModule(M.ring, d.orders, act, name=name or f"sub({M.name})", validate=False)
    return S, ModuleHom(S, M, gens)


def quotient_module(M: FiniteModule, sub: Submodule, name=None):
    """``M / sub`` with the projection hom."""
    from .homs import ModuleHom
    d = groups.decompose(M.coords, M.orders, M.coords[sub.members])
    k = M.ring.k
    q = len(d.orders)
    cvecs = groups.coefficient_vectors(d.orders)
    act = np.zeros((q, k, q), dtype=np.int64)
    prodv = np.einsum("gh,bhl->gbl", d.gens, M.basis_action_matrices()) % M._ord if q else None
    for g in range(q):
        for b in range(k):
            act[g, b] = cvecs[d.index(prodv[g, b])]
    Q = FiniteModule(M.ring, d.orders, act, name=name or f"{M.name}/K", validate=False)
    eye = np.eye(M.m, dtype=np.int64)
    proj = np.array([cvecs[d.index(e)] for e in eye], dtype=np.int64).reshape(M.m, q)
    return Q, ModuleHom(M, Q, proj)


def character_dual(ring: FiniteRing) -> FiniteModule:
    """Character module of the left regular module, an injective cogenerator.

    Dual basis ``chi_i(b_j) = delta_ij / d_i`` with right action
    ``(chi r)(s) = chi(r s)``.
    """
    d = ring.orders
    k = ring.k
    c = ring.consts
    act = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for b in range(k):
            for j in range(k):
                num = int(c[b, j, i]) * d[j]
                if num % d[i]:
                    raise AxiomViolation("character dual is ill-defined", (i, b, j))
                act[i, b, j] = (num // d[i]) % d[j]
    return FiniteModule(ring, d, act, name=f"dual({ring.name})")
