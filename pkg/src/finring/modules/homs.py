"""Module homomorphisms, hom groups, endomorphism rings and automorphisms.

Hom groups are computed by solving the linearity constraints with exact
linear algebra.  Unknown entry ``H[g, j]`` (a residue mod ``n_j``, the order
of the j-th target generator) is embedded in ``Z_L`` as ``Y = (L/n_j) H``,
which turns every constraint into one congruence mod ``L`` and makes the
solution group of ``Y`` isomorphic to the hom group.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm, prod

import numpy as np

from .. import exactlin, groups
from ..config import guards
from ..errors import InternalAssertion, SizeGuard, SpecError
from ..rings.core import FiniteRing
from .core import FiniteModule, Submodule


class ModuleHom:
    """``h(gen_g)`` is row g of ``matrix``; ``h(x) = x @ matrix`` reduced."""

    def __init__(self, source: FiniteModule, target: FiniteModule, matrix, check=False):
        self.source = source
        self.target = target
        self.matrix = target.reduce(np.asarray(matrix, dtype=np.int64).reshape(source.m, target.m))
        if check and not is_linear(source, target, self.matrix):
            raise SpecError("matrix does not define an R-linear map")

    def __repr__(self):
        return f"ModuleHom({self.source.name} -> {self.target.name}, {self.matrix.tolist()})"

    def apply_coords(self, rows):
        return self.target.reduce(np.asarray(rows) @ self.matrix)

    @cached_property
    def table(self) -> np.ndarray:
        """Image index of every source element."""
        return self.target.encode(self.source.coords @ self.matrix)

    def __call__(self, x):
        return self.table[x]

    def compose(self, inner: "ModuleHom") -> "ModuleHom":
        """``self o inner``."""
        if inner.target.m != self.source.m:
            raise SpecError("composition of incompatible homs")
        return ModuleHom(inner.source, self.target, inner.matrix @ self.matrix)

    def image(self) -> Submodule:
        return Submodule(self.target, np.unique(self.table))

    def kernel(self) -> Submodule:
        return Submodule(self.source, np.flatnonzero(self.table == 0))

    def is_injective(self):
        return bool((self.table[1:] != 0).all())

    def is_surjective(self):
        return len(np.unique(self.table)) == self.target.size

    def is_bijective(self):
        return self.source.size == self.target.size and self.is_injective()

    def __eq__(self, other):
        return isinstance(other, ModuleHom) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())


def identity_hom(M):
    return ModuleHom(M, M, np.eye(M.m, dtype=np.int64))


def is_linear(M, N, H) -> bool:
    H = np.asarray(H, dtype=np.int64)
    if M.m == 0:
        return True
    if N.m == 0:
        return True
    if ((np.array(M.orders)[:, None] * H) % N._ord).any():
        return False
    left = np.einsum("gbh,hj->gbj", M.act, H) % N._ord
    right = np.einsum("gi,bij->gbj", H, N.basis_action_matrices()) % N._ord
    return bool(np.array_equal(left, right))


class HomSystem:
    """Linear system whose solutions are the R-linear maps ``M -> N``.

    Extra affine constraints of the form ``(pre @ H @ post)[.] = rhs`` can be
    appended before solving.
    """

    def __init__(self, M: FiniteModule, N: FiniteModule):
        self.M, self.N = M, N
        self.m, self.n = M.m, N.m
        all_orders = list(M.orders) + list(N.orders) + list(M.ring.orders)
        self.L = lcm(*all_orders) if all_orders else 1
        self.cols = []
        self.rhs = []
        if self.m and self.n:
            self._base_constraints()

    def var(self, g, j):
        return g * self.n + j

    def add(self, col, rhs=0):
        self.cols.append(np.asarray(col, dtype=np.int64) % self.L)
        self.rhs.append(int(rhs) % self.L)

    def _base_constraints(self):
        M, N, L = self.M, self.N, self.L
        nv = self.m * self.n
        for g in range(self.m):
            for j in range(self.n):
                c = np.zeros(nv, dtype=np.int64)
                c[self.var(g, j)] = N.orders[j]      # Y lies in (L/n_j) Z_L
                self.add(c)
                if M.orders[g] % N.orders[j]:
                    c = np.zeros(nv, dtype=np.int64)
                    c[self.var(g, j)] = M.orders[g]  # o_g * h(gen_g) = 0
                    self.add(c)
        A = N.basis_action_matrices()
        for g in range(self.m):
            for b in range(M.ring.k):
                for j in range(self.n):
                    c = np.zeros(nv, dtype=np.int64)
                    for h in range(self.m):
                        c[self.var(h, j)] += M.act[g, b, h]
                    for i in range(self.n):
                        num = N.orders[i] * int(A[b, i, j])
                        if num % N.orders[j]:
                            raise InternalAssertion("target module action is ill-defined")
                        c[self.var(g, i)] -= num // N.orders[j]
                    if c.any():
                        self.add(c)

    def add_left_value(self, row, value):
        """Constrain ``h(x) = value`` where ``row`` is the coefficient vector of x in M."""
        nv = self.m * self.n
        for j in range(self.n):
            c = np.zeros(nv, dtype=np.int64)
            for g in range(self.m):
                c[self.var(g, j)] = row[g]
            self.add(c, (self.L // self.N.orders[j]) * int(value[j]))

    def add_post(self, post, post_orders, rhs_matrix):
        """Constrain ``H @ post = rhs_matrix`` modulo ``post_orders`` (columns)."""
        nv = self.m * self.n
        post = np.asarray(post, dtype=np.int64)
        for g in range(self.m):
            for j, t in enumerate(post_orders):
                c = np.zeros(nv, dtype=np.int64)
                for i in range(self.n):
                    num = self.N.orders[i] * int(post[i, j])
                    if num % t:
                        raise InternalAssertion("post-composition map is ill-defined")
                    c[self.var(g, i)] = num // t
                self.add(c, (self.L // t) * int(rhs_matrix[g, j]))

    def add_pre(self, pre, pre_orders_rows, rhs_matrix):
        """Constrain ``pre @ H = rhs_matrix`` (rows of ``pre`` are coefficient vectors in M)."""
        pre = np.asarray(pre, dtype=np.int64)
        for r in range(pre.shape[0]):
            self.add_left_value(pre[r], rhs_matrix[r])

    def _matrix(self):
        nv = self.m * self.n
        if not self.cols:
            return exactlin.ModMatrix(np.zeros((nv, 1), dtype=np.int64), max(self.L, 2)), np.zeros(1, dtype=np.int64)
        A = np.stack(self.cols, axis=1)
        return exactlin.ModMatrix(A, max(self.L, 2)), np.array(self.rhs, dtype=np.int64)

    def _to_H(self, y):
        y = np.asarray(y, dtype=np.int64).reshape(self.m, self.n) % self.L
        scale = np.array([self.L // o for o in self.N.orders], dtype=np.int64)
        if (y % scale).any():
            raise InternalAssertion("hom solution left the embedded subgroup")
        return (y // scale) % self.N._ord

    def solve(self):
        """``(particular_H, [kernel_H...])`` or None when inconsistent."""
        if not (self.m and self.n):
            if any(self.rhs):
                return None
            return np.zeros((self.m, self.n), dtype=np.int64), []
        A, b = self._matrix()
        sol = exactlin.solve_linear(A, b)
        if sol is None:
            return None
        part = self._to_H(sol.particular)
        kern = [self._to_H(k) for k in sol.kernel]
        return part, [k for k in kern if k.any()]

    def solution_count(self):
        if not (self.m and self.n):
            return 1 if not any(self.rhs) else 0
        A, b = self._matrix()
        sol = exactlin.solve_linear(A, b)
        if sol is None:
            return 0
        return sol.size()


@dataclass(frozen=True, eq=False)
class HomGroup:
    """All homs ``M -> N``: ``matrices[i]`` is the i-th hom in canonical order."""

    source: FiniteModule
    target: FiniteModule
    matrices: np.ndarray        # (count, m, n)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        for H in self.matrices:
            yield ModuleHom(self.source, self.target, H)

    def hom(self, i):
        return ModuleHom(self.source, self.target, self.matrices[i])

    @cached_property
    def flat_orders(self):
        return tuple(self.target.orders) * self.source.m

    @cached_property
    def index_of(self):
        return {groups.key(H.reshape(-1)): i for i, H in enumerate(self.matrices)}

    def index(self, H):
        return self.index_of[groups.key(np.asarray(H).reshape(-1) % np.array(self.flat_orders))]


def hom_count(M: FiniteModule, N: FiniteModule) -> int:
    if M.ring is not N.ring:
        raise SpecError("hom between modules over different rings")
    return HomSystem(M, N).solution_count()


def _span_matrices(part, kern, M, N, limit):
    m, n = M.m, N.m
    if not (m and n):
        return np.zeros((1, m, n), dtype=np.int64)
    flat_orders = np.array(tuple(N.orders) * m, dtype=np.int64)
    rows = groups.span(np.array([k.reshape(-1) for k in kern]) if kern else np.zeros((0, m * n)),
                       flat_orders, limit=limit)
    rows = np.unique((rows + part.reshape(-1)) % flat_orders, axis=0)
    return rows.reshape(-1, m, n)


def hom_set(M: FiniteModule, N: FiniteModule, limit_name: str = "max_end") -> HomGroup:
    """Every R-linear map ``M -> N`` in lexicographic order of matrices."""
    if M.ring is not N.ring:
        raise SpecError("hom between modules over different rings")
    sys = HomSystem(M, N)
    count = sys.solution_count()
    limit = getattr(guards(), limit_name)
    if count > limit:
        raise SizeGuard(f"Hom({M.name}, {N.name})", count, limit)
    sol = sys.solve()
    part, kern = sol
    mats = _span_matrices(part, kern, M, N, limit)
    if len(mats) != count:
        raise InternalAssertion("hom enumeration disagrees with the predicted count")
    return HomGroup(M, N, mats)


def affine_homs(sys: HomSystem, what: str, limit_name: str = "max_end") -> np.ndarray:
    """Every hom in the solution set of ``sys`` as a ``(count, m, n)`` array (possibly empty)."""
    count = sys.solution_count()
    if not count:
        return np.zeros((0, sys.m, sys.n), dtype=np.int64)
    limit = getattr(guards(), limit_name)
    if count > limit:
        raise SizeGuard(what, count, limit)
    part, kern = sys.solve()
    mats = _span_matrices(part, kern, sys.M, sys.N, limit)
    if len(mats) != count:
        raise InternalAssertion("affine hom enumeration disagrees with the predicted count")
    return mats


def non_bijective(M: FiniteModule, N: FiniteModule, mats) -> np.ndarray:
    """Positions of the matrices in ``mats`` that are not bijections ``M -> N``."""
    if M.size != N.size:
        return np.arange(len(mats))
    if M.size == 1 or not len(mats):
        return np.zeros(0, dtype=np.int64)
    imgs = N.encode(np.einsum("xg,igh->ixh", M.coords, mats))
    return np.flatnonzero(~(imgs[:, 1:] != 0).all(axis=1))


def solve_homs(M, N, constrain) -> tuple | None:
    """Affine set of homs satisfying extra constraints added by ``constrain(system)``."""
    sys = HomSystem(M, N)
    constrain(sys)
    return sys.solve()


# ---- endomorphism rings --------------------------------------------------------

class EndRing:
    """``End(M)`` as a FiniteRing with ``(f g)(x) = f(g(x))``.

    Ring element ``i`` corresponds to ``matrices[i]``.
    """

    def __init__(self, M: FiniteModule):
        self.module = M
        homs = hom_set(M, M)
        self.homs = homs
        m = M.m
        if m == 0:
            raise SpecError("the zero module has the zero endomorphism ring")
        flat_orders = tuple(M.orders) * m
        d = groups.decompose(homs.matrices.reshape(len(homs), -1), flat_orders)
        self._dec = d
        k = len(d.orders)
        gens = d.gens.reshape(k, m, m)
        cvecs = groups.coefficient_vectors(d.orders)
        consts = np.zeros((k, k, k), dtype=np.int64)
        for a in range(k):
            for b in range(k):
                comp = (gens[b] @ gens[a]) % M._ord     # gens[a] o gens[b]
                consts[a, b] = cvecs[d.index(comp.reshape(-1))]
        one = cvecs[d.index(np.eye(m, dtype=np.int64).reshape(-1))]
        labels = [f"h{a}" for a in range(k)]
        self.ring = FiniteRing(f"End({M.name})", d.orders, consts, one, labels, validate=False)
        # ring index i -> matrix (mixed-radix order of the coefficient vectors)
        self.matrices = d.elements.reshape(-1, m, m) % M._ord
        self.matrices.setflags(write=False)

    def __len__(self):
        return self.ring.size

    def hom(self, i) -> ModuleHom:
        return ModuleHom(self.module, self.module, self.matrices[int(i)])

    def index(self, H) -> int:
        return self._dec.index(np.asarray(H, dtype=np.int64).reshape(-1) % np.array(tuple(self.module.orders) * self.module.m))

    def index_many(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64) % self.module._ord
        return np.array([self._dec.index_of[k] for k in groups.keys(mats.reshape(len(mats), -1))], dtype=np.int64)

    @cached_property
    def images(self) -> np.ndarray:
        """``images[i, x]`` = index of ``h_i(x)``."""
        M = self.module
        guards().check(f"image table of End({M.name})", self.ring.size * M.size, "max_end") \
            if self.ring.size * M.size > 2 ** 24 else None
        return M.encode(np.einsum("xg,igh->ixh", M.coords, self.matrices))

    def validate(self):
        """Check that ring multiplication is composition on every pair of basis homs."""
        R = self.ring
        for a in R.basis:
            for b in R.basis:
                comp = (self.matrices[b] @ self.matrices[a]) % self.module._ord
                if self.index(comp) != R.table[a, b]:
                    raise InternalAssertion("End ring multiplication is not composition")
        if not np.array_equal(self.matrices[R.one], np.eye(self.module.m, dtype=np.int64) % self.module._ord[None, :]):
            raise InternalAssertion("End ring identity is not the identity map")


_end_cache: dict = {}


def end_ring(M: FiniteModule) -> EndRing:
    hit = _end_cache.get(id(M))
    if hit is not None and hit.module is M:
        return hit
    E = EndRing(M)
    _end_cache[id(M)] = E
    return E


def aut_group(M: FiniteModule) -> list[int]:
    """Automorphisms as EndRing indices (the units of End(M))."""
    from ..rings.structure import units
    return units(end_ring(M).ring).elements.tolist()


def is_isomorphic(M: FiniteModule, N: FiniteModule):
    """``(True, hom)`` with the least bijective hom, or ``(False, None)``."""
    if M.ring is not N.ring:
        raise SpecError("modules over different rings")
    if M.size != N.size:
        return False, None
    if M.size == 1:
        return True, ModuleHom(M, N, np.zeros((M.m, N.m), dtype=np.int64))
    if _invariant_orders(M) != _invariant_orders(N):
        return False, None
    homs = hom_set(M, N)
    imgs = N.encode(np.einsum("xg,igh->ixh", M.coords, homs.matrices))
    inj = (imgs[:, 1:] != 0).all(axis=1)
    if not inj.any():
        return False, None
    return True, homs.hom(int(np.argmax(inj)))


def _invariant_orders(M):
    """Elementary-divisor multiset of the additive group (element-order histogram)."""
    from collections import Counter
    if M.m == 0:
        return ()
    c = M.coords
    orders = np.ones(M.size, dtype=np.int64)
    for g, o in enumerate(M.orders):
        col = c[:, g]
        from math import gcd
        ords = np.array([o // gcd(int(v), o) for v in range(o)], dtype=np.int64)[col]
        orders = np.lcm(orders, ords)
    return tuple(sorted(Counter(orders.tolist()).items()))
