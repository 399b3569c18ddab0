"""Finite unital rings given by cyclic additive factors and structure constants.

Elements are handled by their *index*: the position of the coefficient
vector in mixed-radix order over ``additive_orders`` (first coordinate most
significant).  Index 0 is always zero.  ``ring.coeffs(i)`` and
``ring.elem(vec)`` convert between the two views.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm, prod

import numpy as np

from .. import groups
from ..config import guards
from ..errors import AxiomViolation, InternalAssertion, SizeGuard, SpecError


class FiniteRing:
    """A finite associative unital ring.

    ``mult_constants[i, j]`` is the coefficient vector of ``b_i * b_j`` where
    ``b_i`` is the i-th additive generator, of order ``additive_orders[i]``.
    Construction validates well-definedness, associativity and the identity
    on every basis pair/triple and raises :class:`AxiomViolation` otherwise.
    """

    def __init__(self, name, additive_orders, mult_constants, one, basis_labels=None, validate=True):
        self.name = str(name)
        self.orders = tuple(int(d) for d in additive_orders)
        if not self.orders:
            raise SpecError("a ring needs at least one additive generator")
        if any(d < 2 for d in self.orders):
            raise SpecError("additive orders must be >= 2")
        k = len(self.orders)
        self.k = k
        self._ord = np.array(self.orders, dtype=np.int64)
        c = np.array(mult_constants, dtype=np.int64)
        if c.shape != (k, k, k):
            raise SpecError(f"structure constants must have shape {(k, k, k)}, got {c.shape}")
        self.consts = c % self._ord
        self.consts.setflags(write=False)
        one = np.array(one, dtype=np.int64).reshape(k) % self._ord
        self.one_vec = tuple(int(x) for x in one)
        self.basis_labels = tuple(basis_labels) if basis_labels else tuple(f"b{i}" for i in range(k))
        self.size = prod(self.orders)
        if self.size >= 1 << 62:            # element indices must fit in int64
            raise SizeGuard(f"ring {self.name}", self.size, 1 << 62)
        self._strides = np.array([prod(self.orders[i + 1:]) for i in range(k)], dtype=np.int64)
        if not any(self.one_vec):
            raise AxiomViolation("identity must be nonzero (the zero ring is excluded)", self.one_vec)
        if validate:
            self._validate()

    # ---- element views -------------------------------------------------
    def __repr__(self):
        return f"FiniteRing({self.name!r}, order={self.size})"

    def __len__(self):
        return self.size

    def elem(self, vec) -> int:
        v = np.array(vec, dtype=np.int64).reshape(self.k) % self._ord
        return int(v @ self._strides)

    def coeffs(self, i) -> tuple:
        return tuple(int(x) for x in self.coords[int(i)])

    def encode(self, arr) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64) % self._ord
        return arr @ self._strides

    @cached_property
    def coords(self) -> np.ndarray:
        guards().check(f"element list of {self.name}", self.size, "max_ring")
        c = groups.coefficient_vectors(self.orders)
        c.setflags(write=False)
        return c

    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def one(self) -> int:
        return self.elem(self.one_vec)

    def basis_element(self, i) -> int:
        v = [0] * self.k
        v[i] = 1
        return self.elem(v)

    @cached_property
    def basis(self) -> list[int]:
        return [self.basis_element(i) for i in range(self.k)]

    # ---- arithmetic on coefficient arrays --------------------------------
    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.einsum("...i,...j,ijl->...l", a, b, self.consts, optimize=True)
        return out % self._ord

    def add_vec(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self._ord

    # ---- arithmetic on indices ---------------------------------------------
    def add(self, a, b):
        return self.encode(self.coords[a] + self.coords[b])

    def sub(self, a, b):
        return self.encode(self.coords[a] - self.coords[b])

    def neg(self, a):
        return self.encode(-self.coords[a])

    def scale(self, n, a):
        return self.encode(n * self.coords[a])

    def mul(self, a, b):
        if self.size <= guards().max_ring:
            return self.table[a, b]
        return self.encode(self.mul_vec(self.coords[a], self.coords[b]))

    @cached_property
    def table(self) -> np.ndarray:
        """Full multiplication table ``table[a, b] = index(a*b)``."""
        guards().check(f"multiplication table of {self.name}", self.size, "max_ring")
        n = self.size
        dtype = np.int16 if n < 2 ** 15 else np.int32
        out = np.empty((n, n), dtype=dtype)
        c = self.coords
        step = max(1, 2 ** 20 // (n * self.k * self.k))
        for lo in range(0, n, step):
            hi = min(n, lo + step)
            prodv = np.einsum("ai,bj,ijl->abl", c[lo:hi], c, self.consts, optimize=True) % self._ord
            out[lo:hi] = prodv @ self._strides
        out.setflags(write=False)
        return out

    @cached_property
    def neg_index(self) -> np.ndarray:
        return self.encode(-self.coords)

    @cached_property
    def one_minus(self) -> np.ndarray:
        """``one_minus[a] = index(1 - a)``."""
        return self.encode(np.array(self.one_vec) - self.coords)

    @cached_property
    def characteristic(self) -> int:
        one = np.array(self.one_vec)
        e = lcm(*self.orders)
        for n in range(1, e + 1):
            if not ((n * one) % self._ord).any():
                return n
        raise InternalAssertion("characteristic not found")

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.consts, self.consts.transpose(1, 0, 2)))

    # ---- validation ------------------------------------------------------
    def _validate(self):
        k, o, c = self.k, self._ord, self.consts
        for i in range(k):
            for j in range(k):
                for d in (self.orders[i], self.orders[j]):
                    if ((d * c[i, j]) % o).any():
                        raise AxiomViolation("well-definedness (order annihilates product)", (i, j))
        eye = np.eye(k, dtype=np.int64)
        one = np.array(self.one_vec)
        for i in range(k):
            if not np.array_equal(self.mul_vec(one, eye[i]), eye[i] % o):
                raise AxiomViolation("left identity", (self.one_vec, i))
            if not np.array_equal(self.mul_vec(eye[i], one), eye[i] % o):
                raise AxiomViolation("right identity", (i, self.one_vec))
        # (b_i b_j) b_l == b_i (b_j b_l)
        left = np.einsum("ijm,mln->ijln", c, c) % o
        right = np.einsum("jlm,imn->ijln", c, c) % o
        bad = np.argwhere((left != right).any(axis=-1))
        if bad.size:
            i, j, l = (int(x) for x in bad[0])
            raise AxiomViolation("associativity", (i, j, l))

    # ---- serialisation -----------------------------------------------------
    def to_spec(self) -> dict:
        return {
            "name": self.name,
            "additive_orders": list(self.orders),
            "basis_labels": list(self.basis_labels),
            "mult_constants": self.consts.tolist(),
            "one": list(self.one_vec),
        }

    def fingerprint(self) -> bytes:
        return repr((self.orders, self.consts.tobytes(), self.one_vec)).encode()


def build_ring(spec) -> FiniteRing:
    """Validated ring from a spec dict (explicit constants or ``builtin``)."""
    if "builtin" in spec:
        from .catalog import from_builtin
        return from_builtin(spec["builtin"], name=spec.get("name"))
    try:
        return FiniteRing(spec.get("name", "R"), spec["additive_orders"], spec["mult_constants"],
                          spec["one"], spec.get("basis_labels"))
    except KeyError as exc:
        raise SpecError(f"ring spec missing field {exc}") from exc


# ---- subsets of a ring -------------------------------------------------------

def mask_of(ring: FiniteRing, members) -> np.ndarray:
    m = np.zeros(ring.size, dtype=bool)
    m[np.asarray(members, dtype=np.int64)] = True
    return m


def additive_closure(ring: FiniteRing, gens) -> np.ndarray:
    """Sorted indices of the additive subgroup generated by ``gens``."""
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    inside = np.zeros(ring.size, dtype=bool)
    inside[0] = True
    members = np.array([0], dtype=np.int64)
    for g in gens:
        if inside[g]:               # adds nothing to the subgroup built so far
            continue
        cyc = groups.span(ring.coords[g][None], ring.orders)
        members = np.unique(ring.encode(ring.coords[members][:, None, :] + cyc[None, :, :]).reshape(-1))
        inside[members] = True
    return members


@dataclass(frozen=True, eq=False)
class TwoSidedIdeal:
    """Two-sided ideal stored as sorted member indices plus a cyclic basis."""

    ring: FiniteRing
    members: np.ndarray

    @cached_property
    def mask(self):
        return mask_of(self.ring, self.members)

    @property
    def order(self):
        return len(self.members)

    def __contains__(self, a):
        return bool(self.mask[int(a)])

    def is_zero(self):
        return self.order == 1

    @cached_property
    def basis(self):
        if self.is_zero():
            return []
        d = groups.decompose(self.ring.coords[self.members], self.ring.orders)
        return [(int(self.ring.encode(g)), o) for g, o in zip(d.gens, d.orders)]

    def __eq__(self, other):
        return (isinstance(other, TwoSidedIdeal) and other.ring is self.ring
                and np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash(self.members.tobytes())


def is_two_sided_ideal(ring: FiniteRing, members) -> bool:
    mask = mask_of(ring, members)
    members = np.asarray(members)
    t = ring.table
    if not mask[ring.add(members[:, None], members[None, :])].all():
        return False
    return bool(mask[t[np.ix_(members, ring.basis)]].all() and mask[t[np.ix_(ring.basis, members)]].all())


def ideal_generated(ring: FiniteRing, gens) -> TwoSidedIdeal:
    """Smallest two-sided ideal containing ``gens``."""
    t = ring.table
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    cur = additive_closure(ring, gens)
    while True:
        prods = np.unique(np.concatenate([t[:, cur].ravel(), t[cur, :].ravel(), cur]))
        nxt = additive_closure(ring, prods)
        if len(nxt) == len(cur):
            return TwoSidedIdeal(ring, cur)
        cur = nxt


def materialize(parent: FiniteRing, members, one: int, name: str, base=None):
    """Package a subgroup (or a quotient of one) closed under multiplication as a ring.

    ``members`` lists the subgroup, ``one`` its identity element (a parent
    index) and ``base`` an optional ideal to factor out.  Returns
    ``(ring, decomposition)``; ``decomposition.index(parent_coords)`` maps
    parent elements to child indices.
    """
    members = np.asarray(members, dtype=np.int64)
    base_coords = None if base is None else parent.coords[np.asarray(base, dtype=np.int64)]
    d = groups.decompose(parent.coords[members], parent.orders, base_coords)
    if not d.orders:
        raise AxiomViolation("identity must be nonzero (the zero ring is excluded)", name)
    k = len(d.orders)
    gens = d.gens
    prodv = parent.mul_vec(gens[:, None, :], gens[None, :, :])
    strides = np.array([prod(d.orders[i + 1:]) for i in range(k)], dtype=np.int64)
    cvecs = groups.coefficient_vectors(d.orders)
    consts = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            consts[i, j] = cvecs[d.index(prodv[i, j])]
    one_vec = cvecs[d.index(parent.coords[one])]
    labels = [f"[{','.join(str(int(x)) for x in g)}]" for g in gens]
    return FiniteRing(name, d.orders, consts, one_vec, labels), d


@dataclass(frozen=True, eq=False)
class RingMap:
    """Index-level map between two rings (``table[i]`` is the image of element i)."""

    source: FiniteRing
    target: FiniteRing
    table: np.ndarray

    def __call__(self, a):
        return self.table[a]


def quotient_ring(ring: FiniteRing, ideal) -> tuple[FiniteRing, RingMap]:
    """``R/I`` with its projection.  ``ideal`` may be a TwoSidedIdeal or member list."""
    members = ideal.members if isinstance(ideal, TwoSidedIdeal) else np.asarray(ideal)
    if not is_two_sided_ideal(ring, members):
        raise SpecError("quotient by a subset that is not a two-sided ideal")
    q, d = materialize(ring, np.arange(ring.size), ring.one, f"{ring.name}/I", base=members)
    proj = np.array([d.index_of[k] for k in groups.keys(ring.coords)], dtype=np.int64)
    # child index order equals coefficient-vector order of the decomposition
    return q, RingMap(ring, q, proj)


def corner_ring(ring: FiniteRing, e: int, name=None) -> tuple[FiniteRing, RingMap]:
    """``eRe`` with identity ``e``; returns the ring and its inclusion into ``ring``."""
    t = ring.table
    if t[e, e] != e:
        raise SpecError("corner ring needs an idempotent")
    members = np.unique(t[e][t[:, e]])
    r, d = materialize(ring, members, e, name or f"e{ring.name}e")
    incl = ring.encode(d.elements)
    return r, RingMap(r, ring, incl)


def subring(ring: FiniteRing, members, one: int, name=None) -> tuple[FiniteRing, RingMap]:
    """Materialise a multiplicatively closed subgroup with identity ``one``."""
    r, d = materialize(ring, np.sort(np.asarray(members)), one, name or f"sub({ring.name})")
    return r, RingMap(r, ring, ring.encode(d.elements))
