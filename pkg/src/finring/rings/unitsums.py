"""Sums of units, matrices over finite rings and the diagonal constructions.

Matrices over a ring ``R`` are integer arrays of ring element indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import lcm

import numpy as np

from .. import exactlin
from ..errors import InternalAssertion, NotSemisimple, PreconditionViolation, SearchExhausted
from .core import FiniteRing
from .structure import (artin_wedderburn, is_abelian_regular, jacobson_radical, two_unit_witnesses,
                        units)


@dataclass(frozen=True)
class UnitSumWitness:
    target: object
    summands: tuple
    inverses: tuple

    @property
    def k(self):
        return len(self.summands)


def verify_unit_sum(ring: FiniteRing, w: UnitSumWitness, one=None) -> bool:
    """Recompute the witness from ring arithmetic (``one`` defaults to the ring identity)."""
    one = ring.one if one is None else one
    t = ring.table
    for u, v in zip(w.summands, w.inverses):
        if t[u, v] != one or t[v, u] != one:
            return False
    total = 0
    for u in w.summands:
        total = ring.add(total, u)
    return total == w.target


# ---- sums of k units -------------------------------------------------------

def unit_sum_masks(ring: FiniteRing, k: int) -> list[np.ndarray]:
    """``masks[j]`` marks the sums of exactly ``j + 1`` units."""
    U = units(ring).elements
    coords = ring.coords
    masks = [units(ring).mask.copy()]
    for _ in range(k - 1):
        cur = np.flatnonzero(masks[-1])
        nxt = np.zeros(ring.size, dtype=bool)
        for chunk in np.array_split(cur, max(1, len(cur) * len(U) // 200_000)):
            nxt[ring.encode(coords[chunk][:, None, :] + coords[U][None, :, :]).reshape(-1)] = True
        masks.append(nxt)
    return masks


def sum_of_k_units(ring: FiniteRing, a: int, k: int) -> UnitSumWitness | None:
    """Least-first witness ``a = u_1 + ... + u_k`` or None when no such sum exists.

    ``k = 2`` is a hash join against the unit mask; larger ``k`` peels one unit
    at a time using the reachable sets of ``j``-fold sums, so a None answer is
    an exhaustive verdict.
    """
    if k < 1:
        raise PreconditionViolation("k must be at least 1")
    ug = units(ring)
    U = ug.elements
    masks = unit_sum_masks(ring, k) if k > 2 else [ug.mask]
    coords = ring.coords
    summands = []
    rest = int(a)
    for j in range(k, 1, -1):
        diffs = ring.encode(coords[rest] - coords[U])
        need = ug.mask if j == 2 else masks[j - 2]
        ok = need[diffs]
        if not ok.any():
            return None
        i = int(np.argmax(ok))
        summands.append(int(U[i]))
        rest = int(diffs[i])
    if not ug.mask[rest]:
        return None
    summands.append(rest)
    w = UnitSumWitness(int(a), tuple(summands), tuple(int(ug.inverse[u]) for u in summands))
    if not verify_unit_sum(ring, w):
        raise InternalAssertion("unit-sum witness does not verify")
    return w


# ---- matrices over R -------------------------------------------------------

def mat_identity(ring: FiniteRing, n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(out, ring.one)
    return out


def mat_add(ring, A, B):
    return ring.encode(ring.coords[A] + ring.coords[B])


def mat_sub(ring, A, B):
    return ring.encode(ring.coords[A] - ring.coords[B])


def mat_neg(ring, A):
    return ring.neg_index[A]


def mat_mul(ring: FiniteRing, A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    prods = ring.table[A[:, :, None], B[None, :, :]]
    return ring.encode(ring.coords[prods].sum(axis=1))


def is_diagonal(A) -> bool:
    A = np.asarray(A)
    return not (A - np.diag(np.diag(A))).any()


def _right_mult_matrix(ring: FiniteRing, a: int) -> np.ndarray:
    """``rho[b, c]``: coordinate c of ``basis_b * a``."""
    return ring.coords[ring.table[ring.basis, a]]


def matrix_inverse(ring: FiniteRing, A) -> np.ndarray | None:
    """Two-sided inverse of a square matrix over ``ring``, or None.

    Solves ``X A = I`` row by row as a linear system over ``Z_L`` (each
    unknown coordinate ``x`` of order ``d`` is embedded as ``(L/d) x``), then
    confirms ``A X = I``.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    k = ring.k
    d = list(ring.orders)
    L = lcm(*d)
    nv = n * k
    cols = []
    for v in range(nv):
        c = np.zeros(nv, dtype=np.int64)
        c[v] = d[v % k]
        cols.append(c)
    rho = {}
    for j in range(n):
        for c in range(k):
            col = np.zeros(nv, dtype=np.int64)
            for l in range(n):
                a = int(A[l, j])
                if a not in rho:
                    rho[a] = _right_mult_matrix(ring, a)
                for b in range(k):
                    num = d[b] * int(rho[a][b, c])
                    if num % d[c]:
                        raise InternalAssertion("right multiplication is ill-defined")
                    col[l * k + b] = num // d[c]
            cols.append(col)
    M = exactlin.ModMatrix(np.stack(cols, axis=1) % L, max(L, 2))
    one = ring.one_vec
    X = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        rhs = [0] * nv
        for j in range(n):
            for c in range(k):
                rhs.append((L // d[c]) * (int(one[c]) if i == j else 0))
        sol = exactlin.solve_linear(M, np.array(rhs, dtype=np.int64))
        if sol is None:
            return None
        y = np.asarray(sol.particular, dtype=np.int64).reshape(n, k)
        scale = np.array([L // o for o in d], dtype=np.int64)
        X[i] = ring.encode((y // scale) % ring._ord)
    I = mat_identity(ring, n)
    if not (np.array_equal(mat_mul(ring, X, A), I) and np.array_equal(mat_mul(ring, A, X), I)):
        return None
    return X


@dataclass(frozen=True)
class MatrixUnitSum:
    """``target = A + B`` with ``A``, ``B`` invertible (inverses stored)."""

    target: np.ndarray
    A: np.ndarray
    B: np.ndarray
    A_inv: np.ndarray
    B_inv: np.ndarray


def verify_matrix_unit_sum(ring, w: MatrixUnitSum) -> bool:
    n = w.target.shape[0]
    I = mat_identity(ring, n)
    return (np.array_equal(mat_add(ring, w.A, w.B), w.target)
            and all(np.array_equal(mat_mul(ring, X, Y), I)
                    for X, Y in ((w.A, w.A_inv), (w.A_inv, w.A), (w.B, w.B_inv), (w.B_inv, w.B))))


def _block2(ring, a, b):
    """``diag(a, b) = [[a, 1], [1, 0]] + [[0, -1], [-1, b]]`` with closed-form inverses."""
    one, m1 = ring.one, int(ring.neg_index[ring.one])
    A = np.array([[a, one], [one, 0]])
    B = np.array([[0, m1], [m1, b]])
    A_inv = np.array([[0, one], [one, int(ring.neg_index[a])]])
    B_inv = np.array([[int(ring.neg_index[b]), m1], [m1, 0]])
    return A, B, A_inv, B_inv


def _det3(ring, E):
    """Vectorised determinant of 3x3 matrices over a commutative ring; ``E[i][j]`` are index arrays."""
    t, c = ring.table, ring.coords

    def m(x, y):
        return t[x, y]

    terms = [
        (+1, m(E[0][0], m(E[1][1], E[2][2]))), (-1, m(E[0][0], m(E[1][2], E[2][1]))),
        (-1, m(E[0][1], m(E[1][0], E[2][2]))), (+1, m(E[0][1], m(E[1][2], E[2][0]))),
        (+1, m(E[0][2], m(E[1][0], E[2][1]))), (-1, m(E[0][2], m(E[1][1], E[2][0]))),
    ]
    acc = sum(s * c[x] for s, x in terms)
    return ring.encode(acc)


FAMILY_LIMIT = 1 << 20
_PERMS = tuple(permutations(range(3)))


def _search3(ring: FiniteRing, a: int, b: int, c: int):
    """Trailing 3x3 block: ``diag(a, b, c) = A + B``.

    ``A`` is first sought in the family ``[[d0, 1, x], [1, 0, y], [z, w, s]]``
    for each reordering ``(d0, d1, d2)`` of the diagonal (a simultaneous row
    and column permutation preserves invertibility), then over all of M_3(R)
    when that is within ``FAMILY_LIMIT``.
    """
    key = (ring.fingerprint(), a, b, c)
    hit = _block3_cache.get(key)
    if hit is not None:
        return hit
    size = ring.size
    diag = (a, b, c)
    umask = units(ring).mask
    one = ring.one
    searched = 0

    def family(perm):
        grid = np.indices((size,) * 5).reshape(5, -1)
        x, y, z, w, s = grid
        n = grid.shape[1]
        full = lambda v: np.full(n, v, dtype=np.int64)
        return [[full(diag[perm[0]]), full(one), x], [full(one), full(0), y], [z, w, s]], n

    def everything(perm):
        grid = np.indices((size,) * 9).reshape(9, -1)
        return [[grid[3 * i + j] for j in range(3)] for i in range(3)], grid.shape[1]

    stages = []
    if size ** 5 <= FAMILY_LIMIT:
        stages += [(family, perm) for perm in _PERMS]
    if size ** 9 <= FAMILY_LIMIT:
        stages.append((everything, (0, 1, 2)))
    for make, perm in stages:
        D = np.diag([diag[i] for i in perm]).astype(np.int64)
        E, n = make(perm)
        searched += n
        if ring.is_commutative:
            F = [[ring.encode(ring.coords[D[i, j]] - ring.coords[E[i][j]]) for j in range(3)] for i in range(3)]
            order = np.flatnonzero(umask[_det3(ring, E)] & umask[_det3(ring, F)])
        else:
            order = range(n)
        for idx in order:
            A = np.array([[int(E[i][j][idx]) for j in range(3)] for i in range(3)], dtype=np.int64)
            B = mat_sub(ring, D, A)
            A_inv = matrix_inverse(ring, A)
            if A_inv is None:
                continue
            B_inv = matrix_inverse(ring, B)
            if B_inv is None:
                continue
            # undo the reordering: entry (i, j) of the permuted block sits at (perm[i], perm[j])
            back = np.argsort(perm)
            out = tuple(X[np.ix_(back, back)] for X in (A, B, A_inv, B_inv))
            _block3_cache[key] = out
            return out
    raise SearchExhausted(f"3x3 two-unit split of diag{diag} over {ring.name}", searched)


_block3_cache: dict = {}


def henriksen_diagonal(ring: FiniteRing, diag) -> MatrixUnitSum:
    """Split a diagonal matrix (given by its diagonal) into two invertible matrices.

    Consecutive pairs of diagonal entries use the closed-form 2x2 identity; an
    odd size leaves a trailing 3x3 block that is resolved by bounded search.
    """
    diag = [int(x) for x in diag]
    n = len(diag)
    if n < 2:
        raise PreconditionViolation("diagonal splitting needs n >= 2")
    A = np.zeros((n, n), dtype=np.int64)
    B, A_inv, B_inv = A.copy(), A.copy(), A.copy()
    pos = 0
    while pos < n:
        size = 3 if n - pos == 3 else 2
        sl = slice(pos, pos + size)
        if size == 2:
            blocks = _block2(ring, diag[pos], diag[pos + 1])
        else:
            blocks = _search3(ring, *diag[pos:pos + 3])
        for dst, src in zip((A, B, A_inv, B_inv), blocks):
            dst[sl, sl] = src
        pos += size
    target = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(target, diag)
    w = MatrixUnitSum(target, A, B, A_inv, B_inv)
    if not verify_matrix_unit_sum(ring, w):
        raise InternalAssertion("diagonal two-unit witness does not verify")
    return w


# ---- diagonal reduction over semisimple rings --------------------------------

def _field_inverse(fq, a):
    return int(units(fq).inverse[a])


def _eliminate(fq: FiniteRing, A: np.ndarray):
    """Gaussian elimination over a field: ``P A Q = diag(1, ..., 1, 0, ..., 0)``."""
    n, m = A.shape
    P = mat_identity(fq, n)
    Q = mat_identity(fq, m)
    A = A.copy()
    r = 0
    while r < min(n, m):
        nz = np.argwhere(A[r:, r:] != 0)
        if not len(nz):
            break
        i, j = (int(v) + r for v in nz[0])
        A[[r, i]] = A[[i, r]]
        P[[r, i]] = P[[i, r]]
        A[:, [r, j]] = A[:, [j, r]]
        Q[:, [r, j]] = Q[:, [j, r]]
        inv = _field_inverse(fq, A[r, r])
        A[r] = fq.table[inv, A[r]]
        P[r] = fq.table[inv, P[r]]
        for i2 in range(n):
            if i2 != r and A[i2, r]:
                f = int(A[i2, r])
                A[i2] = fq.encode(fq.coords[A[i2]] - fq.coords[fq.table[f, A[r]]])
                P[i2] = fq.encode(fq.coords[P[i2]] - fq.coords[fq.table[f, P[r]]])
        for j2 in range(m):
            if j2 != r and A[r, j2]:
                f = int(A[r, j2])
                A[:, j2] = fq.encode(fq.coords[A[:, j2]] - fq.coords[fq.table[A[:, r], f]])
                Q[:, j2] = fq.encode(fq.coords[Q[:, j2]] - fq.coords[fq.table[Q[:, r], f]])
        r += 1
    return P, A, Q


def diagonal_reduction(ring: FiniteRing, A):
    """``(P, D, Q)`` with ``P``, ``Q`` invertible and ``P A Q = D`` diagonal.

    Each simple block ``M_n(F_q)`` turns an ``m x m`` matrix over the block
    into an ``mn x mn`` matrix over ``F_q``; elimination there gives a
    diagonal of 1s and 0s, which is block diagonal when read back.
    """
    if not jacobson_radical(ring).is_zero():
        raise NotSemisimple(f"{ring.name} has a nonzero Jacobson radical")
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[0]
    t = ring.table
    P = np.zeros((m, m), dtype=np.int64)
    Q = P.copy()
    for blk in artin_wedderburn(ring):
        c, n, model = blk.central_idempotent, blk.n, blk.model
        fq = model if n == 1 else _base_field(blk.q)
        kq = fq.k
        part = t[c, A]
        big = np.zeros((m * n, m * n), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                mc = model.coords[blk.from_ring[int(part[i, j])]].reshape(n, n, kq)
                big[i * n:(i + 1) * n, j * n:(j + 1) * n] = fq.encode(mc)
        Pb, _, Qb = _eliminate(fq, big)
        for src, dst in ((Pb, P), (Qb, Q)):
            for i in range(m):
                for j in range(m):
                    cell = fq.coords[src[i * n:(i + 1) * n, j * n:(j + 1) * n]].reshape(-1)
                    r = blk.to_ring[model.encode(cell)]
                    dst[i, j] = ring.add(int(dst[i, j]), int(r))
    D = mat_mul(ring, mat_mul(ring, P, A), Q)
    if not is_diagonal(D):
        raise InternalAssertion("diagonal reduction left off-diagonal entries")
    if matrix_inverse(ring, P) is None or matrix_inverse(ring, Q) is None:
        raise InternalAssertion("diagonal reduction produced a singular transform")
    return P, D, Q


@lru_cache(maxsize=None)
def _base_field(q):
    from .catalog import field
    return field(q)


# ---- three-unit extension -----------------------------------------------------

@dataclass(frozen=True)
class ThreeUnitExtension:
    phi: int                       # left multiplier of S extending f
    witness: UnitSumWitness        # phi as a sum of three units of S
    parts: dict                    # intermediate elements of the construction


def _left_identity(ring, members):
    """Least idempotent of ``members`` acting as a left identity on all of them."""
    t = ring.table
    for g in members:
        if t[g, g] == g and (t[g, members] == members).all():
            return int(g)
    raise PreconditionViolation("right ideal has no idempotent generator")


def _corner_inverse(ring, x, e):
    t = ring.table
    members = np.unique(t[e][t[:, e]])
    hit = members[(t[x, members] == e) & (t[members, x] == e)]
    return int(hit[0]) if len(hit) else None


def three_unit_extension(td, N_members, f_images) -> ThreeUnitExtension:
    """Extend a hom ``f: N -> S`` from a right ideal ``N`` of ``S = T1 x T2`` to a
    left multiplication that is a sum of three units.

    ``td`` is a type decomposition of ``S``; ``f_images[i]`` is ``f(N_members[i])``.
    The restriction of ``f`` to ``e1 N`` must be injective.
    """
    S = td.ring
    t = S.table
    e1, e2 = td.e1, td.e2
    N = np.asarray(N_members, dtype=np.int64)
    fmap = dict(zip(N.tolist(), (int(v) for v in f_images)))
    if len(fmap) != len(N):
        raise PreconditionViolation("f must assign one image per member of N")
    Nmask = np.zeros(S.size, dtype=bool)
    Nmask[N] = True
    if not Nmask[t[N][:, np.arange(S.size)]].all():
        raise PreconditionViolation("N is not a right ideal")
    for x in N:
        for y in N:
            if fmap[int(S.add(x, y))] != S.add(fmap[int(x)], fmap[int(y)]):
                raise PreconditionViolation("f is not additive")
        for r in S.basis:
            if fmap[int(t[x, r])] != t[fmap[int(x)], r]:
                raise PreconditionViolation("f is not right linear")
    if e1 and not is_abelian_regular(_corner(S, e1)):
        raise PreconditionViolation("T1 is not abelian regular")
    N1 = np.unique(t[e1, N])
    N2 = np.unique(t[e2, N])
    f1 = [fmap[int(x)] for x in N1]
    if len(set(f1)) != len(N1):
        raise PreconditionViolation("f is not injective on e1 N")
    # T1: phi1 = a + b with a = f(e), b an isomorphism from the complement of N1 onto one of Im f1
    e = _left_identity(S, N1)
    a = fmap[e]
    im1 = np.unique(np.array(f1, dtype=np.int64))
    e_img = _left_identity(S, im1)
    k1 = int(S.sub(e1, e))
    l1 = int(S.sub(e1, e_img))
    K1 = np.unique(t[k1])
    cands = np.unique(t[l1][t[:, k1]])
    b = None
    for x in cands:
        if len(np.unique(t[x, K1])) == len(K1):
            b = int(x)
            break
    if b is None:
        raise PreconditionViolation("complements of N1 and f(N1) are not isomorphic")
    phi1 = int(S.add(a, b))
    inv1 = _corner_inverse(S, phi1, e1)
    if inv1 is None:
        raise InternalAssertion("T1 component of the extension is not a unit")
    # T2: phi2 = f(e'') where e'' generates N2, split as v1 + (v3 + v4)
    e_2 = _left_identity(S, N2)
    c = fmap[e_2]
    first = two_unit_witnesses(S, e2, [c])
    if c not in first:
        raise PreconditionViolation("T2 element is not a sum of two units")
    v1, v1i, w, _ = first[c]
    second = two_unit_witnesses(S, e2, [w])
    if w not in second:
        raise PreconditionViolation("T2 element is not a sum of two units")
    v3, v3i, v4, v4i = second[w]
    m_e1 = int(S.neg_index[e1])
    summands = (int(S.add(phi1, v1)), int(S.add(e1, v3)), int(S.add(m_e1, v4)))
    inverses = (int(S.add(inv1, v1i)), int(S.add(e1, v3i)), int(S.add(m_e1, v4i)))
    phi = int(S.add(phi1, c))
    wit = UnitSumWitness(phi, summands, inverses)
    if not verify_unit_sum(S, wit):
        raise InternalAssertion("three-unit witness does not verify")
    bad = [int(x) for x in N if t[phi, x] != fmap[int(x)]]
    if bad:
        raise InternalAssertion(f"extension disagrees with f on {bad[:3]}")
    parts = {"e": e, "a": a, "b": b, "phi1": phi1, "e2_generator": e_2, "phi2": c,
             "phi2_split": (v1, v3, v4)}
    return ThreeUnitExtension(phi, wit, parts)


def _corner(S, e):
    from .core import corner_ring
    return corner_ring(S, e)[0]
