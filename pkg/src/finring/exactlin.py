"""Exact linear algebra over Z/nZ.

Row-vector convention throughout: a system is written ``x . A = b`` and a
matrix acts on the right of row vectors.  The canonical form is the Howell
form, whose row span is a complete invariant of the submodule of (Z/nZ)^m it
generates, including when n has zero divisors.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np


@dataclass(frozen=True, eq=False)
class ModMatrix:
    """Dense matrix with entries reduced modulo ``modulus``."""

    data: np.ndarray
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        arr %= self.modulus
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, rows, modulus, cols=None):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=np.int64), modulus)
        return cls(np.array(rows, dtype=np.int64), modulus)

    @classmethod
    def identity(cls, n, modulus):
        return cls(np.eye(n, dtype=np.int64), modulus)

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    def tolist(self):
        return self.data.tolist()

    def __matmul__(self, other):
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        return ModMatrix(self.data @ other.data, self.modulus)

    def __eq__(self, other):
        return (isinstance(other, ModMatrix) and self.modulus == other.modulus
                and self.data.shape == other.data.shape
                and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.modulus, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"ModMatrix({self.tolist()}, mod {self.modulus})"


def gcdex(a, b, n):
    """Return ``(g, s, t, u, v)`` with ``s*a + t*b = g``, ``u*a + v*b = 0``
    and ``[[s, t], [u, v]]`` invertible modulo ``n``."""
    a %= n
    b %= n
    if a == 0 and b == 0:
        return 0, 1, 0, 0, 1
    r0, r1, s0, s1, t0, t1 = a, b, 1, 0, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g = r0
    return g % n, s0 % n, t0 % n, (-(b // g)) % n, (a // g) % n


def unit_normalizer(a, n):
    """A unit ``w`` of Z/nZ with ``w*a = gcd(a, n)`` (mod n)."""
    a %= n
    if a == 0:
        return 1
    g = gcd(a, n)
    m = n // g
    if m == 1:
        return 1
    w0 = pow(a // g, -1, m)
    w = w0
    while gcd(w, n) != 1:
        w += m
    return w % n


def _howell_gf2(data):
    """Reduced row echelon form over F_2 on bit-packed rows."""
    m, n = data.shape
    rows = [sum(1 << j for j in range(n) if data[i, j] & 1) for i in range(m)]
    urows = [1 << i for i in range(m)]
    r = 0
    for c in range(n):
        bit = 1 << c
        piv = next((i for i in range(r, m) if rows[i] & bit), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            urows[r], urows[piv] = urows[piv], urows[r]
        for i in range(m):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
                urows[i] ^= urows[r]
        r += 1
        if r == m:
            break
    H = np.array([[(x >> j) & 1 for j in range(n)] for x in rows], dtype=np.int64).reshape(m, n)
    U = np.array([[(x >> j) & 1 for j in range(m)] for x in urows], dtype=np.int64).reshape(m, m)
    return H, U


def howell_form(A: ModMatrix):
    """Howell normal form.

    Returns ``(H, U)`` with ``U`` invertible and ``U . A' = H`` where ``A'`` is
    ``A`` stacked with as many zero rows as the saturation steps required
    (``H.rows - A.rows`` of them).  Nonzero rows of ``H`` come first, ordered
    by pivot column; every pivot divides the modulus and entries above a
    pivot are reduced modulo it.
    """
    N = A.modulus
    if N == 2:
        H, U = _howell_gf2(A.data)
        return ModMatrix(H, N), ModMatrix(U, N)
    H = [row.copy() for row in A.data]
    m0, ncols = A.rows, A.cols
    U = [row.copy() for row in np.eye(m0, dtype=np.int64)]

    def add_zero_row():
        U[:] = [np.append(row, 0) for row in U]
        e = np.zeros(len(U) + 1, dtype=np.int64)
        e[-1] = 1
        U.append(e)
        H.append(np.zeros(ncols, dtype=np.int64))

    r = 0
    for c in range(ncols):
        if r >= len(H):
            break
        for i in range(r + 1, len(H)):
            if H[i][c] % N == 0:
                continue
            g, s, t, u, v = gcdex(int(H[r][c]), int(H[i][c]), N)
            H[r], H[i] = (s * H[r] + t * H[i]) % N, (u * H[r] + v * H[i]) % N
            U[r], U[i] = (s * U[r] + t * U[i]) % N, (u * U[r] + v * U[i]) % N
        if H[r][c] % N == 0:
            continue
        w = unit_normalizer(int(H[r][c]), N)
        H[r] = (w * H[r]) % N
        U[r] = (w * U[r]) % N
        p = int(H[r][c])
        for i in range(r):
            q = int(H[i][c]) // p
            if q:
                H[i] = (H[i] - q * H[r]) % N
                U[i] = (U[i] - q * U[r]) % N
        mult = N // p
        if ((mult * H[r]) % N).any():
            z = next((i for i in range(r + 1, len(H)) if not H[i].any()), None)
            if z is None:
                add_zero_row()
                z = len(H) - 1
            H[z] = (H[z] + mult * H[r]) % N
            U[z] = (U[z] + mult * U[r]) % N
        r += 1
    Hm = np.array(H, dtype=np.int64).reshape(len(H), ncols)
    Um = np.array(U, dtype=np.int64).reshape(len(U), len(U))
    return ModMatrix(Hm, N), ModMatrix(Um, N)


def howell_basis(A: ModMatrix) -> ModMatrix:
    """Nonzero rows of the Howell form: the canonical generating set of the row span."""
    H, _ = howell_form(A)
    keep = [i for i in range(H.rows) if H.data[i].any()]
    return ModMatrix(H.data[keep].reshape(len(keep), A.cols), A.modulus)


def pivots(H: ModMatrix):
    """``[(row, col, pivot_value)]`` for the nonzero rows of an echelon matrix."""
    out = []
    for i in range(H.rows):
        nz = np.flatnonzero(H.data[i])
        if nz.size:
            c = int(nz[0])
            out.append((i, c, int(H.data[i, c])))
    return out


def span_size(A: ModMatrix) -> int:
    """Number of elements in the row span of ``A``."""
    B = howell_basis(A)
    return prod(A.modulus // p for _, _, p in pivots(B))


def same_span(A: ModMatrix, B: ModMatrix) -> bool:
    if A.modulus != B.modulus or A.cols != B.cols:
        return False
    return howell_basis(A) == howell_basis(B)


def reduce_vector(H: ModMatrix, v):
    """Reduce ``v`` against an echelon matrix; returns ``(remainder, coefficients)``.

    The remainder is zero exactly when ``v`` lies in the row span, provided
    ``H`` is in Howell form.
    """
    N = H.modulus
    w = np.array(v, dtype=np.int64) % N
    coeffs = np.zeros(H.rows, dtype=np.int64)
    for i, c, p in pivots(H):
        if w[c] % p:
            continue
        q = int(w[c]) // p
        if q:
            w = (w - q * H.data[i]) % N
            coeffs[i] = q
    return w, coeffs


def in_span(A: ModMatrix, v) -> bool:
    H, _ = howell_form(A)
    rem, _ = reduce_vector(H, v)
    return not rem.any()


def kernel_generators(A: ModMatrix) -> list[np.ndarray]:
    """Generators of ``{x : x . A = 0}`` (a submodule of (Z/nZ)^rows)."""
    m, n = A.rows, A.cols
    N = A.modulus
    aug = ModMatrix(np.hstack([A.data, np.eye(m, dtype=np.int64)]), N)
    H = howell_basis(aug)
    return [H.data[i, n:].copy() for i in range(H.rows) if not H.data[i, :n].any()]


@dataclass(frozen=True, eq=False)
class LinearSolution:
    """Affine solution set ``particular + span(kernel)`` of ``x . A = b``."""

    particular: np.ndarray
    kernel: list
    modulus: int

    def size(self):
        if not self.kernel:
            return 1
        return span_size(ModMatrix(np.array(self.kernel), self.modulus))


def solve_linear(A: ModMatrix, b) -> LinearSolution | None:
    """Solve ``x . A = b``; ``None`` when the system is inconsistent."""
    m, n = A.rows, A.cols
    N = A.modulus
    b = np.array(b, dtype=np.int64).reshape(n) % N
    aug = ModMatrix(np.hstack([A.data, np.eye(m, dtype=np.int64)]), N)
    H, _ = howell_form(aug)
    target = np.concatenate([b, np.zeros(m, dtype=np.int64)])
    rem, _ = reduce_vector(H, target)
    if rem[:n].any():
        return None
    x = (-rem[n:]) % N
    kernel = [H.data[i, n:].copy() for i in range(H.rows)
              if H.data[i].any() and not H.data[i, :n].any()]
    return LinearSolution(x, kernel, N)


def enumerate_span(gens, modulus, limit=None) -> np.ndarray:
    """All elements of the Z/nZ-span of ``gens`` (rows), sorted lexicographically."""
    gens = [np.asarray(g, dtype=np.int64) % modulus for g in gens]
    if not gens:
        raise ValueError("need at least one generator to fix the dimension")
    dim = gens[0].shape[0]
    if limit is not None:
        size = span_size(ModMatrix(np.array(gens), modulus))
        if size > limit:
            from .errors import SizeGuard
            raise SizeGuard("span enumeration", size, limit)
    elems = np.zeros((1, dim), dtype=np.int64)
    for g in gens:
        mults = (np.arange(modulus, dtype=np.int64)[:, None] * g) % modulus
        elems = np.unique(((elems[:, None, :] + mults[None, :, :]) % modulus).reshape(-1, dim), axis=0)
    return elems
