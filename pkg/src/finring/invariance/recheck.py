"""Independent re-verification of report claims.

Only the ring/module constructors (which re-validate the axioms), coefficient
arithmetic and, for radical membership, the enumeration of End(M) are used.
"""
from __future__ import annotations

import json

import numpy as np

from ..modules.core import FiniteModule
from ..modules.homs import hom_set, is_linear
from ..rings.core import FiniteRing


class _Context:
    def __init__(self, ctx: dict):
        self._ring_specs = ctx.get("rings", {})
        self._module_specs = ctx.get("modules", {})
        self._rings: dict = {}
        self._modules: dict = {}
        self._ends: dict = {}

    def ring(self, key) -> FiniteRing:
        if key not in self._rings:
            s = self._ring_specs[key]
            self._rings[key] = FiniteRing(s.get("name", key), s["additive_orders"], s["mult_constants"], s["one"],
                                          s.get("basis_labels"))
        return self._rings[key]

    def module(self, key) -> FiniteModule:
        if key not in self._modules:
            s = self._module_specs[key]
            self._modules[key] = FiniteModule(self.ring(s["ring"]), s["additive_orders"], s["action_constants"],
                                              s.get("name", key))
        return self._modules[key]

    def end(self, key) -> np.ndarray:
        if key not in self._ends:
            self._ends[key] = hom_set(self.module(key), self.module(key)).matrices
        return self._ends[key]


# ---- module-map helpers ----------------------------------------------------------------

def _mat(M: FiniteModule, N: FiniteModule, H):
    return N.reduce(np.asarray(H, dtype=np.int64).reshape(M.m, N.m))


def _table(M, N, H):
    return N.encode(M.coords @ H)


def _bijective(M, H) -> bool:
    return len(np.unique(_table(M, M, H))) == M.size


def _eye(M):
    return np.eye(M.m, dtype=np.int64)


def _compose(M, F, G):
    """Matrix of ``f o g`` for endomorphisms given by matrices."""
    return M.reduce(G @ F)


def _eq(M, A, B) -> bool:
    return bool(np.array_equal(M.reduce(A), M.reduce(B)))


def _in_radical(ctx, key, D) -> bool:
    """``1 - r d`` is invertible for every endomorphism ``r``."""
    M = ctx.module(key)
    ends = ctx.end(key)
    prods = M.reduce(np.einsum("gh,ihj->igj", D, ends))          # matrices of r o d
    mats = M.reduce(_eye(M)[None] - prods)
    imgs = M.encode(np.einsum("xg,igh->ixh", M.coords, mats))
    return bool((imgs[:, 1:] != 0).all())


# ---- ring helpers -------------------------------------------------------------------------

def _rv(R, v):
    return np.asarray(v, dtype=np.int64) % R._ord


def _rmul(R, a, b):
    return R.mul_vec(_rv(R, a), _rv(R, b))


def _req(R, a, b) -> bool:
    return bool(np.array_equal(_rv(R, a), _rv(R, b)))


def _matmul(R, A, B):
    A, B = _rv(R, A), _rv(R, B)
    prods = R.mul_vec(A[:, :, None, :], B[None, :, :, :])          # (i, l, j, k)
    return prods.sum(axis=1) % R._ord


def _ring_identity_matrix(R, n):
    out = np.zeros((n, n, R.k), dtype=np.int64)
    for i in range(n):
        out[i, i] = R.one_vec
    return out


# ---- claims ---------------------------------------------------------------------------------

def _check(ctx: _Context, c: dict) -> bool:
    kind = c["kind"]
    if kind in ("hom", "envelope", "cover"):
        M, N = ctx.module(c["source"]), ctx.module(c["target"])
        H = _mat(M, N, c["matrix"])
        if not is_linear(M, N, H):
            return False
        tab = _table(M, N, H)
        if kind == "envelope" or (kind == "hom" and c.get("bijective")):
            if len(np.unique(tab)) != M.size:
                return False
        if kind == "cover" or (kind == "hom" and c.get("bijective")):
            if len(np.unique(tab)) != N.size:
                return False
        return True
    if kind in ("moves", "fixes"):
        X = ctx.module(c["module"])
        S = ctx.module(c["sub_module"])
        G = _mat(X, X, c["map"])
        if not is_linear(X, X, G):
            return False
        image_side = c.get("sub_kind") == "image" or c.get("direction") == "envelope"
        U = _mat(S, X, c["sub_map"]) if image_side else _mat(X, S, c["sub_map"])
        if kind == "fixes":
            if not _bijective(X, G):
                return False
            return _eq(X, U @ G, U) if image_side else _eq(S, G @ U, U)
        if c["automorphism"] and not _bijective(X, G):
            return False
        if image_side:
            sub = set(_table(S, X, U).tolist())
        else:
            sub = set(np.flatnonzero(_table(X, S, U) == 0).tolist())
        x = X.elem(c["element"])
        gx = int(_table(X, X, G)[x])
        return x in sub and gx not in sub and gx == X.elem(c["image"])
    if kind.startswith("end_") or kind in ("idempotent_lift", "in_radical", "decomposition"):
        key = c["module"]
        M = ctx.module(key)

        def m(name):
            H = _mat(M, M, c[name])
            if not is_linear(M, M, H):
                raise ValueError(f"{name} is not linear")
            return H

        def idem(E):
            return _eq(M, _compose(M, E, E), E)

        I = _eye(M)
        if kind == "end_idempotent":
            return idem(m("e"))
        if kind == "end_clean":
            A, E, V, Vi = m("a"), m("e"), m("v"), m("v_inv")
            return (idem(E) and _eq(M, _compose(M, V, Vi), I) and _eq(M, _compose(M, Vi, V), I)
                    and _eq(M, E + V, A))
        if kind == "end_exchange":
            A, E, R, S = m("a"), m("e"), m("r"), m("s")
            return idem(E) and _eq(M, _compose(M, A, R), E) and _eq(M, _compose(M, I - A, S), I - E)
        if kind == "end_unit_sum":
            T = m("target")
            us = [_mat(M, M, u) for u in c["summands"]]
            vs = [_mat(M, M, v) for v in c["inverses"]]
            if not all(is_linear(M, M, u) for u in us + vs):
                return False
            inv = all(_eq(M, _compose(M, u, v), I) and _eq(M, _compose(M, v, u), I) for u, v in zip(us, vs))
            return inv and _eq(M, sum(us), T)
        if kind == "idempotent_lift":
            F, E = m("f"), m("e")
            return idem(E) and _in_radical(ctx, key, M.reduce(E - F))
        if kind == "in_radical":
            return _in_radical(ctx, key, m("map"))
        if kind == "decomposition":
            E = m("e")
            if not idem(E):
                return False
            n = set(_table(M, M, E).tolist())
            l = set(_table(M, M, M.reduce(I - E)).tolist())
            return n & l == {0} and len(n) * len(l) == M.size
    if kind in ("unit_sum", "quasi_inverse", "central_idempotent", "matrix_unit_sum"):
        R = ctx.ring(c["ring"])
        if kind == "unit_sum":
            one = c.get("one", R.one_vec)
            inv = all(_req(R, _rmul(R, u, v), one) and _req(R, _rmul(R, v, u), one)
                      for u, v in zip(c["summands"], c["inverses"]))
            total = np.sum([_rv(R, u) for u in c["summands"]], axis=0)
            return inv and _req(R, total, c["target"])
        if kind == "quasi_inverse":
            a, x = c["a"], c["x"]
            return _req(R, _rmul(R, _rmul(R, a, x), a), a)
        if kind == "central_idempotent":
            e = c["e"]
            if not _req(R, _rmul(R, e, e), e):
                return False
            if "within" in c:
                pool = [_rv(R, w) for w in c["within"]]
                keys = {tuple(w.tolist()) for w in pool}
                if tuple(_rv(R, e).tolist()) not in keys:
                    return False
            else:
                pool = [np.eye(R.k, dtype=np.int64)[i] for i in range(R.k)]
            return all(_req(R, _rmul(R, e, w), _rmul(R, w, e)) for w in pool)
        if kind == "matrix_unit_sum":
            A, B = _rv(R, c["A"]), _rv(R, c["B"])
            I = _ring_identity_matrix(R, A.shape[0])
            ok = all(_req(R, _matmul(R, X, Y), I) and _req(R, _matmul(R, Y, X), I)
                     for X, Y in ((A, c["A_inv"]), (B, c["B_inv"])))
            return ok and _req(R, A + B, c["target"])
    raise ValueError(f"unknown claim kind {kind!r}")


def recheck(payload) -> list[dict]:
    """Re-verify every claim; returns one record per failed claim (empty means all pass)."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    failures = []
    for ri, rep in enumerate(payload["reports"]):
        ctx = _Context(rep["context"])
        for ci, claim in enumerate(rep["claims"]):
            try:
                ok = _check(ctx, claim)
                reason = None if ok else "claim does not hold"
            except (KeyError, ValueError) as exc:
                ok, reason = False, f"{type(exc).__name__}: {exc}"
            if not ok:
                failures.append({"report": ri, "theorem": rep["theorem"], "claim": ci,
                                 "kind": claim["kind"], "reason": reason})
    return failures


def count_claims(payload) -> int:
    if isinstance(payload, str):
        payload = json.loads(payload)
    return sum(len(r["claims"]) for r in payload["reports"])
