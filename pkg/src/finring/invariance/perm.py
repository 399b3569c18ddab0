"""Finite groups of bijections stored as image rows (``row[x]`` is the image of x)."""
from __future__ import annotations

import numpy as np

from .. import groups


class RowIndex:
    """Dictionary from image rows to their positions in a fixed array of rows."""

    def __init__(self, rows: np.ndarray):
        self.rows = rows
        self._pos = {k: i for i, k in enumerate(groups.keys(rows))}

    def __len__(self):
        return len(self.rows)

    def find(self, row) -> int:
        return self._pos.get(groups.key(row), -1)

    def find_many(self, rows) -> np.ndarray:
        return np.array([self._pos.get(k, -1) for k in groups.keys(rows)], dtype=np.int64)


def compose(f_row, g_row):
    """``f o g``."""
    return f_row[g_row]


def generated(rows: np.ndarray, gens: list[int], index: RowIndex) -> np.ndarray:
    """Positions (within ``index``) of the subgroup generated by ``gens``; -1 entries are
    impossible because ``index`` must hold a group containing the generators."""
    n = rows.shape[1]
    ident = index.find(np.arange(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            prods = rows[gens][:, rows[a]]          # s o a for every generator s
            for b in index.find_many(prods):
                if b < 0:
                    raise ValueError("generated element outside the ambient group")
                if b not in seen:
                    seen.add(int(b))
                    nxt.append(int(b))
        frontier = nxt
    return np.array(sorted(seen), dtype=np.int64)


def greedy_generators(rows: np.ndarray, members, index: RowIndex) -> list[int]:
    """Least-first generators whose generated group contains every member."""
    members = [int(m) for m in members]
    gens: list[int] = []
    covered = set(generated(rows, gens, index).tolist()) if len(members) else set()
    for m in members:
        if m not in covered:
            gens.append(m)
            covered = set(generated(rows, gens, index).tolist())
    return gens


def is_closed(rows: np.ndarray, members, index: RowIndex) -> tuple[bool, tuple | None]:
    """Whether ``members`` (containing the identity) is closed under composition.

    With generators ``S`` chosen inside the set, the set equals the group
    generated by ``S`` exactly when right multiplication by each generator
    keeps it inside, so ``|members| * |S|`` products suffice.  Returns a
    failing pair when not closed.
    """
    members = np.asarray(members, dtype=np.int64)
    mset = set(members.tolist())
    n = rows.shape[1]
    if index.find(np.arange(n)) not in mset:
        return False, None
    gens = greedy_generators(rows, members, index)
    for s in gens:
        prods = rows[members][:, rows[s]]
        for a, b in zip(members, index.find_many(prods)):
            if b not in mset:
                return False, (int(a), int(s))
    return True, None
