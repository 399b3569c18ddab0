"""Howell form and linear solving over Z/nZ against brute-force enumeration."""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finring.exactlin import (
    ModMatrix, gcdex, howell_basis, howell_form, in_span, kernel_generators, pivots, same_span, solve_linear,
    span_size, unit_normalizer,
)

MODULI = [2, 3, 4, 6, 8, 9, 12]


def brute_span(A: ModMatrix) -> set:
    n = A.modulus
    out = set()
    for c in itertools.product(range(n), repeat=A.rows):
        out.add(tuple(((np.array(c, dtype=np.int64) @ A.data) % n).tolist()) if A.rows else (0,) * A.cols)
    return out


@st.composite
def matrices(draw, max_rows=3, max_cols=3):
    n = draw(st.sampled_from(MODULI))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return ModMatrix(np.array(rows, dtype=np.int64), n)


@given(st.sampled_from(MODULI), st.integers(0, 50), st.integers(0, 50))
def test_gcdex_is_unimodular(n, a, b):
    a, b = a % n, b % n
    g, s, t, u, v = gcdex(a, b, n)
    assert (s * a + t * b - g) % n == 0
    assert (u * a + v * b) % n == 0
    assert np.gcd((s * v - t * u) % n, n) == 1


@given(st.sampled_from(MODULI), st.integers(1, 50))
def test_unit_normalizer_gives_divisor(n, a):
    a %= n
    if a == 0:
        return
    w = unit_normalizer(a, n)
    assert np.gcd(w, n) == 1
    assert n % ((w * a) % n) == 0


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_howell_span_matches_enumeration(A):
    H, U = howell_form(A)
    padded = np.vstack([A.data, np.zeros((H.rows - A.rows, A.cols), dtype=np.int64)])
    assert np.array_equal((U.data @ padded) % A.modulus, H.data)
    assert brute_span(howell_basis(A)) == brute_span(A)
    assert span_size(A) == len(brute_span(A))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_howell_shape(A):
    B = howell_basis(A)
    piv = pivots(B)
    cols = [c for _, c, _ in piv]
    assert cols == sorted(cols) and len(set(cols)) == len(cols)
    for i, c, p in piv:
        assert A.modulus % p == 0
        for j in range(i):
            assert B.data[j, c] < p


@settings(max_examples=100, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_howell_is_canonical(A, rnd):
    # a random unimodular row operation leaves the basis unchanged
    n = A.modulus
    rows = A.data.copy()
    if A.rows > 1:
        i, j = rnd.sample(range(A.rows), 2)
        rows[i] = (rows[i] + rnd.randrange(n) * rows[j]) % n
    units = [u for u in range(1, n) if np.gcd(u, n) == 1]
    rows[0] = (rows[0] * rnd.choice(units)) % n
    B = ModMatrix(rows, n)
    assert same_span(A, B)
    assert howell_basis(A) == howell_basis(B)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_matches_enumeration(A, data):
    n = A.modulus
    b = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=A.cols, max_size=A.cols)), dtype=np.int64)
    sols = {c for c in itertools.product(range(n), repeat=A.rows)
            if not ((np.array(c) @ A.data - b) % n).any()}
    res = solve_linear(A, b)
    assert (res is None) == (not sols)
    assert in_span(A, b) == bool(sols)
    if res is None:
        return
    assert not ((res.particular @ A.data - b) % n).any()
    assert res.size() == len(sols)
    for k in res.kernel:
        assert not ((k @ A.data) % n).any()


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_generators_span_kernel(A):
    n = A.modulus
    kern = {c for c in itertools.product(range(n), repeat=A.rows) if not ((np.array(c) @ A.data) % n).any()}
    gens = kernel_generators(A)
    got = brute_span(ModMatrix(np.array(gens), n)) if gens else {(0,) * A.rows}
    assert got == kern


def test_saturation_row_is_added():
    # over Z/4 the single row (2, 1) spans {0, (2,1), (0,2), (2,3)}; the Howell form needs (0, 2) too
    B = howell_basis(ModMatrix([[2, 1]], 4))
    assert B.tolist() == [[2, 1], [0, 2]]
    assert span_size(ModMatrix([[2, 1]], 4)) == 4


def test_modulus_must_be_at_least_two():
    with pytest.raises(ValueError):
        ModMatrix([[1]], 1)
