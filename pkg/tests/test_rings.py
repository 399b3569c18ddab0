"""Ring layer: axioms, catalog, structure predicates, radical, Wedderburn, lifting."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finring.errors import AxiomViolation, NotApplicable, NotSemisimple, PreconditionViolation, SpecError
from finring.rings import structure as S
from finring.rings.catalog import catalog, catalog_data, from_name, ring_by_name
from finring.rings.core import FiniteRing, build_ring, corner_ring, ideal_generated, quotient_ring

from . import oracles

SMALL = [R for R in catalog("all") if R.size <= 256]
SMALL_IDS = [R.name for R in SMALL]


def test_catalog_orders():
    expected = {"Z4": 4, "F4": 4, "F9": 9, "M2(F2)": 16, "M2(F3)": 81, "F2 x M2(F3)": 162, "UT2(F2)": 8,
                "F2[C2]": 4, "F2[x]/(x^2)": 4, "F3 x F9": 27, "Z4 x F2": 8}
    for name, n in expected.items():
        assert ring_by_name(name).size == n


def test_every_catalog_name_resolves():
    names = {e["name"] for e in catalog_data()["rings"]}
    for group, members in catalog_data()["groups"].items():
        assert set(members) <= names, group


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_ring_axioms_on_elements(R):
    # axioms checked on basis constants at build time; here on random element triples
    rng = np.random.default_rng(0)
    t = R.table
    for a, b, c in rng.integers(0, R.size, size=(200, 3)):
        assert t[t[a, b], c] == t[a, t[b, c]]
        assert t[a, R.add(b, c)] == R.add(t[a, b], t[a, c])
        assert t[R.add(a, b), c] == R.add(t[a, c], t[b, c])
        assert t[R.one, a] == a == t[a, R.one]


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_units_match_bruteforce(R):
    assert S.units(R).elements.tolist() == oracles.units(R)
    U = S.units(R)
    for a, b in U.pairs():
        assert R.table[a, b] == R.one == R.table[b, a]


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_radical_matches_maximal_right_ideals(R):
    assert S.jacobson_radical(R).members.tolist() == oracles.radical_by_maximal_ideals(R)


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_exchange_matches_characterisation(R):
    J = S.jacobson_radical(R)
    regular_mod_J = S.is_von_neumann_regular(quotient_ring(R, J)[0]) if not J.is_zero() else \
        S.is_von_neumann_regular(R)
    assert S.is_exchange_ring(R) == (regular_mod_J and S.idempotents_lift(R))


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_exchange_and_clean_witnesses(R):
    t, om = R.table, R.one_minus
    for a, e in enumerate(S.exchange_witnesses(R)):
        if e < 0:
            continue
        assert t[e, e] == e
        assert e in set(t[a].tolist())
        assert om[e] in set(t[om[a]].tolist())
    U = S.units(R).mask
    for a, e in enumerate(S.clean_witnesses(R)):
        if e >= 0:
            assert t[e, e] == e and U[R.sub(a, e)]


@pytest.mark.parametrize("R", SMALL, ids=SMALL_IDS)
def test_z2_quotient_agrees_with_wedderburn(R):
    # a surjection onto Z_2 exists exactly when F_2 is a simple factor of R/J
    J = S.jacobson_radical(R)
    Q = R if J.is_zero() else quotient_ring(R, J)[0]
    z = S.has_Z2_quotient(R)
    assert (z is not None) == ((1, 2) in S.block_signature(Q))
    if z is not None:
        assert z.kernel.order * 2 == R.size
        assert R.one not in z.kernel


@pytest.mark.parametrize("name,blocks", [
    ("F2", [(1, 2)]), ("F4", [(1, 4)]), ("M2(F2)", [(2, 2)]), ("M2(F3)", [(2, 3)]),
    ("F2 x M2(F3)", [(1, 2), (2, 3)]), ("F3 x F9", [(1, 3), (1, 9)]), ("F2 x F2", [(1, 2), (1, 2)]),
])
def test_wedderburn_blocks(name, blocks):
    R = ring_by_name(name)
    assert S.block_signature(R) == blocks
    total = 1
    es = []
    for b in S.artin_wedderburn(R):
        total *= b.q ** (b.n * b.n)
        es.append(b.central_idempotent)
        assert S.is_central(R, b.central_idempotent)
        # matrix units multiply as e_ij e_kl = delta_jk e_il
        mu = b.matrix_units
        for i in range(b.n):
            for j in range(b.n):
                for k in range(b.n):
                    for l in range(b.n):
                        want = mu[i][l] if j == k else 0
                        assert R.table[mu[i][j], mu[k][l]] == want
    assert total == R.size
    assert int(R.encode(sum(R.coords[e] for e in es))) == R.one


def test_wedderburn_needs_semisimple():
    with pytest.raises(NotSemisimple):
        S.artin_wedderburn(ring_by_name("Z4"))


@pytest.mark.parametrize("name", catalog_data()["groups"]["semisimple"])
def test_type_decomposition(name):
    R = ring_by_name(name)
    td = S.type_decomposition(R)
    t = R.table
    assert t[td.e1, td.e1] == td.e1 and R.add(td.e1, td.e2) == R.one
    assert S.is_central(R, td.e1)
    T1 = FiniteRing("T1", *_corner_spec(R, td.e1)) if td.e1 else None
    if T1 is not None:
        assert S.is_abelian_regular(T1)
    assert sorted(td.witnesses) == td.t2.tolist() or td.e2 == 0
    for s, (u1, v1, u2, v2) in td.witnesses.items():
        assert R.add(u1, u2) == s
        assert t[u1, v1] == td.e2 == t[v1, u1]
        assert t[u2, v2] == td.e2 == t[v2, u2]


def _corner_spec(R, e):
    C, _ = corner_ring(R, e)
    return C.orders, C.consts, C.one_vec


def test_type_decomposition_rejects_non_regular():
    with pytest.raises(NotApplicable):
        S.type_decomposition(ring_by_name("Z4"))


@pytest.mark.parametrize("name", ["Z4", "Z8", "Z9", "UT2(F2)", "F2[x]/(x^2)", "Z4 x F2", "F2[C2]"])
def test_idempotent_lifting(name):
    R = ring_by_name(name)
    J = S.jacobson_radical(R)
    t = R.table
    for x in range(R.size):
        if R.sub(t[x, x], x) not in J:
            with pytest.raises(PreconditionViolation):
                S.lift_idempotent(R, x)
            continue
        e, _ = S.lift_idempotent(R, x)
        assert t[e, e] == e
        assert R.sub(e, x) in J


@pytest.mark.parametrize("name", ["Z4", "UT2(F2)", "M2(F2)", "F2 x F2", "Z6"])
def test_predicates(name):
    R = ring_by_name(name)
    reg = S.is_von_neumann_regular(R)
    assert reg == S.jacobson_radical(R).is_zero()        # finite rings: regular iff semisimple
    qi = S.quasi_inverses(R)
    for a, x in enumerate(qi):
        if x >= 0:
            assert R.table[R.table[a, x], a] == a
    cen = set(S.center(R).tolist())
    assert cen == {a for a in range(R.size) if (R.table[a] == R.table[:, a]).all()}
    assert set(S.idempotents(R).tolist()) == {a for a in range(R.size) if R.table[a, a] == a}


def test_self_injective():
    assert S.is_right_self_injective(ring_by_name("Z4"))
    assert S.is_right_self_injective(ring_by_name("M2(F2)"))
    assert not S.is_right_self_injective(ring_by_name("UT2(F2)"))


def test_nilpotency_index():
    assert S.nilpotency_index(ring_by_name("Z8"), S.jacobson_radical(ring_by_name("Z8"))) == 3
    R = ring_by_name("UT2(F2)")
    assert S.nilpotency_index(R, S.jacobson_radical(R)) == 2


def test_quotient_and_ideal():
    R = ring_by_name("Z8")
    I = ideal_generated(R, [R.elem([4])])
    assert I.order == 2
    Q, proj = quotient_ring(R, I)
    assert Q.size == 4
    for a in range(R.size):
        for b in range(R.size):
            assert proj(R.table[a, b]) == Q.table[proj(a), proj(b)]
            assert proj(R.add(a, b)) == Q.add(proj(a), proj(b))
    with pytest.raises(SpecError):
        quotient_ring(R, [0, 1])


def test_polynomial_quotient_construction():
    R = ring_by_name("F2[x]/(x^2)")
    assert R.size == 4
    assert S.jacobson_radical(R).order == 2
    assert len(S.units(R)) == 2


# ---- malformed input ---------------------------------------------------------------

def test_rejects_non_associative():
    # on Z2^2, b0 b0 = b1, b1 b0 = b0 breaks associativity with this identity-free table
    consts = [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]
    with pytest.raises(AxiomViolation) as exc:
        FiniteRing("bad", [2, 2], consts, [1, 1])
    assert exc.value.axiom in ("left identity", "right identity", "associativity")


def test_rejects_bad_identity_and_shapes():
    with pytest.raises(AxiomViolation):
        FiniteRing("zero-one", [2], [[[1]]], [0])
    with pytest.raises(AxiomViolation):
        FiniteRing("no-one", [3], [[[1]]], [2])
    with pytest.raises(SpecError):
        FiniteRing("shape", [2, 2], [[[1]]], [1, 0])
    with pytest.raises(AxiomViolation):
        FiniteRing("order", [4], [[[2]]], [1])
    with pytest.raises(SpecError):
        build_ring({"name": "x", "additive_orders": [2]})


def test_unknown_name():
    with pytest.raises(SpecError):
        from_name("Q8(F2)")


# ---- property tests over random products --------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["F2", "F3", "Z4", "F4"]), min_size=1, max_size=2))
def test_products_multiply_componentwise(parts):
    R = from_name(" x ".join(parts))
    assert R.size == np.prod([from_name(p).size for p in parts])
    assert len(S.units(R)) == np.prod([len(S.units(from_name(p))) for p in parts])
    assert S.jacobson_radical(R).order == np.prod([S.jacobson_radical(from_name(p)).order for p in parts])
