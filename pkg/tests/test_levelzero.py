from itertools import product

import pytest
from hypothesis import given, strategies as st

from ckit.crystal import dominant_extremal_node, is_simple
from ckit.levelzero import (affine_energy, affine_tensor_step, affinize, catalog, check_comb_R,
                            comb_R, energy, energy_from_R, fundamental_weight_checks,
                            good_conditions, parse_crystal_key, perfect_check, s_from_energy,
                            s_map, s_map_bookkeeping, s_map_recursion, wedge_basis)

PAIRS = [(label, s1, s2) for label in ("A1_1", "A2_1") for s1, s2 in product((1, 2), repeat=2)]


def test_parse_crystal_key():
    assert parse_crystal_key("B1,2") == (1, 2)
    assert parse_crystal_key("3,1") == (3, 1)
    with pytest.raises(ValueError):
        parse_crystal_key("B12")


def test_catalog_rejects_unsupported_entries():
    with pytest.raises(ValueError):
        catalog("A2_2", 1, 1)
    with pytest.raises(ValueError):
        catalog("A1_1", 2, 1)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_a1_row_crystals(s):
    B = catalog("A1_1", 1, s)
    assert len(B.nodes) == s + 1
    assert B.check_string_axioms()
    dominant_extremal_node(B)


def test_affinization():
    B = catalog("A1_1", 1, 1)
    A = affinize(B)
    datum = B.datum
    node = (0, (2,))
    assert A.wt(A.z(node)) == A.wt(node) + datum.delta
    assert A.wt(node).cl() == B.wt((2,))
    assert A.f(0, node) == (-1, (1,))
    assert A.f(1, (0, (1,))) == (0, (2,))


def test_a1_energy_by_hand():
    H = energy(catalog("A1_1", 1, 1))
    assert H == {((1,), (1,)): 0, ((1,), (2,)): 1, ((2,), (1,)): 0, ((2,), (2,)): 0}


@pytest.mark.parametrize("label,s", [("A1_1", 1), ("A1_1", 2), ("A2_1", 1), ("A2_1", 2), ("A3_1", 1)])
def test_energy_agrees_with_R_and_vanishes_at_u(label, s):
    B = catalog(label, 1, s)
    H = energy(B)
    u = dominant_extremal_node(B)
    assert H[(u, u)] == 0
    assert H == energy_from_R(B)


@pytest.mark.parametrize("label,s1,s2", PAIRS)
def test_comb_R_is_an_affine_crystal_isomorphism(label, s1, s2):
    B1, B2 = catalog(label, 1, s1), catalog(label, 1, s2)
    R = comb_R(B1, B2)
    back = comb_R(B2, B1)
    assert R.is_bijection() and not R.failures
    assert check_comb_R(R) == []
    u1, u2 = dominant_extremal_node(B1), dominant_extremal_node(B2)
    assert R(u1, u2) == (u2, u1)
    A1, A2 = affinize(B1), affinize(B2)
    for b1, b2 in R.table:
        for n1, n2 in product(range(-1, 2), repeat=2):
            x = ((n1, b1), (n2, b2))
            image = R.affine(*x)
            assert back.affine(*image) == x
            for i in B1.index_set:
                for raising in (False, True):
                    step = affine_tensor_step((A1, A2), i, x, raising)
                    step_image = affine_tensor_step((A2, A1), i, image, raising)
                    expected = None if step is None else R.affine(*step)
                    assert step_image == expected


@pytest.mark.parametrize("label,s1,s2", PAIRS)
def test_s_map_two_routes_and_positivity(label, s1, s2):
    B1, B2 = catalog(label, 1, s1), catalog(label, 1, s2)
    R = comb_R(B1, B2)
    book, rec = s_map_bookkeeping(R), s_map_recursion(B1, B2, R)
    assert book == rec
    u = (dominant_extremal_node(B1), dominant_extremal_node(B2))
    assert book[u] == (0,) * B1.datum.rank
    assert all(c >= 0 for v in book.values() for c in v)


@pytest.mark.parametrize("label,s", [("A1_1", 1), ("A1_1", 2), ("A2_1", 2)])
def test_s_map_from_energy(label, s):
    B = catalog(label, 1, s)
    assert s_from_energy(B, energy(B)) == s_map(B, B)


def test_perfectness_examples():
    for n in (1, 2, 3):
        assert perfect_check(catalog(f"A{n}_1", 1, 1), 1).ok
    for s in (1, 2, 3):
        assert perfect_check(catalog("A1_1", 1, s), s).ok
    report = perfect_check(catalog("A1_1", 1, 2), 1)
    assert not report.ok and report.minimal == []


@pytest.mark.parametrize("label,s", [("A1_1", 1), ("A1_1", 2), ("A2_1", 1), ("A2_1", 2)])
def test_good_conditions(label, s):
    report = good_conditions(catalog(label, 1, s))
    assert report["L"] and report["Q+"] and report["z_shift"]


def test_wedge_basis_counts():
    B = catalog("A1_1", 1, 1)
    H = energy(B)
    window = (0, 3)
    singles = [(n, b) for n in range(*window) for b in B.nodes]
    assert wedge_basis(B, 1, window) == sorted((p,) for p in singles)
    pairs = [(p, r) for p in singles for r in singles if affine_energy(H, p, r) > 0]
    assert wedge_basis(B, 2, window) == sorted(pairs)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fundamental_weight_checks(n):
    B = catalog(f"A{n}_1", 1, 1)
    checks = fundamental_weight_checks(B)
    assert checks["top_weight_simple"] and checks["extremal_in_orbit"] and checks["weights_fill_hull"]
    assert checks["hull"] and checks["simple"]
    mults = B.weight_multiplicities()
    assert len(mults) == n + 1 and set(mults.values()) == {1}


def test_a1_row_two_weights():
    B = catalog("A1_1", 1, 2)
    varpi = B.datum.varpi(1).cl()
    assert set(B.weight_multiplicities()) == {varpi.scale(2), B.datum.zero_classical(), varpi.scale(-2)}
    assert fundamental_weight_checks(B, 1, 2)["weights_fill_hull"]
    assert is_simple(B)


@given(st.sampled_from([("A1_1", 1), ("A1_1", 2), ("A2_1", 1)]),
       st.integers(-3, 3), st.integers(-3, 3), st.data())
def test_affine_energy_shift_rule(key, n1, n2, data):
    B = catalog(key[0], 1, key[1])
    H = energy(B)
    b1 = data.draw(st.sampled_from(B.nodes))
    b2 = data.draw(st.sampled_from(B.nodes))
    assert affine_energy(H, (n1, b1), (n2, b2)) == H[(b1, b2)] + n1 - n2
