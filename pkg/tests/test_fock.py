import pytest
from hypothesis import given, strategies as st

from ckit.cartan import ClassicalWeight
from ckit.fock import FockSpace, character_oracle, freudenthal_multiplicities, partition_numbers
from ckit.levelzero import affine_energy, catalog


def partitions(n, largest=None):
    """Direct count of partitions of n, independent of the library's table."""
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(partitions(n - k, k) for k in range(1, min(n, largest) + 1))


@pytest.fixture(scope="module")
def a1_fock():
    return FockSpace(catalog("A1_1", 1, 1), 1, 0)


def test_partition_numbers():
    assert partition_numbers(8) == tuple(partitions(n) for n in range(9))


def test_ground_state_of_a1_vector(a1_fock):
    g = a1_fock.ground
    assert g.period == 2
    assert g.validate() == []
    assert {g.node(0)[1], g.node(1)[1]} == {(1,), (2,)}
    for n in range(6):
        assert a1_fock.datum.level(g.weight(n)) == 1
        assert g.weight(n).cl() in {ClassicalWeight((1, 0)), ClassicalWeight((0, 1))}
        assert affine_energy(a1_fock.H, g.node(n + 1), g.node(n)) == 1


def test_vacuum_is_highest(a1_fock):
    vac = a1_fock.vacuum()
    for i in a1_fock.datum.index_set:
        assert a1_fock.e(i, vac) is None
    p = a1_fock.f(0, vac)
    assert p is not None and len(p.sites) == 1
    assert a1_fock.weight(p) == a1_fock.weight(vac) - a1_fock.datum.alpha(0)


@given(st.lists(st.integers(0, 1), max_size=6))
def test_operators_shift_weight_and_invert(word):
    F = FockSpace(catalog("A1_1", 1, 1), 1, 0)
    p = F.vacuum()
    for i in word:
        nxt = F.f(i, p)
        if nxt is None:
            continue
        assert F.weight(nxt) == F.weight(p) - F.datum.alpha(i)
        assert F.e(i, nxt) == p
        p = nxt


def test_a1_level_one_dimensions_by_hand(a1_fock):
    """Fock = V(Lambda_0) x bosons: dim at Lambda_0 + m alpha_1 - n delta is sum_j p(j) p(n - j - m^2)."""
    depth = 5
    graded = a1_fock.enumerate_graded(depth)
    expected = {}
    for m in range(-3, 4):
        for n in range(depth + 1):
            value = sum(partitions(j) * partitions(n - j - m * m) for j in range(n - m * m + 1))
            if value:
                expected[(ClassicalWeight((1 - 2 * m, 2 * m)), n)] = value
    assert graded == expected
    assert graded[(ClassicalWeight((1, 0)), 1)] == 2


def test_character_oracle_depth_zero(a1_fock):
    lam = a1_fock.ground.weight(0)
    assert character_oracle(a1_fock.datum, lam, 0) == {(lam.cl(), 0): 1}


def test_freudenthal_basic_representation():
    # string function of V(Lambda_0) for A1: mult(Lambda_0 - n delta) = p(n)
    F = FockSpace(catalog("A1_1", 1, 1), 1, 0)
    mults = freudenthal_multiplicities(F.datum, F.ground.weight(0), 5)
    for n in range(6):
        assert mults[(n, n)] == partitions(n)


def test_weights_lie_below_lambda_0(a1_fock):
    lam = a1_fock.ground.weight(0)
    for p in a1_fock.enumerate_paths(4):
        assert all(c >= 0 for c in a1_fock.datum.root_coords(lam - a1_fock.weight(p)))


def test_vacuum_component_is_a_proper_part(a1_fock):
    # the level-one Fock space is not irreducible: the vacuum component is smaller
    depth = 3
    comp = a1_fock.component_of_vacuum(depth)
    assert len(comp) < len(a1_fock.enumerate_paths(depth))


@pytest.mark.parametrize("label,s,depth", [("A1_1", 2, 3), ("A2_1", 1, 2)])
def test_factorization_other_crystals(label, s, depth):
    F = FockSpace(catalog(label, 1, s), s, 0)
    graded = F.enumerate_graded(depth)
    assert graded == character_oracle(F.datum, F.ground.weight(0), depth)
    assert graded[(F.ground.weight(0).cl(), 0)] == 1


def test_non_perfect_level_is_rejected():
    with pytest.raises(ValueError):
        FockSpace(catalog("A1_1", 1, 2), 1, 0)
