from itertools import product

import pytest
from hypothesis import given, strategies as st

from ckit import bstar
from ckit.bstar import BTildeElement

B = bstar.rank1()
elements = st.builds(lambda n, k, m: BTildeElement(n, (k,), m),
                     st.integers(0, 12), st.integers(-12, 12), st.integers(0, 12))


def test_statistics_of_u_lambda():
    for k in range(-5, 6):
        b = B.u((k,))
        assert B.eps(0, b) == max(0, -k) and B.phi(0, b) == max(k, 0)
        assert B.eps_star(0, b) == max(0, k) and B.phi_star(0, b) == max(-k, 0)


@given(elements)
def test_star_weight_and_involution(b):
    assert B.star(b).lam == (-b.lam[0] + 2 * b.b1 - 2 * b.b2,)
    assert B.wt(B.star(b)) == (-b.lam[0],)
    assert B.star(B.star(b)) == b
    assert B.wt_star(b) == B.wt(B.star(b))


@given(elements)
def test_string_statistics(b):
    assert B.phi(0, b) - B.eps(0, b) == B.wt(b)[0]
    assert B.phi_star(0, b) - B.eps_star(0, b) == B.wt_star(b)[0]


@given(elements)
def test_operators_are_partial_inverses(b):
    for up, down in ((B.e, B.f), (B.e_star, B.f_star)):
        x = down(0, b)
        if x is not None:
            assert up(0, x) == b
        y = up(0, b)
        if y is not None:
            assert down(0, y) == b
    x = B.f(0, b)
    if x is not None:
        assert B.wt(x)[0] == B.wt(b)[0] - 2


@given(elements)
def test_closed_form_max_operators_match_iteration(b):
    assert B.e_max(0, b) == B.e_max_iterated(0, b)
    assert B.f_max(0, b) == B.f_max_iterated(0, b)
    assert B.estar_max(0, b) == B.estar_max_iterated(0, b)
    assert B.fstar_max(0, b) == B.fstar_max_iterated(0, b)
    if B.eps(0, b) == 0:
        assert B.e_max(0, b) == b


def test_f_branch_on_u_lambda():
    for m in range(1, 6):
        assert B.f(0, B.u((m,))) == BTildeElement(1, (m,), 0)


def test_fstar_max_on_u_lambda_is_unchanged():
    for m in range(0, 6):
        assert B.fstar_max(0, B.u((m,))) == B.u((m,))


def test_reflection_displays():
    assert B.S_star(0, B.u((0,))) == B.u((0,))
    for m in range(1, 6):
        assert B.S_star(0, B.u((m,))) == BTildeElement(0, (-m,), m)
        assert B.S(0, B.u((m,))) == BTildeElement(m, (m,), 0)


@given(elements)
def test_reflections_commute_and_square_to_identity(b):
    s, s_star = B.reflection(0, b), B.reflection_star(0, b)
    assert B.reflection(0, s) == b
    assert B.reflection(0, s_star) == B.reflection_star(0, s)


def test_extremal_orbit():
    orbit = B.extremal_orbit(B.u((2,)), 10)
    assert orbit == [B.u((2,)), BTildeElement(2, (2,), 0)]
    assert B.extremal_orbit(BTildeElement(1, (3,), 0), 10) is None
    assert B.is_extremal(B.u((0,)), 1)


@pytest.mark.parametrize("m", range(0, 8))
def test_B_lambda_is_the_sl2_crystal(m):
    for k in range(m + 4):
        assert B.in_B_lambda(BTildeElement(k, (m,), 0), 8) == (k <= m)
    assert not B.in_B_lambda(BTildeElement(0, (m,), 1), 8)


def kostant_count(depth):
    """Number of elements of B(infinity) for sl3 of height <= depth."""
    return sum(min(a, b) + 1 for a in range(depth + 1) for b in range(depth + 1 - a))


@pytest.mark.parametrize("depth", range(0, 6))
def test_type_a_model_sizes(depth):
    model = bstar.TypeAInfinity(2, depth)
    assert len(model.all_elements()) == kostant_count(depth)
    full = bstar.schubert_enumerate(model, (1, 2, 1), depth)
    assert full == model.all_elements()


def test_schubert_identity_and_simple():
    model = bstar.TypeAInfinity(2, 4)
    assert bstar.schubert_enumerate(model, (), 4) == {model.highest}
    assert len(bstar.schubert_enumerate(model, (1,), 4)) == 5


def test_permutation_helpers():
    assert bstar.perm_length(bstar.perm_from_word(2, (1, 2, 1))) == 3
    for perm in bstar.all_perms(3):
        assert bstar.perm_from_word(3, bstar.perm_reduced_word(perm)) == perm
    assert len(bstar.all_perms(3)) == 24


@pytest.mark.parametrize("n", [2, 3])
def test_schubert_subsets_are_monotone_and_e_stable(n):
    depth = 3
    model = bstar.TypeAInfinity(n, depth)
    perms = bstar.all_perms(n)
    subsets = {w: bstar.schubert_enumerate(model, bstar.perm_reduced_word(w), depth) for w in perms}
    for v, w in product(perms, repeat=2):
        if bstar.bruhat_leq(n, v, w):
            assert subsets[v] <= subsets[w]
    for w, subset in subsets.items():
        word = bstar.perm_reduced_word(w)
        for b in subset:
            assert bstar.schubert_member_by_peeling(model, b, word)
            for i in model.index_set:
                x = model.e(i, b)
                assert x is None or x in subset
