from itertools import product

import pytest
from hypothesis import given, strategies as st

from ckit.cartan import ClassicalWeight, Weight, build_cartan
from ckit.weyl import (CayleyBall, act_word, classical_orbit, decompose, finite_weyl_elements,
                       from_word, identity, is_regularly_w_dominant, is_w_dominant, length,
                       q_tilde_element, reduced_word, reflect, same_chamber_strict,
                       shortest_words, simple_reflection, translation, translation_length,
                       translation_length_formulas)

TYPES = ["A1_1", "A2_1", "A3_1", "A2_2"]


def words(rank, max_len=6):
    return st.lists(st.integers(0, rank - 1), max_size=max_len)


def test_simple_reflections_on_lambda_0():
    datum = build_cartan("A2_1")
    L0 = datum.Lambda(0)
    assert reflect(datum, 1, L0) == L0
    assert reflect(datum, 0, L0) == L0 - datum.alpha(0)


@pytest.mark.parametrize("label", TYPES)
@given(data=st.data())
def test_weyl_group_fixes_delta(label, data):
    datum = build_cartan(label)
    word = data.draw(words(datum.rank))
    assert act_word(datum, word, datum.delta) == datum.delta


@pytest.mark.parametrize("label", TYPES)
@given(data=st.data())
def test_reduced_word_reproduces_element_and_length(label, data):
    datum = build_cartan(label)
    w = from_word(datum, data.draw(words(datum.rank, 5)))
    word = reduced_word(w)
    assert from_word(datum, word) == w
    assert len(word) == length(w) <= 5
    ball = CayleyBall(datum, 5)
    assert ball.length(w) == length(w)


def test_identity_and_simple_lengths():
    datum = build_cartan("A2_1")
    assert length(identity(datum)) == 0 and reduced_word(identity(datum)) == ()
    for i in datum.index_set:
        assert length(simple_reflection(datum, i)) == 1


def test_a1_translation_by_alpha1():
    datum = build_cartan("A1_1")
    xi = datum.cl_alpha(1)
    t = translation(datum, xi)
    assert length(t) == 2
    # hand computation: t(alpha_1)(Lambda_0) = Lambda_0 + alpha_1 - delta
    assert t.act(datum.Lambda(0)) == datum.Lambda(0) + datum.alpha(1) - datum.delta
    assert t.act(datum.delta) == datum.delta
    assert shortest_words(datum, t, 3) == [(0, 1)]


def test_translation_by_zero_is_identity():
    datum = build_cartan("A2_1")
    assert translation(datum, datum.zero_classical()).is_identity()


def test_a2_translation_length_of_alpha1():
    # (alpha_1, xi)_+ = 2, (alpha_1 + alpha_2, xi)_+ = 1, (-alpha_2, xi)_+ = 1
    datum = build_cartan("A2_1")
    xi = datum.cl_alpha(1)
    assert translation_length(datum, xi) == 4
    assert CayleyBall(datum, 4).length(translation(datum, xi)) == 4


@pytest.mark.parametrize("label", TYPES)
def test_length_formulas_agree_with_bfs_on_small_box(label):
    datum = build_cartan(label)
    elems = [q_tilde_element(datum, c)
             for c in product(range(-1, 2), repeat=len(datum.classical_nodes))]
    ball = CayleyBall(datum, max(translation_length(datum, xi) for xi in elems))
    for xi in elems:
        a, b, c = translation_length_formulas(datum, xi)
        t = translation(datum, xi)
        assert a == b == c == length(t) == ball.length(t)


@pytest.mark.parametrize("label", TYPES)
@given(data=st.data())
def test_translation_length_is_classically_invariant(label, data):
    datum = build_cartan(label)
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(datum.classical_nodes),
                                max_size=len(datum.classical_nodes)))
    xi = q_tilde_element(datum, coeffs)
    value = translation_length(datum, xi)
    for image in classical_orbit(datum, xi):
        assert translation_length(datum, image) == value


def test_decompose_finite_and_translation():
    datum = build_cartan("A1_1")
    for w in finite_weyl_elements(datum):
        w0, xi = decompose(w)
        assert w0 == w and xi.is_zero()
    xi = datum.cl_alpha(1).scale(2)
    w0, part = decompose(translation(datum, xi))
    assert w0.is_identity() and part == xi


def test_decompose_s0():
    datum = build_cartan("A1_1")
    s0 = simple_reflection(datum, 0)
    w0, xi = decompose(s0)
    assert translation(datum, xi) * w0 == s0
    assert w0 == simple_reflection(datum, 1)
    assert xi == datum.cl_alpha(1)


@pytest.mark.parametrize("label", TYPES)
@given(data=st.data())
def test_decompose_recomposes(label, data):
    datum = build_cartan(label)
    w = from_word(datum, data.draw(words(datum.rank, 7)))
    w0, xi = decompose(w)
    assert translation(datum, xi) * w0 == w


def test_dominance_examples():
    datum = build_cartan("A1_1")
    lam = Weight((-1, 1))
    s1 = simple_reflection(datum, 1)
    assert is_regularly_w_dominant(datum, lam, s1)
    assert is_w_dominant(datum, lam, identity(datum))
    assert not is_w_dominant(datum, lam, simple_reflection(datum, 0))


@pytest.mark.parametrize("label", ["A1_1", "A2_1"])
def test_translation_dominance_matches_chamber_condition(label):
    datum = build_cartan(label)
    box = list(product(range(-2, 3), repeat=len(datum.classical_nodes)))
    mus = [q_tilde_element(datum, c) for c in box]
    lams = [ClassicalWeight(tuple(c)) for c in product(range(-2, 3), repeat=datum.rank)
            if datum.level(ClassicalWeight(tuple(c))) == 0]
    for mu in mus:
        t = translation(datum, mu)
        for lam in lams:
            assert is_regularly_w_dominant(datum, lam, t) == same_chamber_strict(datum, lam, mu)
