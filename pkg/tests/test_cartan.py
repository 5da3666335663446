from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ckit.cartan import CATALOG, ClassicalWeight, Weight, build_cartan, parse_label


def test_a1_cartan_matrix_and_marks():
    datum = build_cartan("A1_1")
    assert datum.cartan_matrix == ((2, -2), (-2, 2))
    assert datum.marks == (1, 1)
    assert datum.comarks == (1, 1)


def test_a2_cartan_matrix():
    datum = build_cartan("A2_1")
    assert datum.cartan_matrix == ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
    assert datum.marks == (1, 1, 1)


@pytest.mark.parametrize("label", CATALOG)
def test_marks_span_the_null_space(label):
    datum = build_cartan(label)
    for row in datum.cartan_matrix:
        assert sum(a * m for a, m in zip(row, datum.marks)) == 0
    assert datum.check_invariants()


@pytest.mark.parametrize("label", ["A2_2", "A4_2", "A6_2"])
def test_twisted_even_types_have_two_special_nodes(label):
    datum = build_cartan(label)
    seen = set()
    for i0 in datum.i0_choices:
        other = build_cartan(label, i0)
        length = 2 * other.root_lengths[i0]
        seen.add((length, other.marks[i0]))
    assert seen == {(Fraction(1), 2), (Fraction(4), 1)}


def test_unknown_labels_are_rejected():
    with pytest.raises(ValueError):
        parse_label("X9_1")
    with pytest.raises(ValueError):
        build_cartan("E8_1")


def test_fundamental_weights_have_level_zero():
    datum = build_cartan("A2_1")
    assert datum.varpi(1).lambda_coeffs == (-1, 1, 0)
    for i in datum.classical_nodes:
        assert datum.level(datum.varpi(i)) == 0


def test_form_values():
    datum = build_cartan("A2_1")
    assert datum.form(datum.delta, datum.Lambda(0)) == 1
    assert datum.form(datum.delta, datum.delta) == 0
    assert datum.form(datum.varpi(1), datum.alpha(1)) == 1


def test_d_values_are_integers_in_type_a():
    for label in ("A1_1", "A2_1", "A3_1"):
        datum = build_cartan(label)
        for i in datum.classical_nodes:
            assert datum.d_value(i).denominator == 1


def test_tilde_alpha():
    a1 = build_cartan("A1_1")
    beta = a1.cl_alpha(1)
    assert a1.c_alpha(beta) == 1
    assert a1.tilde_alpha(beta) == beta
    a2 = build_cartan("A2_2")
    long_roots = [b for b in a2.classical_roots if a2.form(b, b) == 4]
    assert long_roots
    for b in long_roots:
        assert a2.tilde_alpha(b).scale(2) == b


def test_weight_json_round_trip():
    w = Weight((1, -2, 0), Fraction(3, 2))
    assert Weight.from_json(w.to_json(), 3) == w


@pytest.mark.parametrize("label", ["A1_1", "A2_1", "A3_1", "A2_2", "C2_1", "D4_1"])
@given(data=st.data())
def test_cl_forgets_delta_and_form_is_symmetric_on_level_zero(label, data):
    datum = build_cartan(label)
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=datum.rank, max_size=datum.rank))
    lam = Weight(tuple(coeffs))
    assert (lam + datum.delta).cl() == lam.cl()
    roots = [datum.alpha(i) for i in datum.index_set]
    x = sum((r.scale(data.draw(st.integers(-2, 2))) for r in roots), datum.zero_weight())
    y = sum((r.scale(data.draw(st.integers(-2, 2))) for r in roots), datum.zero_weight())
    assert datum.form(x, y) == datum.form(y, x)
    assert datum.form(datum.delta, x) == 0


def test_classical_weight_arithmetic():
    a = ClassicalWeight((1, 2))
    assert a - a == ClassicalWeight((0, 0))
    assert (a + a) == a.scale(2)
