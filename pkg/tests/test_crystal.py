import json

import pytest
from hypothesis import given, strategies as st

from ckit.cartan import build_cartan
from ckit.crystal import (convex_hull_check, crystal_from_json, dominant_extremal_node,
                          extremal_nodes, is_extremal, is_morphism, is_simple, rebracket_left,
                          rebracket_right,
                          reflection_action, signature, simple_report, tensor, weyl_action)
from ckit.levelzero import catalog
from ckit.weyl import act_word


def reduce_signs(stats):
    """Independent oracle: write the sign word and cancel '+-' pairs until none remain."""
    word = []
    for pos, (eps, phi) in enumerate(stats):
        word += [("-", pos)] * eps + [("+", pos)] * phi
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            if word[k][0] == "+" and word[k + 1][0] == "-":
                del word[k:k + 2]
                changed = True
                break
    minus = [p for s, p in word if s == "-"]
    plus = [p for s, p in word if s == "+"]
    return len(minus), len(plus), (plus[0] if plus else None), (minus[-1] if minus else None)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=6))
def test_signature_rule_matches_sign_cancellation(stats):
    assert signature(stats) == reduce_signs(stats)


def test_vector_crystal_of_a1():
    B = catalog("A1_1", 1, 1)
    plus, minus = (1,), (2,)
    assert B.eps(1, plus) == 0 and B.phi(1, plus) == 1
    assert B.f(1, plus) == minus and B.f(0, minus) == plus
    assert reflection_action(B, 1, plus) == minus


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vector_crystal_is_a_cycle(n):
    B = catalog(f"A{n}_1", 1, 1)
    assert len(B.nodes) == n + 1
    for x in range(1, n + 1):
        assert B.f(x, (x,)) == (x + 1,)
    assert B.f(0, (n + 1,)) == (1,)
    assert all(is_extremal(B, b) for b in B.nodes)
    assert is_simple(B)


def test_a1_row_two_crystal():
    B = catalog("A1_1", 1, 2)
    assert len(B.nodes) == 3
    assert not is_extremal(B, (1, 2))
    assert sorted(extremal_nodes(B)) == [(1, 1), (2, 2)]


@pytest.mark.parametrize("key", [("A1_1", 1), ("A1_1", 2), ("A2_1", 1), ("A2_1", 2), ("A3_1", 1)])
def test_string_axioms_and_phi_minus_eps(key):
    B = catalog(key[0], 1, key[1])
    assert B.check_string_axioms()
    for b in B.nodes:
        for i in B.index_set:
            assert B.phi(i, b) - B.eps(i, b) == B.wt(b).pairing(i)
            top = B.f_max(i, b)
            assert B.f_max(i, top) == top


def test_tensor_size_and_highest_vector():
    B1, B2 = catalog("A2_1", 1, 1), catalog("A2_1", 1, 2)
    T = tensor(B1, B2)
    assert len(T.nodes) == len(B1.nodes) * len(B2.nodes)
    u = (dominant_extremal_node(B1), dominant_extremal_node(B2))
    for i in (1, 2):
        assert T.eps(i, u) == 0
    assert T.check_string_axioms()


def test_tensor_is_associative_on_triples():
    B = catalog("A1_1", 1, 1)
    left = tensor(tensor(B, B), B)
    right = tensor(B, tensor(B, B))
    flat = tensor(B, B, B)

    def regroup(b):
        return (b[0][0], (b[0][1], b[1]))

    assert is_morphism(left, right, regroup)
    assert is_morphism(left, flat, rebracket_left)
    assert is_morphism(right, flat, rebracket_right)


def test_weyl_action_weight_compatibility():
    datum = build_cartan("A2_1")
    B = catalog("A2_1", 1, 2)
    for word in [(1,), (0, 2), (1, 2, 1), (0, 1, 2, 0)]:
        for b in B.nodes:
            assert B.wt(weyl_action(B, word, b)) == act_word(datum, word, B.wt(b).lift()).cl()


@given(st.lists(st.sampled_from([("A1_1", 1), ("A1_1", 2), ("A2_1", 1)]), min_size=2, max_size=2))
def test_tensor_of_simple_is_simple_and_connected(keys):
    if keys[0][0] != keys[1][0]:
        return
    T = tensor(*(catalog(k[0], 1, k[1]) for k in keys))
    assert is_simple(T)
    assert T.is_connected()


def test_simple_report_fields():
    report = simple_report(catalog("A2_1", 1, 1))
    assert report["single_orbit"] and report["multiplicity_one"] and report["connected"]


def test_convex_hull_examples():
    datum = build_cartan("A1_1")
    varpi = datum.varpi(1).cl()
    assert convex_hull_check(datum, datum.zero_classical(), varpi.scale(2))
    assert not convex_hull_check(datum, varpi.scale(2), varpi)
    assert convex_hull_check(datum, varpi, varpi)


def test_json_round_trip():
    B = catalog("A2_1", 1, 1)
    data = json.loads(json.dumps(B.to_json()))
    assert set(data) == {"index_set", "nodes", "edges"}
    again = crystal_from_json(build_cartan("A2_1"), data)
    assert len(again.nodes) == 3 and len(again.edges()) == len(B.edges())
    assert B.to_dot().startswith("digraph")
    assert 'label="0"' in B.to_dot()


def test_identity_is_a_morphism():
    B = catalog("A2_1", 1, 1)
    assert is_morphism(B, B, lambda b: b)
