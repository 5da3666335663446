import pytest
import sympy

from ckit import rmatrix
from ckit.levelzero import comb_R
from ckit.qlab import LaurentPoly, RationalFunc

q, z = rmatrix.Q, rmatrix.Z

REPS = [("A1_1", 1), ("A1_1", 2), ("A2_1", 1)]
PAIRS = [(("A1_1", 1), ("A1_1", 1)), (("A1_1", 1), ("A1_1", 2)), (("A1_1", 2), ("A1_1", 1)),
         (("A1_1", 2), ("A1_1", 2)), (("A2_1", 1), ("A2_1", 1))]


def rep(key):
    return rmatrix.build_rep(key[0], 1, key[1])


@pytest.mark.parametrize("key", REPS + [("A1_1", 3), ("A3_1", 1)])
def test_representations_satisfy_relations(key):
    V = rep(key)
    assert rmatrix.check_relations(V) == []
    assert rmatrix.weight_dims_match(V)
    assert rmatrix.u_spans_weight_space(V)


def test_a1_vector_matrices():
    V = rep(("A1_1", 1))
    assert V.dim == 2
    e1 = V.e(1).to_Matrix()
    f1 = V.f(1).to_Matrix()
    assert e1.rank() == 1 and f1.rank() == 1
    # e_0 carries z and follows the f_1 pattern, f_0 carries z^-1 and follows e_1
    assert sympy.simplify(V.e(0).to_Matrix() - z * f1) == sympy.zeros(2, 2)
    assert sympy.simplify(V.f(0).to_Matrix() - e1 / z) == sympy.zeros(2, 2)


@pytest.mark.parametrize("k1,k2", PAIRS)
def test_normalized_R_two_routes(k1, k2):
    M1, M2 = rep(k1), rep(k2)
    R = rmatrix.solve_rnorm(M1, M2)
    assert R.solution_dim == 1
    assert rmatrix.check_intertwiner(R)
    second = rmatrix.rnorm_by_cyclic_vector(M1, M2)
    assert rmatrix.same_matrix(R.matrix, second.matrix)
    u = (M1.highest, M2.highest)
    assert R.entry((M2.highest, M1.highest), u) == rmatrix.QZ.one


@pytest.mark.parametrize("k1,k2", PAIRS)
def test_denominator_and_crystal_limit(k1, k2):
    M1, M2 = rep(k1), rep(k2)
    R = rmatrix.solve_rnorm(M1, M2)
    psi = rmatrix.denominator(R)
    assert psi[0] == RationalFunc(1)
    assert rmatrix.psi_in_expected_ring(psi)
    limit = rmatrix.crystal_limit_check(R, comb_R(M1.crystal, M2.crystal), psi)
    assert limit["ok"] and not limit["negative"] and not limit["mismatches"]
    assert rmatrix.triangularity_failures(R) == []


def test_a1_vector_R_at_equal_parameters_is_identity():
    V = rep(("A1_1", 1))
    R = rmatrix.solve_rnorm(V, V)
    at_one = R.matrix.to_Matrix().subs(z, 1)
    assert sympy.simplify(at_one - sympy.eye(4)) == sympy.zeros(4, 4)


def test_a1_vector_denominator_has_degree_one():
    V = rep(("A1_1", 1))
    psi = rmatrix.denominator(rmatrix.solve_rnorm(V, V))
    assert max(psi) == 1
    assert sympy.expand(rmatrix.psi_to_sympy(psi) - (1 - q ** 2 * z)) == 0
    assert rmatrix.psi_zeros(psi) == [q ** -2]


def test_a1_vector_block_structure():
    V = rep(("A1_1", 1))
    R = rmatrix.solve_rnorm(V, V)
    entries = list(R.entries())
    mixed = [(t, s) for t, s, _ in entries if t != s]
    # only the weight-zero block (v1 x v2, v2 x v1) is not diagonal
    assert sorted(mixed) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]


def test_yang_baxter():
    assert rmatrix.yang_baxter_holds(rep(("A1_1", 1)))


def test_z_series_of_geometric_denominator():
    x = rmatrix.QZ.from_sympy(1 / (1 - q ** 2 * z))
    series = rmatrix.z_series(x, 4)
    for j in range(5):
        assert series[j] == RationalFunc(LaurentPoly.monomial(2 * j))


def test_affine_root_coordinates():
    assert rmatrix.affine_root_coords((0, 0), 1) == (1, 1)
    assert rmatrix.affine_root_coords((1, -1), 0) == (0, 1)
    assert rmatrix.in_Q_plus((1, -1), 0, strict=True)
    assert not rmatrix.in_Q_plus((-1, 1), 0)


def test_cnorm_on_vector_square():
    V = rep(("A1_1", 1))
    T = rmatrix.tensor_square(V, 6)
    assert rmatrix.cnorm_fixes_u(T)
    assert rmatrix.cnorm_involution_failures(T) == []
    key = (0, 0, 1)
    a = RationalFunc(LaurentPoly({1: 2, -2: 1}))
    lhs = T.cnorm({key: a}, 6)
    rhs = {k: a.bar() * v for k, v in T.cnorm({key: RationalFunc(1)}, 6).items()}
    assert lhs == rhs


@pytest.mark.parametrize("key", [("A1_1", 1), ("A1_1", 2)])
def test_global_basis(key):
    report = rmatrix.global_basis_report(rep(key), 4)
    assert report["valuation_ok"] and report["bar_invariant"] and report["symmetry_ok"]
    assert report["checked"] > 0 and report["symmetric_pairs"] > 0


def test_global_basis_of_u_tensor_u():
    V = rep(("A1_1", 1))
    T = rmatrix.tensor_square(V, 4)
    base = (0, V.highest, V.highest)
    assert rmatrix.global_basis_element(T, base, 4) == {base: RationalFunc(1)}


@pytest.mark.parametrize("ratio,expected", [(1, True), (q ** 2, True), (q ** 3 + 1, True),
                                            (q ** -2, False)])
def test_cyclicity_agrees_with_pole_criterion(ratio, expected):
    V = rep(("A1_1", 1))
    assert rmatrix.cyclicity_test(V, ratio, V, 1) == expected
    assert rmatrix.pole_criterion(V, ratio, V, 1) == expected


def test_cyclicity_of_one_factor_and_three_factors():
    V = rep(("A1_1", 1))
    assert rmatrix.cyclicity_test(V, 1)
    assert rmatrix.cyclicity_test(V, 1, V, q ** -2, V, q ** -4) == \
        rmatrix.pole_criterion(V, 1, V, q ** -2, V, q ** -4)
    assert not rmatrix.cyclicity_test(V, q ** -2, V, 1, V, 1)


def test_mixed_cyclicity():
    V1, V2 = rep(("A1_1", 1)), rep(("A1_1", 2))
    psi = rmatrix.denominator(rmatrix.solve_rnorm(V1, V2))
    pole = rmatrix.psi_zeros(psi)[0]
    assert not rmatrix.cyclicity_test(V1, pole, V2, 1)
    assert rmatrix.cyclicity_test(V1, 1, V2, 1)
