"""The acceptance battery, shared by `ckit suite` and the test-suite.

Every check returns a dict with a PASS/FAIL status and deterministic details
(no timings, sorted keys), so the JSON of the whole battery is reproducible.
"""
from __future__ import annotations

from itertools import product

import sympy

from . import bstar, qlab, rmatrix
from .cartan import build_cartan
from .crystal import dominant_extremal_node, is_simple
from .fock import FockSpace, character_oracle
from .levelzero import (catalog, check_comb_R, comb_R, energy, energy_from_R,
                        fundamental_weight_checks, perfect_check, s_map_bookkeeping,
                        s_map_recursion)
from .weyl import (CayleyBall, classical_orbit, length, q_tilde_element, translation,
                   translation_length, translation_length_formulas)


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# 1 ------------------------------------------------------------------------------------

def q_series_identity(nmax: int = 8, mmax: int = 8, span: int = 8) -> dict:
    identity_bad, membership_bad, membership_bad_in_range = [], [], []
    total = 0
    for n in range(nmax + 1):
        for m in range(mmax + 1):
            for l in range(m, m + span + 1):
                total += 1
                lhs = qlab.identity_sum(l, m, n)
                same_forms = lhs == qlab.identity_sum_pochhammer(l, m, n)
                same_sides = lhs * qlab.pochhammer(2, m, 2) == qlab.identity_rhs_times(l, m, n)
                if not (same_forms and same_sides):
                    identity_bad.append([l, m, n])
                if not (lhs.is_regular() and lhs.is_integral() and lhs.coeff(0) == 1):
                    membership_bad.append([l, m, n])
                    if l >= n + m:
                        membership_bad_in_range.append([l, m, n])
    return {
        "status": _status(not identity_bad and not membership_bad),
        "details": {
            "triples": total,
            "identity_failures": len(identity_bad),
            "membership_failures": len(membership_bad),
            "membership_failures_with_l_ge_n_plus_m": len(membership_bad_in_range),
            "first_membership_failures": membership_bad[:5],
        },
    }


# 2 ------------------------------------------------------------------------------------

def regularized_operators(lmax: int = 10, nmax: int = 4) -> dict:
    failing = []
    for l in range(lmax + 1):
        for n in range(-nmax, nmax + 1):
            if not qlab.regularized_ok(n, l):
                failing.append([n, l])
    bad_n = sorted({n for n, _ in failing})
    return {
        "status": _status(not failing),
        "details": {"failing_pairs": len(failing), "failing_n": bad_n,
                    "checked_pairs": (lmax + 1) * (2 * nmax + 1)},
    }


# 3 ------------------------------------------------------------------------------------

def translation_lengths(types=("A1_1", "A2_1", "A3_1", "A2_2"), bound: int = 2) -> dict:
    per_type = {}
    ok = True
    for label in types:
        datum = build_cartan(label)
        elems = []
        for coeffs in product(range(-bound, bound + 1), repeat=len(datum.classical_nodes)):
            xi = q_tilde_element(datum, coeffs)
            elems.append((coeffs, xi, translation_length(datum, xi)))
        ball = CayleyBall(datum, max(v for _, _, v in elems))
        mismatches = []
        invariance = []
        for coeffs, xi, value in elems:
            t = translation(datum, xi)
            a, b, c = translation_length_formulas(datum, xi)
            if not (a == b == c == value == length(t) == ball.length(t)):
                mismatches.append(list(coeffs))
            for image in classical_orbit(datum, xi):
                if translation_length(datum, image) != value:
                    invariance.append(list(coeffs))
                    break
        per_type[label] = {"elements": len(elems), "mismatches": mismatches,
                           "invariance_failures": invariance}
        ok = ok and not mismatches and not invariance
    return {"status": _status(ok), "details": per_type}


# 4 ------------------------------------------------------------------------------------

def combinatorial_R(types=("A1_1", "A2_1"), rows=(1, 2)) -> dict:
    details = {}
    ok = True
    for label in types:
        crystals = {s: catalog(label, 1, s) for s in rows}
        for s1, s2 in product(rows, repeat=2):
            B1, B2 = crystals[s1], crystals[s2]
            R = comb_R(B1, B2)
            problems = check_comb_R(R)
            recursion = s_map_recursion(B1, B2, R)
            bookkeeping = s_map_bookkeeping(R)
            key = f"{label} B1,{s1} x B1,{s2}"
            details[key] = {"bijection": R.is_bijection(), "problems": problems,
                            "s_map_agrees": recursion == bookkeeping}
            ok = ok and R.is_bijection() and not problems and recursion == bookkeeping
        for s in rows:
            B = crystals[s]
            H = energy(B)
            u = catalog_highest(B)
            same = H == energy_from_R(B)
            details[f"{label} H on B1,{s}"] = {"H(u x u)": H[(u, u)], "matches_R": same}
            ok = ok and H[(u, u)] == 0 and same
    return {"status": _status(ok), "details": details}


def catalog_highest(B):
    return dominant_extremal_node(B)


# 5 ------------------------------------------------------------------------------------

def level_zero_theorems(fundamental=("A1_1", "A2_1", "A3_1", "A4_1"),
                        perfect=(("A1_1", 1), ("A1_1", 2), ("A2_1", 1), ("A2_1", 2))) -> dict:
    details = {}
    ok = True
    for label in fundamental:
        B = catalog(label, 1, 1)
        checks = fundamental_weight_checks(B)
        simple = is_simple(B)
        flags = {k: bool(v) for k, v in checks.items() if k != "lambda"}
        details[f"{label} W(varpi_1)"] = {**flags, "simple": simple}
        ok = ok and all(flags.values()) and simple
    for label, s in perfect:
        B = catalog(label, 1, s)
        report = perfect_check(B, s)
        details[f"{label} B1,{s} perfect of level {s}"] = report.ok
        ok = ok and report.ok and is_simple(B)
    return {"status": _status(ok), "details": details}


# 6 ------------------------------------------------------------------------------------

def star_crystal_engine(depth: int = 30, lam_range: int = 30, mmax: int = 10) -> dict:
    B = bstar.rank1()
    max_mismatch = 0
    stat_failures = 0
    bound_failures = 0
    elements = 0
    for n1 in range(depth + 1):
        for m2 in range(depth + 1 - n1):
            for k in range(-lam_range, lam_range + 1):
                b = bstar.BTildeElement(n1, (k,), m2)
                elements += 1
                if (B.e_max(0, b) != B.e_max_iterated(0, b)
                        or B.f_max(0, b) != B.f_max_iterated(0, b)
                        or B.estar_max(0, b) != B.estar_max_iterated(0, b)
                        or B.fstar_max(0, b) != B.fstar_max_iterated(0, b)):
                    max_mismatch += 1
                if (B.phi(0, b) - B.eps(0, b) != B.wt(b)[0]
                        or B.phi_star(0, b) - B.eps_star(0, b) != B.wt_star(b)[0]
                        or B.star(B.star(b)) != b):
                    stat_failures += 1
                if B.is_extremal(B.star(b), 4) and not B.eps_star_bounds_hold(b):
                    bound_failures += 1
    commutation_failures = 0
    display_failures = 0
    samples = 0
    for b in bstar.rank1_elements(8, 8):
        samples += 1
        if B.reflection(0, B.reflection_star(0, b)) != B.reflection_star(0, B.reflection(0, b)):
            commutation_failures += 1
        if b.b2 == 0:
            for closed, generic in ((B.S, B.reflection), (B.S_star, B.reflection_star)):
                try:
                    value = closed(0, b)
                except ValueError:
                    continue
                if value != generic(0, b):
                    display_failures += 1
    lambda_failures = []
    for m in range(-mmax, mmax + 1):
        members = sorted((n1, m2) for n1 in range(mmax + 3) for m2 in range(mmax + 3)
                         if B.in_B_lambda(bstar.BTildeElement(n1, (m,), m2), 4))
        expected = [(j, 0) for j in range(m + 1)] if m >= 0 else [(0, j) for j in range(-m + 1)]
        if members != expected:
            lambda_failures.append(m)
    ok = not (max_mismatch or stat_failures or bound_failures or commutation_failures
              or display_failures or lambda_failures)
    return {"status": _status(ok), "details": {
        "elements": elements, "max_operator_mismatches": max_mismatch,
        "statistic_failures": stat_failures, "eps_star_bound_failures": bound_failures,
        "commutation_samples": samples, "commutation_failures": commutation_failures,
        "display_failures": display_failures, "B_lambda_failures": lambda_failures}}


# 7 ------------------------------------------------------------------------------------

def module_R_matrix(zdeg: int | None = None) -> dict:
    zdeg = rmatrix.zdeg_default() if zdeg is None else zdeg
    V = rmatrix.build_rep("A1_1", 1, 1)
    R = rmatrix.solve_rnorm(V, V)
    second = rmatrix.rnorm_by_cyclic_vector(V, V)
    psi = rmatrix.denominator(R)
    limit = rmatrix.crystal_limit_check(R, psi=psi)
    T = rmatrix.tensor_square(V, zdeg)
    involution = rmatrix.cnorm_involution_failures(T)
    gb = rmatrix.global_basis_report(V, zdeg)
    zero = sympy.nsimplify(rmatrix.psi_zeros(psi)[0])
    regular = (1, 1)
    pole = (zero, 1)
    cyc = {}
    for name, (a1, a2) in (("regular", regular), ("pole", pole), ("swapped pole", (1, zero))):
        generated = rmatrix.cyclicity_test(V, a1, V, a2)
        cyc[name] = {
            "ratio": str(sympy.sympify(a1) / sympy.sympify(a2)),
            "generated": generated,
            "criterion": rmatrix.pole_criterion(V, a1, V, a2),
            "criterion_other_orientation": rmatrix.pole_criterion(
                V, a1, V, a2, orientation="later_over_earlier"),
        }
    cyclic_ok = all(v["generated"] == v["criterion"] for v in cyc.values()) \
        and cyc["regular"]["generated"] and not cyc["pole"]["generated"]
    checks = {
        "solution_dim": R.solution_dim,
        "intertwines": rmatrix.check_intertwiner(R),
        "second_route_agrees": rmatrix.same_matrix(R.matrix, second.matrix),
        "psi": rmatrix.format_psi(psi),
        "psi_in_1_plus_qzA[z]": rmatrix.psi_in_expected_ring(psi),
        "triangularity_failures": len(rmatrix.triangularity_failures(R)),
        "crystal_limit": limit["ok"],
        "cnorm_fixes_u": rmatrix.cnorm_fixes_u(T),
        "cnorm_involution_failures": len(involution),
        "global_basis_valuation": gb["valuation_ok"],
        "global_basis_bar_invariant": gb["bar_invariant"],
        "global_basis_symmetry": gb["symmetry_ok"],
        "yang_baxter": rmatrix.yang_baxter_holds(V),
        "cyclicity": cyc,
        "zdeg": zdeg,
    }
    ok = (R.solution_dim == 1 and checks["intertwines"] and checks["second_route_agrees"]
          and checks["psi_in_1_plus_qzA[z]"] and not checks["triangularity_failures"]
          and limit["ok"] and checks["cnorm_fixes_u"] and not involution
          and gb["valuation_ok"] and gb["bar_invariant"] and gb["symmetry_ok"]
          and checks["yang_baxter"] and cyclic_ok)
    return {"status": _status(ok), "details": checks}


# 8 ------------------------------------------------------------------------------------

def fock_factorization(depth: int = 6) -> dict:
    B = catalog("A1_1", 1, 1)
    F = FockSpace(B, 1, 0)
    graded = F.enumerate_graded(depth)
    lam = F.ground.weight(0)
    oracle = character_oracle(F.datum, lam, depth)
    in_cone = all(all(c >= 0 for c in F.datum.root_coords(lam - F.weight(p)))
                  for p in F.enumerate_paths(depth))
    top = graded.get((lam.cl(), 0), 0)
    diff = sorted(str(k) for k in set(graded) | set(oracle) if graded.get(k, 0) != oracle.get(k, 0))
    ok = not diff and top == 1 and in_cone
    return {"status": _status(ok), "details": {
        "depth": depth, "weights": len(graded), "elements": sum(graded.values()),
        "multiplicity_at_lambda_0": top, "in_lambda_0_minus_Q_plus": in_cone,
        "differences": diff}}


CRITERIA = {
    1: ("q-series identity", q_series_identity),
    2: ("regularized operators", regularized_operators),
    3: ("translation lengths", translation_lengths),
    4: ("combinatorial R", combinatorial_R),
    5: ("level-zero theorems", level_zero_theorems),
    6: ("star crystal engine", star_crystal_engine),
    7: ("module R-matrix", module_R_matrix),
    8: ("Fock factorization", fock_factorization),
}


def run_suite() -> dict:
    out = {}
    for k, (name, fn) in CRITERIA.items():
        result = fn()
        out[str(k)] = {"name": name, **result}
    return out
