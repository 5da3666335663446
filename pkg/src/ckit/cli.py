"""Batch command-line front end: ``ckit <command> ...``.

Every command builds a CommandResult; the exit code is 0 when its status is
"pass", 1 when a check fails and 2 on usage errors.  ``--out json`` prints the
payload as JSON with sorted keys, ``--out dot`` prints a graph where the
command has one, and the default is a short human summary.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import sympy

from . import acceptance, bstar, qlab, rmatrix
from .cartan import CATALOG, ClassicalWeight, Weight, build_cartan
from .crystal import CrystalGraph, extremal_nodes, node_label, simple_report, tensor
from .fock import FockSpace, character_oracle
from .levelzero import (catalog, check_comb_R, comb_R, energy, energy_from_R,
                        parse_crystal_key, perfect_check)
from .weyl import (CayleyBall, from_word, is_regularly_w_dominant, is_w_dominant,
                   length, q_tilde_element, translation, translation_length,
                   translation_length_formulas)


@dataclass
class CommandResult:
    status: str                      # "pass", "fail" or "error"
    payload: dict
    summary: str
    dot: str | None = field(default=None)

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1}.get(self.status, 2)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def jsonable(x):
    """Turn the library's values into plain JSON data with a fixed order."""
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (Weight, ClassicalWeight)):
        return x.to_json()
    if isinstance(x, bstar.BTildeElement):
        return [jsonable(x.b1), list(x.lam), jsonable(x.b2)]
    return str(x)


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple) and len(k) == 2 and all(isinstance(x, tuple) for x in k):
        return f"{node_label(k[0])} x {node_label(k[1])}"
    return node_label(k)


# -- argument types ---------------------------------------------------------------------

def type_label(text: str) -> str:
    if text not in CATALOG:
        raise argparse.ArgumentTypeError(f"unknown type {text!r}; known types: {', '.join(CATALOG)}")
    return text


def int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def json_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise argparse.ArgumentTypeError(f"invalid JSON: {err}")


def crystal_key(text: str) -> tuple[int, int]:
    try:
        return parse_crystal_key(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def _catalog(label: str, key: tuple[int, int]) -> CrystalGraph:
    return catalog(label, *key)


# -- commands ---------------------------------------------------------------------------

def cmd_cartan(args) -> CommandResult:
    datum = build_cartan(args.type)
    ok = datum.check_invariants()
    payload = {
        "type": datum.type_label,
        "cartan_matrix": [list(row) for row in datum.cartan_matrix],
        "marks": list(datum.marks),
        "comarks": list(datum.comarks),
        "root_lengths": [str(x) for x in datum.root_lengths],
        "d": datum.d,
        "i0": datum.i0,
    }
    rows = "\n".join("  " + " ".join(f"{x:3d}" for x in row) for row in datum.cartan_matrix)
    summary = (f"{datum.type_label}: marks {list(datum.marks)}, comarks {list(datum.comarks)}, "
               f"d = {datum.d}, i0 = {datum.i0}\n{rows}")
    return CommandResult(_verdict(ok), payload, summary)


def cmd_weyl_tlen(args) -> CommandResult:
    datum = build_cartan(args.type)
    if len(args.xi) != len(datum.classical_nodes):
        raise UsageError(f"--xi needs {len(datum.classical_nodes)} coefficients")
    xi = q_tilde_element(datum, args.xi)
    formulas = translation_length_formulas(datum, xi)
    value = translation_length(datum, xi)
    t = translation(datum, xi)
    bfs = CayleyBall(datum, value).length(t)
    ok = all(f == value for f in formulas) and length(t) == value == bfs
    payload = {"xi": xi.to_json(), "formulas": [str(f) for f in formulas],
               "formula_length": value, "bfs_length": bfs, "descent_length": length(t)}
    summary = (f"l(t(xi)) by the formulas: {', '.join(str(f) for f in formulas)}; "
               f"by BFS: {bfs}")
    return CommandResult(_verdict(ok), payload, summary)


def cmd_weyl_dom(args) -> CommandResult:
    datum = build_cartan(args.type)
    lam = Weight.from_json(args.lam, datum.rank)
    w = from_word(datum, args.word)
    dominant = is_w_dominant(datum, lam, w)
    regular = is_regularly_w_dominant(datum, lam, w)
    payload = {"lambda": lam.to_json(), "word": args.word, "w_dominant": dominant,
               "regularly_w_dominant": regular}
    summary = f"w-dominant: {dominant}; regularly w-dominant: {regular}"
    return CommandResult(_verdict(dominant), payload, summary)


def cmd_crystal(args) -> CommandResult:
    factors = [_catalog(args.type, key) for key in args.crystal]
    B = factors[0] if len(factors) == 1 else tensor(*factors)
    if args.action == "tensor":
        failures = B.string_axiom_failures()
        payload = {"crystal": B.to_json(), "string_axiom_failures": failures}
        summary = f"{len(B.nodes)} nodes, {len(B.edges())} edges, {len(B.components())} components"
        return CommandResult(_verdict(not failures), payload, summary, B.to_dot())
    if args.action == "extremal":
        ext = extremal_nodes(B)
        payload = {"extremal": [{"id": node_label(b), "wt": B.wt(b).to_json()["L"]} for b in ext]}
        summary = f"{len(ext)} extremal nodes: " + ", ".join(node_label(b) for b in ext)
        return CommandResult("pass", payload, summary, B.to_dot())
    report = simple_report(B)
    ok = report["single_orbit"] and report["multiplicity_one"]
    summary = f"simple: {ok} ({report['extremal_count']} extremal nodes, lambda = {report['lambda']})"
    return CommandResult(_verdict(ok), jsonable(report), summary, B.to_dot())


def _element(data) -> bstar.BTildeElement:
    if not (isinstance(data, list) and len(data) == 3):
        raise UsageError("--element must be a JSON triple [b1, lambda, b2]")
    b1, lam, b2 = data
    lam = [lam] if isinstance(lam, int) else lam
    if not (isinstance(b1, int) and isinstance(b2, int) and b1 >= 0 and b2 >= 0 and len(lam) == 1):
        raise UsageError("rank-1 elements are [n, [k], m] with n, m >= 0")
    return bstar.BTildeElement(b1, tuple(lam), b2)


def cmd_bstar(args) -> CommandResult:
    if args.action == "schubert":
        model = bstar.TypeAInfinity(args.n, args.depth)
        if any(not 1 <= i <= args.n for i in args.word):
            raise UsageError(f"--word letters must lie in 1..{args.n}")
        enumerated = bstar.schubert_enumerate(model, args.word, args.depth)
        peeled = {b for b in model.all_elements() if bstar.schubert_member_by_peeling(model, b, args.word)}
        ok = enumerated == peeled
        payload = {"n": args.n, "word": args.word, "depth": args.depth, "size": len(enumerated),
                   "agrees_with_peeling": ok, "elements": sorted(jsonable(b) for b in enumerated)}
        summary = f"|B_w(inf)| up to depth {args.depth}: {len(enumerated)}; peeling agrees: {ok}"
        return CommandResult(_verdict(ok), payload, summary)
    B = bstar.rank1()
    b = _element(args.element)
    if args.action == "stats":
        stats = B.stats(b)
        ok = all(p - e == w for p, e, w in zip(stats["phi"], stats["eps"], stats["wt"]))
        summary = ", ".join(f"{k} {list(v)}" for k, v in stats.items())
        return CommandResult(_verdict(ok), jsonable({"element": b, **stats}), summary)
    orbit = B.extremal_orbit(b, args.bound)
    payload = {"element": jsonable(b), "extremal": orbit is not None,
               "orbit": jsonable(orbit) if orbit is not None else None}
    summary = ("not extremal" if orbit is None
               else f"extremal, orbit of size {len(orbit)}: " + ", ".join(json.dumps(jsonable(x)) for x in orbit))
    return CommandResult(_verdict(orbit is not None), payload, summary)


def cmd_rcomb(args) -> CommandResult:
    B1, B2 = _catalog(args.type, args.left), _catalog(args.type, args.right)
    R = comb_R(B1, B2)
    problems = check_comb_R(R)
    ok = R.is_bijection() and not problems
    table = [{"from": [node_label(b1), node_label(b2)], "to": [node_label(c2), node_label(c1)],
              "shift": R.shift[(b1, b2)]} for (b1, b2), (c2, c1) in R.table.items()]
    payload = {"table": table, "bijection": R.is_bijection(), "problems": problems}
    lines = ['digraph "R" {']
    for row in table:
        src, dst = " x ".join(row["from"]), " x ".join(row["to"])
        lines.append(f'  "{src}" -> "R: {dst}" [label="{row["shift"]}"];')
    lines.append("}")
    summary = "\n".join(f"{' x '.join(r['from'])} -> {' x '.join(r['to'])}  (shift {r['shift']})"
                        for r in table)
    return CommandResult(_verdict(ok), payload, summary, "\n".join(lines) + "\n")


def cmd_energy(args) -> CommandResult:
    B = _catalog(args.type, args.crystal)
    H = energy(B)
    u = acceptance.catalog_highest(B)
    agrees = H == energy_from_R(B)
    ok = H[(u, u)] == 0 and agrees
    payload = {"H": jsonable(H), "H(u x u)": H[(u, u)], "matches_R": agrees}
    summary = "\n".join(f"H({node_label(b1)} x {node_label(b2)}) = {v}" for (b1, b2), v in H.items())
    return CommandResult(_verdict(ok), payload, summary)


def cmd_perfect(args) -> CommandResult:
    B = _catalog(args.type, args.crystal)
    report = perfect_check(B, args.level)
    payload = {"level": report.level, "p1": report.p1, "p2_eps": report.p2_eps,
               "p2_phi": report.p2_phi, "minimal": jsonable(report.minimal),
               "eps": jsonable(report.eps_map), "phi": jsonable(report.phi_map)}
    summary = (f"perfect of level {args.level}: {report.ok} "
               f"(P1 {report.p1}, eps bijective {report.p2_eps}, phi bijective {report.p2_phi})")
    return CommandResult(_verdict(report.ok), payload, summary)


def _graded_rows(table: dict) -> list:
    return [{"weight": list(w.coeffs), "depth": d, "dim": v} for (w, d), v in sorted(table.items())]


def cmd_fock(args) -> CommandResult:
    B = _catalog(args.type, args.crystal)
    F = FockSpace(B, args.crystal[1], args.r)
    graded = F.enumerate_graded(args.depth)
    payload = {"fock": _graded_rows(graded)}
    lines = [f"{list(w.coeffs)} depth {d}: {v}" for (w, d), v in sorted(graded.items())]
    ok = True
    if args.check_f7:
        oracle = character_oracle(F.datum, F.ground.weight(0), args.depth)
        ok = oracle == graded
        payload["oracle"] = _graded_rows(oracle)
        payload["agree"] = ok
        lines.append(f"character factorization: {'PASS' if ok else 'FAIL'}")
    return CommandResult(_verdict(ok), payload, "\n".join(lines))


def cmd_q_identity(args) -> CommandResult:
    failures = qlab.scan_qbinomial_identity(args.nmax, args.mmax, args.span)
    payload = {"nmax": args.nmax, "mmax": args.mmax, "span": args.span,
               "failures": [list(t) for t in failures]}
    summary = f"{len(failures)} failing (l, m, n) triples" + (
        ": " + ", ".join(str(t) for t in failures) if failures else "")
    return CommandResult(_verdict(not failures), payload, summary)


def cmd_q_regop(args) -> CommandResult:
    if args.l < 0:
        raise UsageError("--l must be nonnegative")
    coeffs = qlab.regularized_coefficients(args.n, qlab.Sl2Module(args.l))
    ok = qlab.regularized_ok(args.n, args.l)
    payload = {"l": args.l, "n": args.n, "ok": ok,
               "coefficients": {str(m): str(c) for m, c in sorted(coeffs.items())}}
    summary = "\n".join(f"m = {m}: c = {c}" for m, c in sorted(coeffs.items()))
    return CommandResult(_verdict(ok), payload, summary)


def _rep(args) -> rmatrix.ModuleRep:
    try:
        return rmatrix.build_rep(args.type, *args.crystal)
    except ValueError as err:
        raise UsageError(str(err))


def cmd_rnorm(args) -> CommandResult:
    V = _rep(args)
    zdeg = rmatrix.zdeg_default() if args.zdeg is None else args.zdeg
    R = rmatrix.solve_rnorm(V, V)
    psi = rmatrix.denominator(R)
    limit = rmatrix.crystal_limit_check(R, psi=psi)
    intertwines = rmatrix.check_intertwiner(R)
    entries = R.to_json()
    series = {}
    for (c, d), (a, b), v in R.entries():
        key = f"{V.nodes[c]}x{V.nodes[d]}<-{V.nodes[a]}x{V.nodes[b]}"
        series[key] = {str(j): str(rmatrix.rf_to_sympy(x))
                       for j, x in sorted(rmatrix.z_series(v, zdeg).items())}
    ok = R.solution_dim == 1 and intertwines and limit["ok"]
    payload = {"solution_dim": R.solution_dim, "intertwines": intertwines, "psi": rmatrix.format_psi(psi),
               "crystal_limit": limit["ok"], "entries": entries, "z_series": series, "zdeg": zdeg}
    summary = "\n".join([f"psi(z) = {payload['psi']}",
                         *(f"{k}: {v}" for k, v in entries.items()),
                         f"crystal limit: {limit['ok']}"])
    return CommandResult(_verdict(ok), payload, summary)


def cmd_cyclic(args) -> CommandResult:
    V = _rep(args)
    try:
        ratio = sympy.sympify(args.ratio, locals={"q": rmatrix.Q})
    except (sympy.SympifyError, TypeError) as err:
        raise UsageError(f"cannot parse --ratio: {err}")
    if ratio.free_symbols - {rmatrix.Q} or ratio == 0:
        raise UsageError("--ratio must be a nonzero rational function of q")
    generated = rmatrix.cyclicity_test(V, ratio, V, 1)
    criterion = rmatrix.pole_criterion(V, ratio, V, 1)
    payload = {"ratio": str(ratio), "generated": generated, "pole_criterion": criterion}
    summary = (f"u (x) u generates V_{{{ratio}}} (x) V_1: {generated}; "
               f"no zero of psi at the ratio: {criterion}")
    return CommandResult(_verdict(generated == criterion), payload, summary)


def cmd_suite(args) -> CommandResult:
    results = acceptance.run_suite()
    ok = all(r["status"] == "PASS" for r in results.values())
    summary = "\n".join(f"{r['status']} {k} {r['name']}" for k, r in results.items())
    return CommandResult(_verdict(ok), results, summary)


# -- parser -----------------------------------------------------------------------------

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", choices=("text", "json", "dot"), default="text")
    typed = argparse.ArgumentParser(add_help=False)
    typed.add_argument("--type", type=type_label, required=True)

    parser = _Parser(prog="ckit", description="Level-zero affine crystal toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cartan", parents=[out, typed], help="affine Cartan datum")
    p.set_defaults(run=cmd_cartan)

    weyl = sub.add_parser("weyl", help="affine Weyl group").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = weyl.add_parser("tlen", parents=[out, typed], help="length of a translation t(xi)")
    p.add_argument("--xi", type=int_list, required=True,
                   help="coefficients of xi in the basis of alpha-tilde")
    p.set_defaults(run=cmd_weyl_tlen)
    p = weyl.add_parser("dom", parents=[out, typed], help="w-dominance of a weight")
    p.add_argument("--lambda", dest="lam", type=json_value, required=True,
                   help='weight as JSON, e.g. {"L": {"0": 1}, "delta": "0"}')
    p.add_argument("--word", type=int_list, required=True)
    p.set_defaults(run=cmd_weyl_dom)

    p = sub.add_parser("crystal", parents=[out, typed], help="catalog crystals")
    p.add_argument("action", choices=("tensor", "extremal", "simple"))
    p.add_argument("--crystal", type=crystal_key, action="append", required=True,
                   help="B<r>,<s>; repeat for tensor factors")
    p.set_defaults(run=cmd_crystal)

    p = sub.add_parser("bstar", parents=[out], help="the crystal B(U~) and Schubert subsets")
    p.add_argument("action", choices=("stats", "orbit", "schubert"))
    p.add_argument("--element", type=json_value, default=[0, [0], 0],
                   help="rank-1 element as a JSON triple [n, [k], m]")
    p.add_argument("--bound", type=int, default=64, help="orbit size bound")
    p.add_argument("--n", type=int, default=2, help="rank of sl_{n+1} for schubert")
    p.add_argument("--word", type=int_list, default=[1, 2, 1])
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(run=cmd_bstar)

    p = sub.add_parser("rcomb", parents=[out, typed], help="combinatorial R-matrix")
    p.add_argument("--left", type=crystal_key, required=True)
    p.add_argument("--right", type=crystal_key, required=True)
    p.set_defaults(run=cmd_rcomb)

    p = sub.add_parser("energy", parents=[out, typed], help="energy function")
    p.add_argument("--crystal", type=crystal_key, required=True)
    p.set_defaults(run=cmd_energy)

    p = sub.add_parser("perfect", parents=[out, typed], help="perfectness")
    p.add_argument("--crystal", type=crystal_key, required=True)
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(run=cmd_perfect)

    p = sub.add_parser("fock", parents=[out, typed], help="path realization")
    p.add_argument("action", choices=("dims",))
    p.add_argument("--crystal", type=crystal_key, required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--check-f7", action="store_true", help="compare with the character formula")
    p.set_defaults(run=cmd_fock)

    q = sub.add_parser("q", help="q-series checks").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    p = q.add_parser("anne", parents=[out], help="q-binomial identity scan")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--mmax", type=int, default=8)
    p.add_argument("--span", type=int, default=8)
    p.set_defaults(run=cmd_q_identity)
    p = q.add_parser("regop", parents=[out], help="regularized operator coefficients")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=cmd_q_regop)

    p = sub.add_parser("rnorm", parents=[out, typed], help="normalized R-matrix")
    p.add_argument("--crystal", type=crystal_key, default=(1, 1))
    p.add_argument("--zdeg", type=int, default=None)
    p.set_defaults(run=cmd_rnorm)

    p = sub.add_parser("cyclic", parents=[out, typed], help="cyclicity of V_a (x) V_1")
    p.add_argument("--crystal", type=crystal_key, default=(1, 1))
    p.add_argument("--ratio", required=True, help="a rational function of q, e.g. q**2")
    p.set_defaults(run=cmd_cyclic)

    p = sub.add_parser("suite", help="run the acceptance battery (JSON by default)")
    p.add_argument("--out", choices=("text", "json"), default="json")
    p.set_defaults(run=cmd_suite)
    return parser


def run(argv=None) -> tuple[CommandResult, str]:
    """Parse and dispatch; return the result and the requested output format."""
    try:
        args = build_parser().parse_args(argv)
        if args.out == "dot" and args.run not in (cmd_crystal, cmd_rcomb):
            raise UsageError(f"--out dot is not available for {args.command}")
        return args.run(args), args.out
    except UsageError as err:
        return CommandResult("error", {"error": str(err).strip()}, str(err).strip()), "text"


def render(result: CommandResult, out: str) -> str:
    if out == "json":
        return json.dumps(jsonable(result.payload), sort_keys=True, indent=2) + "\n"
    if out == "dot":
        return result.dot
    return f"{result.summary}\n{result.status.upper()}\n"


def main(argv=None) -> int:
    result, out = run(argv)
    stream = sys.stderr if result.status == "error" else sys.stdout
    stream.write(render(result, out))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
