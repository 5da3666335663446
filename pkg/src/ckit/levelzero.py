"""Level-zero catalog crystals, affinization, combinatorial R-matrices and energies."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .cartan import CartanDatum, ClassicalWeight, Weight, build_cartan
from .crystal import (
    CrystalGraph,
    classical_orbit,
    convex_hull_check,
    dominant_extremal_node,
    dominated_weights,
    extremal_nodes,
    is_simple,
    signature,
    tensor_e,
    tensor_f,
)

MAX_ROW_LENGTH = 6


# -- catalog ----------------------------------------------------------------------

def parse_crystal_key(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"B?(\d+),(\d+)", text.replace(" ", ""))
    if not m:
        raise ValueError(f"crystal key {text!r} is not of the form B<r>,<s>")
    return int(m.group(1)), int(m.group(2))


def catalog_keys() -> list[tuple[str, int, int]]:
    keys = []
    for n in range(1, 9):
        for s in range(1, (MAX_ROW_LENGTH if n <= 2 else 2) + 1):
            keys.append((f"A{n}_1", 1, s))
    return keys


def catalog(type_label: str, r: int, s: int) -> CrystalGraph:
    """One-row crystals B^{1,s} of A_n^{(1)}.

    A node is a weakly increasing tuple of letters 1..n+1 of length s.
    f_i (i != 0) turns one letter i into i+1; f_0 turns one letter n+1 into 1.
    """
    datum = build_cartan(type_label)
    if not type_label.endswith("_1") or not type_label.startswith("A") or r != 1 \
            or not 1 <= s <= MAX_ROW_LENGTH:
        raise ValueError(f"no catalog crystal B^{{{r},{s}}} for {type_label}")
    n = datum.rank - 1
    letters = range(1, n + 2)
    nodes = []

    def rec(start, acc):
        if len(acc) == s:
            nodes.append(tuple(acc))
            return
        for x in range(start, n + 2):
            rec(x, acc + [x])

    rec(1, [])
    weights = {}
    edges = {}
    for b in nodes:
        counts = [b.count(x) for x in letters]
        coeffs = [0] * (n + 1)
        for k, c in zip(letters, counts):
            coeffs[k % (n + 1)] += c
            coeffs[k - 1] -= c
        weights[b] = ClassicalWeight(tuple(coeffs))
        for i in range(1, n + 1):
            if i in b:
                lst = list(b)
                lst[lst.index(i)] = i + 1
                edges[(i, b)] = tuple(sorted(lst))
        if n + 1 in b:
            lst = list(b)
            lst[lst.index(n + 1)] = 1
            edges[(0, b)] = tuple(sorted(lst))
    return CrystalGraph(datum, weights, edges, name=f"B1,{s}")


def vector_crystal(type_label: str) -> CrystalGraph:
    return catalog(type_label, 1, 1)


# -- affinization -------------------------------------------------------------------

@dataclass
class AffineCrystal:
    """B_aff: nodes (n, b) with weight s(wt b) + n delta; f_{i0} lowers n by one."""
    base: CrystalGraph

    @property
    def datum(self) -> CartanDatum:
        return self.base.datum

    def wt(self, node) -> Weight:
        n, b = node
        return self.base.wt(b).lift(n)

    def f(self, i: int, node):
        n, b = node
        t = self.base.f(i, b)
        return None if t is None else (n - (i == self.datum.i0), t)

    def e(self, i: int, node):
        n, b = node
        t = self.base.e(i, b)
        return None if t is None else (n + (i == self.datum.i0), t)

    def eps(self, i: int, node) -> int:
        return self.base.eps(i, node[1])

    def phi(self, i: int, node) -> int:
        return self.base.phi(i, node[1])

    @staticmethod
    def z(node, k: int = 1):
        return (node[0] + k, node[1])


def affinize(B: CrystalGraph) -> AffineCrystal:
    if any(B.datum.level(B.wt(b)) for b in B.nodes):
        raise ValueError("affinization needs level-zero weights")
    return AffineCrystal(B)


def affine_tensor_step(factors, i: int, nodes: tuple, raising: bool):
    """Apply e_i (raising) or f_i to an affine tensor; returns None if it vanishes."""
    stats = [(A.eps(i, x), A.phi(i, x)) for A, x in zip(factors, nodes)]
    _, _, fpos, epos = signature(stats)
    pos = epos if raising else fpos
    if pos is None:
        return None
    out = list(nodes)
    out[pos] = factors[pos].e(i, nodes[pos]) if raising else factors[pos].f(i, nodes[pos])
    return tuple(out)


# -- combinatorial R ---------------------------------------------------------------

@dataclass
class CombR:
    left: CrystalGraph
    right: CrystalGraph
    table: dict                      # (b1, b2) -> (b2', b1')
    shift: dict                      # (b1, b2) -> D with the affine rule below
    failures: list = field(default_factory=list)

    def __call__(self, b1, b2):
        return self.table[(b1, b2)]

    def affine(self, node1, node2):
        """R((n1, b1) (x) (n2, b2)) = (n2 + D, b2') (x) (n1 - D, b1')."""
        (n1, b1), (n2, b2) = node1, node2
        c2, c1 = self.table[(b1, b2)]
        d = self.shift[(b1, b2)]
        return (n2 + d, c2), (n1 - d, c1)

    def is_bijection(self) -> bool:
        images = set(self.table.values())
        return len(images) == len(self.table) == len(self.left) * len(self.right)


def comb_R(B1: CrystalGraph, B2: CrystalGraph) -> CombR:
    """Propagate u1 (x) u2 -> u2 (x) u1 along the crystal operators of B1 (x) B2."""
    datum = B1.datum
    src, dst = (B1, B2), (B2, B1)
    u1, u2 = dominant_extremal_node(B1), dominant_extremal_node(B2)
    table = {(u1, u2): (u2, u1)}
    shift = {(u1, u2): 0}
    failures = []
    queue = deque([(u1, u2)])
    while queue:
        b = queue.popleft()
        image = table[b]
        for i in datum.index_set:
            for raising in (False, True):
                nb = _step(src, i, b, raising)
                nimage = _step(dst, i, image, raising)
                if (nb is None) != (nimage is None):
                    failures.append(f"vanishing mismatch at {b}, i={i}")
                    continue
                if nb is None:
                    continue
                d = shift[b]
                if i == datum.i0:
                    left_src = _position(src, i, b if not raising else nb) == 0
                    left_dst = _position(dst, i, image if not raising else nimage) == 0
                    step = 1 - left_src - left_dst
                    d = d + step if not raising else d - step
                if nb in table:
                    if table[nb] != nimage or shift[nb] != d:
                        failures.append(f"conflict at {nb}")
                    continue
                table[nb] = nimage
                shift[nb] = d
                queue.append(nb)
    if len(table) != len(B1) * len(B2):
        failures.append("propagation did not reach every element: tensor product not connected")
    return CombR(B1, B2, table, shift, failures)


def _step(factors, i, b, raising):
    return tensor_e(factors, i, b) if raising else tensor_f(factors, i, b)


def _position(factors, i, b) -> int:
    """Index of the factor on which f_i acts."""
    stats = [(B.eps(i, x), B.phi(i, x)) for B, x in zip(factors, b)]
    return signature(stats)[2]


def check_comb_R(R: CombR, window: int = 1) -> list[str]:
    """Bijectivity, operator commutation (classical and affine) and the round trip."""
    problems = list(R.failures)
    if not R.is_bijection():
        problems.append("not a bijection")
    datum = R.left.datum
    src, dst = (R.left, R.right), (R.right, R.left)
    for b, image in R.table.items():
        for i in datum.index_set:
            for raising in (False, True):
                nb = _step(src, i, b, raising)
                nimage = _step(dst, i, image, raising)
                expected = None if nb is None else R.table[nb]
                if expected != nimage:
                    problems.append(f"R does not commute with colour {i} at {b}")
    aff_src = (affinize(R.left), affinize(R.right))
    aff_dst = (affinize(R.right), affinize(R.left))
    for (b1, b2) in R.table:
        for n1, n2 in product(range(-window, window + 1), repeat=2):
            p = ((n1, b1), (n2, b2))
            image = R.affine(*p)
            for i in datum.index_set:
                q = affine_tensor_step(aff_src, i, p, raising=False)
                qi = affine_tensor_step(aff_dst, i, image, raising=False)
                if (None if q is None else R.affine(*q)) != qi:
                    problems.append(f"affine R does not commute with f_{i} at {p}")
            if R.affine((n1 + 1, b1), (n2, b2)) != (image[0], (image[1][0] + 1, image[1][1])):
                problems.append("z (x) 1 is not sent to 1 (x) z")
    back = comb_R(R.right, R.left)
    for (b1, b2), (c2, c1) in R.table.items():
        if back.table[(c2, c1)] != (b1, b2) or back.shift[(c2, c1)] != R.shift[(b1, b2)]:
            problems.append(f"round trip fails at {(b1, b2)}")
    return problems


# -- energy ------------------------------------------------------------------------

def energy(B: CrystalGraph) -> dict:
    """H on B (x) B from H(u (x) u) = 0 and the colour-0 rule; checked on every edge."""
    datum = B.datum
    u = dominant_extremal_node(B)
    factors = (B, B)
    H = {(u, u): 0}
    queue = deque([(u, u)])
    while queue:
        b = queue.popleft()
        for i in datum.index_set:
            nb = tensor_f(factors, i, b)
            if nb is not None and nb not in H:
                H[nb] = H[b] + _energy_step(factors, i, b)
                queue.append(nb)
            pb = tensor_e(factors, i, b)
            if pb is not None and pb not in H:
                H[pb] = H[b] - _energy_step(factors, i, pb)
                queue.append(pb)
    if len(H) != len(B) ** 2:
        raise ValueError("B (x) B is not connected; energy undefined")
    for b in H:
        for i in datum.index_set:
            nb = tensor_f(factors, i, b)
            if nb is not None and H[nb] != H[b] + _energy_step(factors, i, b):
                raise AssertionError(f"energy is path dependent at {b}, colour {i}")
    return dict(sorted(H.items()))


def _energy_step(factors, i, b) -> int:
    if i != factors[0].datum.i0:
        return 0
    return 1 if _position(factors, i, b) == 0 else -1


def energy_from_R(B: CrystalGraph) -> dict:
    """H = -D read off the z-shift of the combinatorial R of B (x) B."""
    R = comb_R(B, B)
    if any(R.table[b] != b for b in R.table):
        raise AssertionError("classical R on B (x) B is not the identity")
    return {b: -d for b, d in sorted(R.shift.items())}


def affine_energy(H: dict, node1, node2) -> int:
    """H((n1, b1) (x) (n2, b2)) = H(b1 (x) b2) + n1 - n2."""
    return H[(node1[1], node2[1])] + node1[0] - node2[0]


def extremal_diagonal_values(B: CrystalGraph, H: dict) -> dict:
    return {v: H[(v, v)] for v in extremal_nodes(B)}


def energy_level_components(B: CrystalGraph, H: dict, levels=range(-2, 3)) -> dict:
    """For each level h, the number of connected pieces of H^{-1}(h) modulo z (x) z."""
    datum = B.datum
    aff = (affinize(B), affinize(B))
    out = {}
    for h in levels:
        # modulo z (x) z a node is (b1, b2) with n1 - n2 = h - H(b1 (x) b2), n2 = 0
        nodes = {((h - H[(x, y)], x), (0, y)) for (x, y) in H}
        seen = set()
        comps = 0
        for start in sorted(nodes):
            if start in seen:
                continue
            comps += 1
            queue = deque([start])
            seen.add(start)
            while queue:
                p = queue.popleft()
                for i in datum.index_set:
                    for raising in (False, True):
                        q = affine_tensor_step(aff, i, p, raising)
                        if q is None:
                            continue
                        shift = q[1][0]
                        q = ((q[0][0] - shift, q[0][1]), (0, q[1][1]))
                        if affine_energy(H, *q) != h:
                            raise AssertionError("energy not constant along an edge")
                        if q not in seen:
                            seen.add(q)
                            queue.append(q)
        out[h] = comps
    return out


# -- S map --------------------------------------------------------------------------

def s_map_bookkeeping(R: CombR) -> dict:
    """S(b1 (x) b2) = wt(b1') - wt(b1) in root coordinates, from the affine R."""
    datum = R.left.datum
    out = {}
    for (b1, b2) in R.table:
        _, (n1p, c1) = R.affine((0, b1), (0, b2))
        diff = R.left.wt(c1).lift(n1p) - R.left.wt(b1).lift(0)
        out[(b1, b2)] = _int_coords(datum, diff)
    return dict(sorted(out.items()))


def s_map_recursion(B1: CrystalGraph, B2: CrystalGraph, R: CombR | None = None) -> dict:
    """S from S(u1 (x) u2) = 0 and the three-case f_i rule."""
    R = R or comb_R(B1, B2)
    datum = B1.datum
    src, dst = (B1, B2), (B2, B1)
    u = (dominant_extremal_node(B1), dominant_extremal_node(B2))
    zero = (0,) * datum.rank
    S = {u: zero}
    queue = deque([u])
    while queue:
        b = queue.popleft()
        for i in datum.index_set:
            nb = tensor_f(src, i, b)
            if nb is not None and nb not in S:
                S[nb] = _s_step(S[b], i, _position(src, i, b), _position(dst, i, R.table[b]))
                queue.append(nb)
            pb = tensor_e(src, i, b)
            if pb is not None and pb not in S:
                step = _s_step(zero, i, _position(src, i, pb), _position(dst, i, R.table[pb]))
                S[pb] = tuple(a - c for a, c in zip(S[b], step))
                queue.append(pb)
    return dict(sorted(S.items()))


def _s_step(base, i, pos_src, pos_dst):
    out = list(base)
    if pos_src == 0 and pos_dst == 0:
        out[i] += 1
    elif pos_src == 1 and pos_dst == 1:
        out[i] -= 1
    return tuple(out)


def _int_coords(datum: CartanDatum, beta: Weight) -> tuple[int, ...]:
    coords = datum.root_coords(beta)
    if any(c.denominator != 1 for c in coords):
        raise AssertionError(f"{beta} is not in the root lattice")
    return tuple(int(c) for c in coords)


def s_map(B1: CrystalGraph, B2: CrystalGraph) -> dict:
    R = comb_R(B1, B2)
    book = s_map_bookkeeping(R)
    rec = s_map_recursion(B1, B2, R)
    if book != rec:
        raise AssertionError("S map: recursion and R bookkeeping disagree")
    return book


def s_from_energy(B: CrystalGraph, H: dict) -> dict:
    """S(b1 (x) b2) = wt(b2) - wt(b1) + H(b1 (x) b2) delta, same-module case."""
    datum = B.datum
    return {(x, y): _int_coords(datum, B.wt(y).lift(h) - B.wt(x).lift(0))
            for (x, y), h in sorted(H.items())}


# -- perfectness and good conditions --------------------------------------------------

@dataclass
class PerfectReport:
    level: int
    p1: bool
    p2_eps: bool
    p2_phi: bool
    minimal: list
    eps_map: dict
    phi_map: dict

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2_eps and self.p2_phi


def perfect_check(B: CrystalGraph, level: int) -> PerfectReport:
    datum = B.datum
    p1 = all(datum.level(B.eps_vector(b)) == datum.level(B.phi_vector(b)) >= level for b in B.nodes)
    minimal = [b for b in B.nodes if datum.level(B.eps_vector(b)) == level]
    eps_map = {b: B.eps_vector(b) for b in minimal}
    phi_map = {b: B.phi_vector(b) for b in minimal}
    targets = set(datum.dominant_classical_of_level(level))
    p2_eps = len(set(eps_map.values())) == len(minimal) and set(eps_map.values()) == targets
    p2_phi = len(set(phi_map.values())) == len(minimal) and set(phi_map.values()) == targets
    return PerfectReport(level, p1, p2_eps, p2_phi, minimal, eps_map, phi_map)


def classical_length(B: CrystalGraph, b) -> Fraction:
    """l(b) for b = (n, x): height of wt(b) - wt(u) in simple roots."""
    datum = B.datum
    u = dominant_extremal_node(B)
    n, x = b
    return sum(datum.root_coords(B.wt(x).lift(n) - B.wt(u).lift(0)), Fraction(0))


def good_conditions(B: CrystalGraph, H: dict | None = None, window: int = 2) -> dict:
    """(L) and the Q_+ condition for H <= 0, on affine pairs with |n1 - n2| <= window + max|H|."""
    datum = B.datum
    H = H or energy(B)
    span = window + max(abs(v) for v in H.values())
    l_failures = []
    q_failures = []
    for (x, y), h in H.items():
        for d in range(-span, span + 1):
            p1, p2 = (d, x), (0, y)
            if affine_energy(H, p1, p2) > 0:
                continue
            if classical_length(B, p1) > classical_length(B, p2):
                l_failures.append((p1, p2))
            coords = datum.root_coords(B.wt(y).lift(0) - B.wt(x).lift(d))
            if any(c < 0 or c.denominator != 1 for c in coords):
                q_failures.append((p1, p2))
    u = dominant_extremal_node(B)
    z_shift = classical_length(B, (1, u)) - classical_length(B, (0, u)) == sum(datum.marks)
    return {"L": not l_failures, "Q+": not q_failures, "z_shift": z_shift,
            "L_failures": l_failures, "Q+_failures": q_failures}


def wedge_basis(B: CrystalGraph, m: int, window: tuple[int, int] | None = None,
                H: dict | None = None) -> list[tuple]:
    """Tuples (n_1, b_1), ..., (n_m, b_m) with n_j in [lo, hi) and H(b_j (x) b_{j+1}) > 0."""
    lo, hi = window if window is not None else (0, m)
    if hi <= lo:
        raise ValueError("empty degree window")
    H = H or energy(B)
    singles = [(n, b) for n in range(lo, hi) for b in B.nodes]
    out = [(p,) for p in singles]
    for _ in range(m - 1):
        out = [t + (p,) for t in out for p in singles if affine_energy(H, t[-1], p) > 0]
    return sorted(out)


# -- fundamental weight checks ---------------------------------------------------------

def fundamental_weight_checks(B: CrystalGraph, i: int = 1, mult: int = 1) -> dict:
    """Weight checks for lambda = mult * cl(varpi_i).

    top_weight_simple: the lambda weight space is one-dimensional.
    extremal_in_orbit: extremal weights lie in W_cl lambda.
    weights_fill_hull: the weights are exactly lambda + Q_cl inside the hull of W_cl lambda.
    hull: every weight lies in that convex hull.
    """
    datum = B.datum
    lam = datum.varpi(i).cl().scale(mult)
    mults = B.weight_multiplicities()
    orbit = set(classical_orbit(datum, lam))
    ext_weights = {B.wt(b) for b in extremal_nodes(B)}
    coset_hull = set(dominated_weights(datum, lam))
    weights = set(mults)
    hull_ok = all(convex_hull_check(datum, mu, lam) for mu in weights)
    return {
        "top_weight_simple": mults.get(lam, 0) == 1,
        "extremal_in_orbit": bool(ext_weights) and ext_weights <= orbit,
        "weights_fill_hull": weights == coset_hull,
        "hull": hull_ok,
        "simple": is_simple(B),
        "lambda": lam,
    }
