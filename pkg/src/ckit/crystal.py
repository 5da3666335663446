"""Finite crystal graphs with classical weights, tensor products and extremal vectors."""
from __future__ import annotations

import json
from collections import deque
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .cartan import CartanDatum, ClassicalWeight
from .weyl import classical_orbit

Node = Hashable


def signature(stats: Sequence[tuple[int, int]]) -> tuple[int, int, int | None, int | None]:
    """Tensor rule for one colour over factors b_1 (x) ... (x) b_m.

    ``stats`` lists (eps, phi) per factor, left to right.  Each factor
    contributes eps minus signs followed by phi plus signs; adjacent
    "+ -" pairs cancel.  Returns (eps, phi, f_position, e_position) where
    f acts on the leftmost surviving plus and e on the rightmost surviving
    minus.
    """
    pluses: list[list[int]] = []  # runs [position, count], left to right
    minus_total = 0
    last_minus = None
    for pos, (eps, phi) in enumerate(stats):
        remaining = eps
        while remaining and pluses:
            run = pluses[-1]
            take = min(run[1], remaining)
            run[1] -= take
            remaining -= take
            if run[1] == 0:
                pluses.pop()
        if remaining:
            minus_total += remaining
            last_minus = pos
        if phi:
            pluses.append([pos, phi])
    phi_total = sum(run[1] for run in pluses)
    f_pos = pluses[0][0] if pluses else None
    return minus_total, phi_total, f_pos, last_minus


class CrystalGraph:
    """A finite I-coloured graph of f-arrows with classical weights.

    Nodes must be mutually comparable so that every traversal can run in
    ascending order.
    """

    def __init__(self, datum: CartanDatum, weights: dict, f_edges: dict, name: str = ""):
        self.datum = datum
        self.name = name
        self.nodes: tuple = tuple(sorted(weights))
        self._wt = dict(weights)
        self._f = dict(f_edges)
        self._e = {}
        for (i, b), target in self._f.items():
            if (i, target) in self._e:
                raise ValueError(f"two {i}-arrows into {target}")
            self._e[(i, target)] = b
        self._eps: dict = {}
        self._phi: dict = {}

    # -- basic structure -------------------------------------------------------
    @property
    def index_set(self) -> tuple[int, ...]:
        return self.datum.index_set

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, b):
        return b in self._wt

    def wt(self, b) -> ClassicalWeight:
        return self._wt[b]

    def f(self, i: int, b):
        return self._f.get((i, b))

    def e(self, i: int, b):
        return self._e.get((i, b))

    def eps(self, i: int, b) -> int:
        key = (i, b)
        if key not in self._eps:
            k, cur = 0, self.e(i, b)
            while cur is not None:
                k, cur = k + 1, self.e(i, cur)
            self._eps[key] = k
        return self._eps[key]

    def phi(self, i: int, b) -> int:
        key = (i, b)
        if key not in self._phi:
            k, cur = 0, self.f(i, b)
            while cur is not None:
                k, cur = k + 1, self.f(i, cur)
            self._phi[key] = k
        return self._phi[key]

    def e_max(self, i: int, b):
        while (nxt := self.e(i, b)) is not None:
            b = nxt
        return b

    def f_max(self, i: int, b):
        while (nxt := self.f(i, b)) is not None:
            b = nxt
        return b

    def e_power(self, i: int, b, k: int):
        for _ in range(k):
            if b is None:
                return None
            b = self.e(i, b)
        return b

    def f_power(self, i: int, b, k: int):
        for _ in range(k):
            if b is None:
                return None
            b = self.f(i, b)
        return b

    def eps_vector(self, b) -> ClassicalWeight:
        return ClassicalWeight(tuple(self.eps(i, b) for i in self.index_set))

    def phi_vector(self, b) -> ClassicalWeight:
        return ClassicalWeight(tuple(self.phi(i, b) for i in self.index_set))

    def edges(self) -> list[tuple[int, object, object]]:
        return sorted((i, b, t) for (i, b), t in self._f.items())

    # -- validation ------------------------------------------------------------
    def string_axiom_failures(self) -> list[str]:
        bad = []
        for b in self.nodes:
            w = self.wt(b)
            for i in self.index_set:
                if self.phi(i, b) - self.eps(i, b) != w.pairing(i):
                    bad.append(f"phi-eps at {b}, i={i}")
                t = self.f(i, b)
                if t is not None and self.wt(t) != w - self.datum.cl_alpha(i):
                    bad.append(f"weight shift at {b}, i={i}")
        return bad

    def check_string_axioms(self) -> bool:
        return not self.string_axiom_failures()

    def components(self) -> list[list]:
        seen = set()
        out = []
        for start in self.nodes:
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                b = queue.popleft()
                comp.append(b)
                for i in self.index_set:
                    for nb in (self.f(i, b), self.e(i, b)):
                        if nb is not None and nb not in seen:
                            seen.add(nb)
                            queue.append(nb)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def weight_multiplicities(self) -> dict[ClassicalWeight, int]:
        out: dict[ClassicalWeight, int] = {}
        for b in self.nodes:
            out[self.wt(b)] = out.get(self.wt(b), 0) + 1
        return dict(sorted(out.items()))

    # -- export ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "index_set": list(self.index_set),
            "nodes": [{"id": node_label(b), "wt": self.wt(b).to_json()["L"]} for b in self.nodes],
            "edges": [{"i": i, "from": node_label(b), "to": node_label(t)} for i, b, t in self.edges()],
        }

    def to_dot(self) -> str:
        lines = [f'digraph "{self.name or "crystal"}" {{']
        for b in self.nodes:
            lines.append(f'  "{node_label(b)}";')
        for i, b, t in self.edges():
            lines.append(f'  "{node_label(b)}" -> "{node_label(t)}" [label="{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def node_label(b) -> str:
    if isinstance(b, tuple) and b and all(isinstance(x, tuple) for x in b):
        return "(" + " x ".join(node_label(x) for x in b) + ")"
    if isinstance(b, tuple):
        return "[" + ",".join(str(x) for x in b) + "]"
    return str(b)


def crystal_from_json(datum: CartanDatum, data: dict, name: str = "") -> CrystalGraph:
    rank = datum.rank
    weights = {}
    for entry in data["nodes"]:
        coeffs = [0] * rank
        for k, v in entry["wt"].items():
            coeffs[int(k)] = int(v)
        weights[entry["id"]] = ClassicalWeight(tuple(coeffs))
    edges = {(int(e["i"]), e["from"]): e["to"] for e in data["edges"]}
    return CrystalGraph(datum, weights, edges, name)


def dumps(crystal: CrystalGraph) -> str:
    return json.dumps(crystal.to_json(), sort_keys=True)


# -- tensor products -----------------------------------------------------------

def tensor_f(factors: Sequence[CrystalGraph], i: int, b: tuple):
    stats = [(B.eps(i, x), B.phi(i, x)) for B, x in zip(factors, b)]
    _, _, pos, _ = signature(stats)
    if pos is None:
        return None
    out = list(b)
    out[pos] = factors[pos].f(i, b[pos])
    return tuple(out)


def tensor_e(factors: Sequence[CrystalGraph], i: int, b: tuple):
    stats = [(B.eps(i, x), B.phi(i, x)) for B, x in zip(factors, b)]
    _, _, _, pos = signature(stats)
    if pos is None:
        return None
    out = list(b)
    out[pos] = factors[pos].e(i, b[pos])
    return tuple(out)


def tensor(*factors: CrystalGraph) -> CrystalGraph:
    """B_1 (x) ... (x) B_m; f acts on b_1 in b_1 (x) b_2 iff phi(b_1) > eps(b_2)."""
    if not factors:
        raise ValueError("need at least one factor")
    datum = factors[0].datum
    if any(B.datum.index_set != datum.index_set for B in factors):
        raise ValueError("factors have different index sets")
    nodes: list[tuple] = [()]
    for B in factors:
        nodes = [b + (x,) for b in nodes for x in B.nodes]
    weights = {}
    edges = {}
    for b in nodes:
        w = datum.zero_classical()
        for B, x in zip(factors, b):
            w = w + B.wt(x)
        weights[b] = w
        for i in datum.index_set:
            t = tensor_f(factors, i, b)
            if t is not None:
                edges[(i, b)] = t
    name = " x ".join(B.name for B in factors)
    return CrystalGraph(datum, weights, edges, name)


def subcrystal(B: CrystalGraph, nodes: Iterable) -> CrystalGraph:
    keep = set(nodes)
    weights = {b: B.wt(b) for b in keep}
    edges = {(i, b): t for (i, b), t in B._f.items() if b in keep and t in keep}
    return CrystalGraph(B.datum, weights, edges, B.name)


def rebracket_left(b) -> tuple:
    """((b1, b2), b3) -> (b1, b2, b3)."""
    return tuple(b[0]) + (b[1],)


def rebracket_right(b) -> tuple:
    """(b1, (b2, b3)) -> (b1, b2, b3)."""
    return (b[0],) + tuple(b[1])


def is_morphism(B1: CrystalGraph, B2: CrystalGraph, mapping) -> bool:
    """True if mapping is a weight-preserving bijection commuting with all e_i and f_i."""
    image = {b: mapping(b) for b in B1.nodes}
    if sorted(image.values()) != list(B2.nodes):
        return False
    for b in B1.nodes:
        if B1.wt(b) != B2.wt(image[b]):
            return False
        for i in B1.index_set:
            t = B1.f(i, b)
            if (None if t is None else image[t]) != B2.f(i, image[b]):
                return False
            t = B1.e(i, b)
            if (None if t is None else image[t]) != B2.e(i, image[b]):
                return False
    return True


# -- Weyl group action -------------------------------------------------------------

def reflection_action(B: CrystalGraph, i: int, b):
    k = B.wt(b).pairing(i)
    target = B.f_power(i, b, k) if k >= 0 else B.e_power(i, b, -k)
    if target is None:
        raise ValueError(f"string through {b} is too short for colour {i}: crystal not regular")
    return target


def weyl_action(B: CrystalGraph, word: Sequence[int], b):
    """S_w b for w = s_{j1} ... s_{jl}; the last letter acts first."""
    for i in reversed(tuple(word)):
        b = reflection_action(B, i, b)
    return b


# -- extremal vectors ----------------------------------------------------------------

def extremal_orbit(B: CrystalGraph, b, bound: int | None = None):
    """The family {b_w} generated from b, or None if some vanishing condition fails."""
    seen = {b}
    queue = deque([b])
    while queue:
        cur = queue.popleft()
        w = B.wt(cur)
        for i in B.index_set:
            k = w.pairing(i)
            if k >= 0 and B.e(i, cur) is not None:
                return None
            if k <= 0 and B.f(i, cur) is not None:
                return None
            nxt = B.f_power(i, cur, k) if k >= 0 else B.e_power(i, cur, -k)
            if nxt is None:
                return None
            if nxt not in seen:
                seen.add(nxt)
                if bound is not None and len(seen) > bound:
                    raise RuntimeError(f"extremal orbit exceeds the bound {bound}")
                queue.append(nxt)
    return sorted(seen)


def is_extremal(B: CrystalGraph, b, bound: int | None = None) -> bool:
    return extremal_orbit(B, b, bound) is not None


def extremal_nodes(B: CrystalGraph) -> list:
    return [b for b in B.nodes if is_extremal(B, b)]


def extremal_weight_orbit(B: CrystalGraph) -> set[ClassicalWeight]:
    return {B.wt(b) for b in extremal_nodes(B)}


def is_classically_dominant(datum: CartanDatum, mu: ClassicalWeight) -> bool:
    return all(mu.pairing(j) >= 0 for j in datum.classical_nodes)


def dominant_representative(datum: CartanDatum, mu: ClassicalWeight) -> ClassicalWeight:
    """The W_0-dominant element of the orbit of mu (reflections s_j, j != i0)."""
    changed = True
    while changed:
        changed = False
        for j in datum.classical_nodes:
            if mu.pairing(j) < 0:
                mu = datum.reflect_classical(j, mu)
                changed = True
                break
    return mu


def simple_report(B: CrystalGraph) -> dict:
    ext = extremal_nodes(B)
    weights = sorted({B.wt(b) for b in ext})
    report = {"extremal_count": len(ext), "single_orbit": False, "multiplicity_one": False,
              "connected": B.is_connected(), "lambda": None}
    if not weights:
        return report
    lam = dominant_representative(B.datum, weights[0])
    orbit = set(classical_orbit(B.datum, lam))
    report["lambda"] = lam
    report["single_orbit"] = all(w in orbit for w in weights)
    report["multiplicity_one"] = sum(1 for b in B.nodes if B.wt(b) == lam) == 1
    return report


def is_simple(B: CrystalGraph) -> bool:
    """Extremal weights form one W_cl-orbit W_cl lambda, and B_lambda has one element."""
    report = simple_report(B)
    return report["single_orbit"] and report["multiplicity_one"]


def dominant_extremal_node(B: CrystalGraph):
    candidates = [b for b in extremal_nodes(B) if is_classically_dominant(B.datum, B.wt(b))]
    weights = {B.wt(b) for b in candidates}
    if len(candidates) != 1:
        raise ValueError(f"expected one dominant extremal node, found {len(candidates)} "
                         f"with weights {sorted(weights)}")
    return candidates[0]


def convex_hull_check(datum: CartanDatum, mu: ClassicalWeight, lam: ClassicalWeight) -> bool:
    """mu lies in the convex hull of W_cl lam (both level zero), via dominance order."""
    if datum.level(mu) or datum.level(lam):
        raise ValueError("convex hull test needs level-zero weights")
    diff = dominant_representative(datum, lam) - dominant_representative(datum, mu)
    coords = datum.classical_coords(diff)
    return all(c >= 0 for c in coords.values())


def dominated_weights(datum: CartanDatum, lam: ClassicalWeight) -> list[ClassicalWeight]:
    """All mu in lam + Q_cl lying in the convex hull of W_cl lam."""
    top = dominant_representative(datum, lam)
    found = {top}
    stack = [top]
    while stack:
        mu = stack.pop()
        for j in datum.classical_nodes:
            for nu in (mu - datum.cl_alpha(j), mu + datum.cl_alpha(j)):
                if nu not in found and convex_hull_check(datum, nu, top):
                    found.add(nu)
                    stack.append(nu)
    return sorted(found)


def classical_height(datum: CartanDatum, mu: ClassicalWeight) -> Fraction:
    return sum(datum.classical_coords(mu).values(), Fraction(0))
