"""Path model of the Fock space crystal over a perfect crystal, and its character oracle.

A path is vac_N (x) b_{N-1} (x) ... (x) b_r with b_n = b_n° for n >= N.  The
vacuum factor behaves like a highest weight element: eps = 0 and
phi_i = <h_i, lambda_N>.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cartan import CartanDatum, ClassicalWeight, Weight
from .crystal import CrystalGraph, signature
from .levelzero import affine_energy, energy, perfect_check


class GroundState:
    """b_r°, b_{r+1}°, ... with phi(b_n°) = eps(b_{n-1}°) and H(b_n° (x) b_{n-1}°) = 1.

    The weights satisfy lambda_n = lambda_{n+1} + wt(b_n°) and cl(lambda_n) = phi(b_n°),
    anchored at lambda_r = level * Lambda_{i0} unless ``top`` is given.
    """

    def __init__(self, B: CrystalGraph, level: int, r: int = 0, top: ClassicalWeight | None = None):
        report = perfect_check(B, level)
        if not report.ok:
            raise ValueError(f"{B.name} is not perfect of level {level}")
        self.B = B
        self.datum = B.datum
        self.level = level
        self.r = r
        self.H = energy(B)
        self._phi_inv = {w: b for b, w in report.phi_map.items()}
        self._eps = report.eps_map
        top = top if top is not None else self.datum.Lambda(self.datum.i0).cl().scale(level)
        if top not in self._phi_inv:
            raise ValueError(f"{top} is not a dominant weight of level {level}")
        self.lambda_r = top.lift(0)
        self._nodes = [(0, self._phi_inv[top])]
        self._lambdas = [self.lambda_r]
        self.period = self._find_period()

    def _extend(self, upto: int):
        while len(self._nodes) <= upto - self.r + 1:
            k_prev, prev = self._nodes[-1]
            nxt = self._phi_inv[self._eps[prev]]
            k = k_prev + 1 - self.H[(nxt, prev)]
            self._lambdas.append(self._lambdas[-1] - self.B.wt(prev).lift(k_prev))
            self._nodes.append((k, nxt))

    def _find_period(self) -> int:
        first = self._nodes[0][1]
        for p in range(1, len(self._phi_inv) + 1):
            self._extend(self.r + p)
            if self._nodes[p][1] == first:
                return p
        raise AssertionError("ground state is not periodic")

    def node(self, n: int):
        if n < self.r:
            raise IndexError("ground state is only built for n >= r")
        self._extend(n)
        return self._nodes[n - self.r]

    def weight(self, n: int) -> Weight:
        """lambda_n."""
        self._extend(n)
        return self._lambdas[n - self.r]

    def validate(self, span: int | None = None) -> list[str]:
        span = span or 3 * self.period
        problems = []
        for n in range(self.r, self.r + span):
            b = self.node(n)
            if self.B.phi_vector(b[1]) != self.weight(n).cl():
                problems.append(f"cl(lambda_{n}) != phi(b_{n})")
            if self.datum.level(self.weight(n)) != self.level:
                problems.append(f"level of lambda_{n}")
            if n > self.r:
                prev = self.node(n - 1)
                if self.B.phi_vector(b[1]) != self.B.eps_vector(prev[1]):
                    problems.append(f"phi(b_{n}) != eps(b_{n - 1})")
                if affine_energy(self.H, b, prev) != 1:
                    problems.append(f"H(b_{n} (x) b_{n - 1}) != 1")
        return problems


@dataclass(frozen=True)
class FockPath:
    """Sites b_r, ..., b_{N-1} (listed from r upward); ground state beyond."""
    r: int
    sites: tuple

    @property
    def top(self) -> int:
        return self.r + len(self.sites)


class FockSpace:
    def __init__(self, B: CrystalGraph, level: int, r: int = 0, buffer_periods: int = 3):
        self.ground = GroundState(B, level, r)
        self.B = B
        self.datum = B.datum
        self.r = r
        self.H = self.ground.H
        self.cap = buffer_periods * self.ground.period
        self._paths: dict[int, set] = {}

    def normalize(self, r: int, sites) -> FockPath:
        sites = list(sites)
        while sites and sites[-1] == self.ground.node(r + len(sites) - 1):
            sites.pop()
        return FockPath(r, tuple(sites))

    def vacuum(self) -> FockPath:
        return FockPath(self.r, ())

    def site(self, p: FockPath, n: int):
        return p.sites[n - p.r] if n < p.top else self.ground.node(n)

    def weight(self, p: FockPath) -> Weight:
        total = self.ground.weight(p.top)
        for n in range(p.r, p.top):
            n_deg, b = self.site(p, n)
            total = total + self.B.wt(b).lift(n_deg)
        return total

    def is_valid(self, p: FockPath) -> bool:
        top = p.top + self.ground.period
        return all(affine_energy(self.H, self.site(p, n + 1), self.site(p, n)) > 0
                   for n in range(p.r, top))

    def _apply(self, i: int, p: FockPath, raising: bool, extra: int):
        top = p.top + extra
        lam = self.ground.weight(top)
        positions = list(range(top - 1, p.r - 1, -1))
        stats = [(0, lam.pairing(i))]
        for n in positions:
            x = self.site(p, n)[1]
            stats.append((self.B.eps(i, x), self.B.phi(i, x)))
        _, _, fpos, epos = signature(stats)
        pos = epos if raising else fpos
        if pos is None:
            return None, False
        if pos == 0:
            return None, True
        n = positions[pos - 1]
        k, x = self.site(p, n)
        sites = [self.site(p, m) for m in range(p.r, top)]
        if raising:
            sites[n - p.r] = (k + (i == self.datum.i0), self.B.e(i, x))
        else:
            sites[n - p.r] = (k - (i == self.datum.i0), self.B.f(i, x))
        return self.normalize(p.r, sites), False

    def _operate(self, i: int, p: FockPath, raising: bool):
        extra = 1
        while extra <= self.cap:
            first, hit_vac = self._apply(i, p, raising, extra)
            if not hit_vac:
                second, hit_again = self._apply(i, p, raising, extra + 1)
                if hit_again or first != second:
                    raise AssertionError(f"operator unstable under buffer growth at {p}")
                if first is not None and not self.is_valid(first):
                    raise AssertionError(f"operator left the path set at {p}")
                return first
            extra += 1
        raise AssertionError("buffer cap reached: ground state signature did not stabilise")

    def f(self, i: int, p: FockPath):
        return self._operate(i, p, raising=False)

    def e(self, i: int, p: FockPath):
        return self._operate(i, p, raising=True)

    def depth(self, p: FockPath) -> int:
        """alpha_{i0}-coefficient of lambda_r - wt(p)."""
        coords = self.datum.root_coords(self.ground.weight(self.r) - self.weight(p))
        value = coords[self.datum.i0]
        if value.denominator != 1:
            raise AssertionError("non-integral depth")
        return int(value)

    # -- enumeration ---------------------------------------------------------------
    def paths_in_window(self, length: int, depth: int) -> set[FockPath]:
        """All paths deviating from the ground state only on [r, r + length) with depth <= depth.

        Pruning uses that every tail of a path is itself a path of
        nonnegative depth, so partial depths from the bottom never exceed
        the final depth.
        """
        r = self.r
        top = r + length
        ground_top = self.ground.node(top)
        h_max = max(self.H.values())
        ground = [self.ground.node(n) for n in range(r, top)]
        out = set()
        sites: list = []

        def rec(n: int, partial: int):
            if n == top:
                if affine_energy(self.H, ground_top, sites[-1]) > 0 if sites else True:
                    out.add(self.normalize(r, sites))
                return
            k_ground = ground[n - r][0]
            k_high = ground_top[0] + (top - n) * (h_max - 1)
            for x in self.B.nodes:
                k_low = k_ground - (depth - partial)
                if sites:
                    k_low = max(k_low, sites[-1][0] - self.H[(x, sites[-1][1])] + 1)
                for k in range(k_low, k_high + 1):
                    sites.append((k, x))
                    rec(n + 1, partial + k_ground - k)
                    sites.pop()

        rec(r, 0)
        return out

    def enumerate_paths(self, depth: int, max_periods: int | None = None) -> set[FockPath]:
        if depth not in self._paths:
            self._paths[depth] = self._stable_paths(depth, max_periods)
        return self._paths[depth]

    def _stable_paths(self, depth: int, max_periods: int | None) -> set[FockPath]:
        period = self.ground.period
        max_periods = max_periods or 4 * (depth + 2)
        length = period
        previous = self.paths_in_window(length, depth)
        stable = 0
        while stable < 2:
            length += period
            if length > max_periods * period:
                raise RuntimeError("path enumeration did not stabilise")
            current = self.paths_in_window(length, depth)
            stable = stable + 1 if current == previous else 0
            previous = current
        return previous

    def enumerate_graded(self, depth: int) -> dict[tuple[ClassicalWeight, int], int]:
        if depth > 10:
            raise ValueError("depth bound is 10")
        counts: Counter = Counter()
        for p in self.enumerate_paths(depth):
            counts[(self.weight(p).cl(), self.depth(p))] += 1
        return dict(sorted(counts.items()))

    def component_of_vacuum(self, depth: int) -> set[FockPath]:
        """Closure of the vacuum under f_i, truncated at the given depth."""
        seen = {self.vacuum()}
        stack = [self.vacuum()]
        while stack:
            p = stack.pop()
            for i in self.datum.index_set:
                q = self.f(i, p)
                if q is not None and q not in seen and self.depth(q) <= depth:
                    seen.add(q)
                    stack.append(q)
        return seen


# -- the character oracle --------------------------------------------------------------

@lru_cache(maxsize=None)
def partition_numbers(n: int) -> tuple[int, ...]:
    p = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            p[total] += p[total - part]
    return tuple(p)


def positive_roots_untwisted(datum: CartanDatum, depth: int) -> list[tuple[tuple[Fraction, ...], int]]:
    """Positive roots with alpha_{i0}-coefficient <= depth, as (root coordinates, multiplicity)."""
    if datum.twisted_even:
        raise ValueError("root multiplicities are implemented for untwisted types only")
    finite = []
    for beta in datum.classical_roots:
        coords = datum.classical_coords(beta)
        vec = [Fraction(0)] * datum.rank
        for j, c in coords.items():
            vec[j] = c
        finite.append(tuple(vec))
    delta = tuple(Fraction(a) for a in datum.marks)
    roots = []
    for k in range(depth + 1):
        for vec in finite:
            positive = all(c >= 0 for c in vec)
            if k == 0 and not positive:
                continue
            roots.append((tuple(v + k * d for v, d in zip(vec, delta)), 1))
        if k >= 1:
            roots.append((tuple(k * d for d in delta), datum.rank - 1))
    return roots


def freudenthal_multiplicities(datum: CartanDatum, lam: Weight, depth: int) -> dict[tuple, int]:
    """Weight multiplicities of V(lam) at lam - beta, beta in Q_+ with alpha_{i0}-coefficient <= depth.

    Keys are root-coordinate tuples of beta.
    """
    level = datum.level(lam)
    if level <= 0 or any(c < 0 for c in lam.lambda_coeffs):
        raise ValueError("need a dominant weight of positive level")
    rho = datum.rho()
    lam_rho = lam + rho

    def weight_of(beta):
        out = datum.zero_weight()
        for i, c in enumerate(beta):
            out = out + datum.alpha(i).scale(int(c))
        return out

    def gap(beta) -> Fraction:
        b = weight_of(beta)
        return 2 * datum.form(lam_rho, b) - datum.form(b, b)

    zero = tuple(Fraction(0) for _ in datum.index_set)
    region = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for beta in frontier:
            for i in datum.index_set:
                cand = tuple(c + (j == i) for j, c in enumerate(beta))
                if cand[datum.i0] > depth or cand in region:
                    continue
                if gap(cand) >= 0:
                    region.add(cand)
                    nxt.append(cand)
        frontier = nxt
    roots = positive_roots_untwisted(datum, depth)
    mult: dict[tuple, int] = {zero: 1}
    for beta in sorted(region, key=lambda b: (sum(b), b)):
        if beta == zero:
            continue
        mu = lam - weight_of(beta)
        total = Fraction(0)
        for gamma, gmult in roots:
            k = 1
            while True:
                higher = tuple(b - k * g for b, g in zip(beta, gamma))
                if any(c < 0 for c in higher):
                    break
                m = mult.get(higher, 0)
                if m:
                    total += gmult * m * datum.form(mu + weight_of(gamma).scale(k), weight_of(gamma))
                k += 1
        denom = gap(beta)
        if denom == 0:
            if total != 0:
                raise AssertionError(f"Freudenthal recursion inconsistent at {beta}")
            value = Fraction(0)
        else:
            value = 2 * total / denom
        if value.denominator != 1 or value < 0:
            raise AssertionError(f"non-integral multiplicity {value} at {beta}")
        if value:
            mult[beta] = int(value)
    return mult


def character_oracle(datum: CartanDatum, lam: Weight, depth: int) -> dict[tuple[ClassicalWeight, int], int]:
    """Boson Fock space times V(lam): keys (classical weight, alpha_{i0}-depth)."""
    mults = freudenthal_multiplicities(datum, lam, depth)
    p = partition_numbers(depth)
    out: dict = defaultdict(int)
    for beta, m in mults.items():
        weight = lam.cl()
        for i, c in enumerate(beta):
            weight = weight - datum.cl_alpha(i).scale(int(c))
        base = int(beta[datum.i0])
        for k in range(depth - base + 1):
            out[(weight, base + k)] += p[k] * m
    return dict(sorted(out.items()))
