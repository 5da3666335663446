"""Star crystals: B(infinity), B(-infinity), T_lambda and B(U~) = B(inf) (x) T_lambda (x) B(-inf).

Weights are handled through their pairings with the coroots, so a weight is
a tuple indexed by the index set.  Operators return None when they vanish.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from .crystal import signature


class StarCrystal:
    """Interface for a crystal carrying both the ordinary and the star structure."""

    index_set: tuple[int, ...] = ()
    cartan: tuple[tuple[int, ...], ...] = ()  # cartan[j][i] = <h_j, alpha_i>

    def wt(self, b) -> tuple[int, ...]: ...
    def eps(self, i, b) -> int: ...
    def phi(self, i, b) -> int: ...
    def eps_star(self, i, b) -> int: ...
    def phi_star(self, i, b) -> int: ...
    def e(self, i, b): ...
    def f(self, i, b): ...
    def e_star(self, i, b): ...
    def f_star(self, i, b): ...
    def star(self, b): ...

    def alpha(self, i) -> tuple[int, ...]:
        return tuple(self.cartan[j][i] for j in range(len(self.index_set)))


class Rank1Infinity(StarCrystal):
    """B(infinity) for sl_2: n stands for f^n u_infinity; the star is the identity."""

    index_set = (0,)
    cartan = ((2,),)

    def wt(self, n):
        return (-2 * n,)

    def eps(self, i, n):
        return n

    def phi(self, i, n):
        return -n

    eps_star = eps
    phi_star = phi

    def e(self, i, n):
        return n - 1 if n > 0 else None

    def f(self, i, n):
        return n + 1

    e_star = e
    f_star = f

    def star(self, n):
        return n

    highest = 0


class Rank1MinusInfinity(StarCrystal):
    """B(-infinity) for sl_2: m stands for e^m u_{-infinity}; the star is the identity."""

    index_set = (0,)
    cartan = ((2,),)

    def wt(self, m):
        return (2 * m,)

    def eps(self, i, m):
        return -m

    def phi(self, i, m):
        return m

    eps_star = eps
    phi_star = phi

    def e(self, i, m):
        return m + 1

    def f(self, i, m):
        return m - 1 if m > 0 else None

    e_star = e
    f_star = f

    def star(self, m):
        return m

    lowest = 0


@dataclass(frozen=True, order=True)
class BTildeElement:
    b1: object
    lam: tuple[int, ...]
    b2: object


def _add(a, b, k=1):
    return tuple(x + k * y for x, y in zip(a, b))


class BTilde:
    """The crystal B(U~) with every operator given by closed formulas in the components."""

    def __init__(self, plus: StarCrystal, minus: StarCrystal):
        self.plus = plus
        self.minus = minus
        self.index_set = plus.index_set

    def element(self, b1, lam, b2) -> BTildeElement:
        return BTildeElement(b1, tuple(lam), b2)

    def u(self, lam) -> BTildeElement:
        return BTildeElement(self.plus.highest, tuple(lam), self.minus.lowest)

    # -- statistics ------------------------------------------------------------
    def wt(self, b: BTildeElement):
        return _add(_add(self.plus.wt(b.b1), b.lam), self.minus.wt(b.b2))

    def star(self, b: BTildeElement) -> BTildeElement:
        lam = tuple(-x for x in _add(_add(b.lam, self.plus.wt(b.b1)), self.minus.wt(b.b2)))
        return BTildeElement(self.plus.star(b.b1), lam, self.minus.star(b.b2))

    def wt_star(self, b: BTildeElement):
        return self.wt(self.star(b))

    def eps(self, i, b):
        wt1 = self.plus.wt(b.b1)[i]
        return max(self.plus.eps(i, b.b1), self.minus.eps(i, b.b2) - b.lam[i] - wt1)

    def phi(self, i, b):
        wt2 = self.minus.wt(b.b2)[i]
        return max(self.plus.phi(i, b.b1) + b.lam[i] + wt2, self.minus.phi(i, b.b2))

    def eps_star(self, i, b):
        return max(self.plus.eps_star(i, b.b1), self.minus.phi_star(i, b.b2) + b.lam[i])

    def phi_star(self, i, b):
        return max(self.plus.eps_star(i, b.b1) - b.lam[i], self.minus.phi_star(i, b.b2))

    def stats(self, b) -> dict:
        return {
            "wt": self.wt(b),
            "wt_star": self.wt_star(b),
            "eps": tuple(self.eps(i, b) for i in self.index_set),
            "phi": tuple(self.phi(i, b) for i in self.index_set),
            "eps_star": tuple(self.eps_star(i, b) for i in self.index_set),
            "phi_star": tuple(self.phi_star(i, b) for i in self.index_set),
        }

    # -- single steps ------------------------------------------------------------
    def e(self, i, b):
        if self.plus.phi(i, b.b1) >= self.minus.eps(i, b.b2) - b.lam[i]:
            x = self.plus.e(i, b.b1)
            return None if x is None else BTildeElement(x, b.lam, b.b2)
        y = self.minus.e(i, b.b2)
        return None if y is None else BTildeElement(b.b1, b.lam, y)

    def f(self, i, b):
        if self.plus.phi(i, b.b1) > self.minus.eps(i, b.b2) - b.lam[i]:
            x = self.plus.f(i, b.b1)
            return None if x is None else BTildeElement(x, b.lam, b.b2)
        y = self.minus.f(i, b.b2)
        return None if y is None else BTildeElement(b.b1, b.lam, y)

    def e_star(self, i, b):
        lam = _add(b.lam, self.plus.alpha(i), -1)
        if self.plus.eps_star(i, b.b1) >= self.minus.phi_star(i, b.b2) + b.lam[i]:
            x = self.plus.e_star(i, b.b1)
            return None if x is None else BTildeElement(x, lam, b.b2)
        y = self.minus.e_star(i, b.b2)
        return None if y is None else BTildeElement(b.b1, lam, y)

    def f_star(self, i, b):
        lam = _add(b.lam, self.plus.alpha(i))
        if self.plus.eps_star(i, b.b1) > self.minus.phi_star(i, b.b2) + b.lam[i]:
            x = self.plus.f_star(i, b.b1)
            return None if x is None else BTildeElement(x, lam, b.b2)
        y = self.minus.f_star(i, b.b2)
        return None if y is None else BTildeElement(b.b1, lam, y)

    # -- closed-form maximal powers -------------------------------------------------
    def e_max(self, i, b):
        c = max(self.minus.eps(i, b.b2) - self.plus.phi(i, b.b1) - b.lam[i], 0)
        return BTildeElement(_power(self.plus.e, i, b.b1, None), b.lam,
                             _power(self.minus.e, i, b.b2, c))

    def f_max(self, i, b):
        c = max(self.plus.phi(i, b.b1) - self.minus.eps(i, b.b2) + b.lam[i], 0)
        return BTildeElement(_power(self.plus.f, i, b.b1, c), b.lam,
                             _power(self.minus.f, i, b.b2, None))

    def estar_max(self, i, b):
        es1 = self.plus.eps_star(i, b.b1)
        ps2 = self.minus.phi_star(i, b.b2)
        lam_i = b.lam[i]
        alpha = self.plus.alpha(i)
        if es1 - ps2 - lam_i <= 0:
            return BTildeElement(_power(self.plus.e_star, i, b.b1, None),
                                 _add(b.lam, alpha, -(ps2 + lam_i)),
                                 _power(self.minus.e_star, i, b.b2, ps2 - es1 + lam_i))
        return BTildeElement(_power(self.plus.e_star, i, b.b1, None),
                             _add(b.lam, alpha, -es1), b.b2)

    def fstar_max(self, i, b):
        es1 = self.plus.eps_star(i, b.b1)
        ps2 = self.minus.phi_star(i, b.b2)
        lam_i = b.lam[i]
        alpha = self.plus.alpha(i)
        if es1 - ps2 - lam_i >= 0:
            return BTildeElement(_power(self.plus.f_star, i, b.b1, es1 - ps2 - lam_i),
                                 _add(b.lam, alpha, es1 - lam_i),
                                 _power(self.minus.f_star, i, b.b2, None))
        return BTildeElement(b.b1, _add(b.lam, alpha, ps2),
                             _power(self.minus.f_star, i, b.b2, None))

    # -- iterated versions (used as the oracle for the closed forms) -------------------
    def iterate(self, op, i, b, times=None, limit=10_000):
        """Apply op(i, .) the given number of times, or until it vanishes."""
        count = 0
        while times is None or count < times:
            nxt = op(i, b)
            if nxt is None:
                if times is not None:
                    return None
                return b
            b = nxt
            count += 1
            if count > limit:
                raise RuntimeError("operator string did not terminate")
        return b

    def e_max_iterated(self, i, b):
        return self.iterate(self.e, i, b, self.eps(i, b))

    def f_max_iterated(self, i, b):
        return self.iterate(self.f, i, b, self.phi(i, b))

    def estar_max_iterated(self, i, b):
        return self.iterate(self.e_star, i, b, self.eps_star(i, b))

    def fstar_max_iterated(self, i, b):
        return self.iterate(self.f_star, i, b, self.phi_star(i, b))

    # -- Weyl group actions ------------------------------------------------------------
    def reflection(self, i, b):
        """S_i from the crystal strings: f^k or e^{-k} with k = <h_i, wt b>."""
        k = self.wt(b)[i]
        out = self.iterate(self.f, i, b, k) if k >= 0 else self.iterate(self.e, i, b, -k)
        if out is None:
            raise ValueError("string too short: element is not in a regular part")
        return out

    def reflection_star(self, i, b):
        return self.star(self.reflection(i, self.star(b)))

    def S(self, i, b):
        """S_i b by the closed display; b = b1 (x) t_lambda (x) u_{-inf} with eps_i(b) or phi_i(b) zero."""
        if b.b2 != self.minus.lowest:
            raise ValueError("the display needs b2 = u_{-infinity}")
        wt1 = self.plus.wt(b.b1)[i]
        if self.eps(i, b) == 0:
            return BTildeElement(_power(self.plus.f, i, b.b1, wt1 + b.lam[i]), b.lam, b.b2)
        if self.phi(i, b) == 0:
            return BTildeElement(_power(self.plus.e, i, b.b1, None), b.lam,
                                 _power(self.minus.e, i, b.b2, -self.plus.phi(i, b.b1) - b.lam[i]))
        raise ValueError("side condition eps_i(b) = 0 or phi_i(b) = 0 fails")

    def S_star(self, i, b):
        """S*_i b by the closed display; b = b1 (x) t_lambda (x) u_{-inf} with eps*_i(b) or phi*_i(b) zero."""
        if b.b2 != self.minus.lowest:
            raise ValueError("the display needs b2 = u_{-infinity}")
        lam_i = b.lam[i]
        reflected = _add(b.lam, self.plus.alpha(i), -lam_i)
        if self.eps_star(i, b) == 0:
            return BTildeElement(_power(self.plus.f_star, i, b.b1, -lam_i), reflected, b.b2)
        if self.phi_star(i, b) == 0:
            return BTildeElement(_power(self.plus.e_star, i, b.b1, None), reflected,
                                 _power(self.minus.e_star, i, b.b2,
                                        lam_i - self.plus.eps_star(i, b.b1)))
        raise ValueError("side condition eps*_i(b) = 0 or phi*_i(b) = 0 fails")

    # -- extremality and B(lambda) --------------------------------------------------------
    def extremal_orbit(self, b, bound: int) -> list | None:
        """The Weyl orbit of b if b is extremal, else None."""
        seen = {b}
        queue = deque([b])
        while queue:
            cur = queue.popleft()
            w = self.wt(cur)
            for i in self.index_set:
                k = w[i]
                if k >= 0 and self.e(i, cur) is not None:
                    return None
                if k <= 0 and self.f(i, cur) is not None:
                    return None
                nxt = self.iterate(self.f, i, cur, k) if k >= 0 else self.iterate(self.e, i, cur, -k)
                if nxt is None:
                    return None
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > bound:
                        raise RuntimeError(f"orbit exceeds the bound {bound}")
                    queue.append(nxt)
        return sorted(seen)

    def is_extremal(self, b, bound: int) -> bool:
        return self.extremal_orbit(b, bound) is not None

    def eps_star_bounds_hold(self, b) -> bool:
        return all(self.plus.eps_star(i, b.b1) <= max(b.lam[i], 0)
                   and self.minus.phi_star(i, b.b2) <= max(-b.lam[i], 0)
                   for i in self.index_set)

    def in_B_lambda(self, b, orbit_bound: int) -> bool:
        """b lies in B(lambda) iff b* is extremal (of weight -lambda)."""
        if not self.eps_star_bounds_hold(b):
            return False
        return self.is_extremal(self.star(b), orbit_bound)


def _power(op, i, x, times):
    """op^times(x); times=None means the maximal power. Components never run out here."""
    if times is None:
        while (nxt := op(i, x)) is not None:
            x = nxt
        return x
    if times < 0:
        raise ValueError("negative power")
    for _ in range(times):
        x = op(i, x)
        if x is None:
            raise ValueError("component operator vanished inside a closed formula")
    return x


def rank1() -> BTilde:
    return BTilde(Rank1Infinity(), Rank1MinusInfinity())


def rank1_elements(depth: int, lam_range: int):
    for n1, k, m2 in product(range(depth + 1), range(-lam_range, lam_range + 1), range(depth + 1)):
        yield BTildeElement(n1, (k,), m2)


# -- truncated B(infinity) in type A and Schubert subsets ---------------------------------

class TypeAInfinity:
    """B(infinity) for sl_{n+1} up to depth D, as the component of the highest weight
    element of B(varpi_1)^{(x)D} (x) ... (x) B(varpi_n)^{(x)D}.

    Columns are increasing tuples of letters 1..n+1; the crystal agrees with
    B(infinity) on elements of depth at most D.  Star operators are not provided.
    """

    def __init__(self, n: int, depth: int):
        self.n = n
        self.depth = depth
        self.index_set = tuple(range(1, n + 1))
        self.columns = [tuple(range(1, k + 1)) for k in range(1, n + 1) for _ in range(depth)]
        self.highest = tuple(self.columns)

    @staticmethod
    def _col_stats(i, col):
        return (int(i + 1 in col and i not in col), int(i in col and i + 1 not in col))

    def _apply(self, i, b, raising):
        stats = [self._col_stats(i, c) for c in b]
        _, _, fpos, epos = signature(stats)
        pos = epos if raising else fpos
        if pos is None:
            return None
        col = list(b[pos])
        if raising:
            col[col.index(i + 1)] = i
        else:
            col[col.index(i)] = i + 1
        out = list(b)
        out[pos] = tuple(sorted(col))
        return tuple(out)

    def height(self, b) -> int:
        return sum(sum(c) - sum(range(1, len(c) + 1)) for c in b)

    def f(self, i, b):
        if self.height(b) >= self.depth:
            raise ValueError("depth exceeded")
        return self._apply(i, b, False)

    def e(self, i, b):
        return self._apply(i, b, True)

    def eps(self, i, b):
        return signature([self._col_stats(i, c) for c in b])[0]

    def e_max(self, i, b):
        while (nxt := self.e(i, b)) is not None:
            b = nxt
        return b

    def all_elements(self) -> set:
        seen = {self.highest}
        frontier = [self.highest]
        for _ in range(self.depth):
            nxt = []
            for b in frontier:
                for i in self.index_set:
                    c = self._apply(i, b, False)
                    if c is not None and c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return seen


# finite Weyl group of type A_n as permutations of 1..n+1

def perm_from_word(n: int, word: Sequence[int]) -> tuple[int, ...]:
    """Permutation of s_{j1} ... s_{jl} acting on positions."""
    perm = list(range(1, n + 2))
    for i in word:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def perm_length(perm) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def perm_reduced_word(perm) -> tuple[int, ...]:
    perm = list(perm)
    word = []
    while True:
        for i in range(len(perm) - 1):
            if perm[i] > perm[i + 1]:
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                word.append(i + 1)
                break
        else:
            break
    return tuple(reversed(word))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    from itertools import permutations
    return tuple(sorted(permutations(range(1, n + 2)), key=lambda p: (perm_length(p), p)))


def bruhat_leq(n: int, v, w) -> bool:
    """v <= w iff v is the product of a subword of a reduced word of w."""
    word = perm_reduced_word(w)
    products = {tuple(range(1, n + 2))}
    for i in word:
        products |= {_right_mult(p, i) for p in products}
    return tuple(v) in products


def _right_mult(perm, i):
    p = list(perm)
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def schubert_enumerate(model: TypeAInfinity, word: Sequence[int], depth: int) -> set:
    """f_{j1}^{a1} ... f_{jl}^{al} u_infinity with a1 + ... + al <= depth."""
    if depth > model.depth:
        raise ValueError("depth exceeds the truncation of the model")
    current = {(model.highest, 0)}
    for i in reversed(tuple(word)):
        nxt = set()
        for b, used in current:
            x, k = b, used
            nxt.add((x, k))
            while k < depth:
                x = model._apply(i, x, False)
                k += 1
                nxt.add((x, k))
        current = nxt
    return {b for b, _ in current}


def schubert_member(model: TypeAInfinity, b, word: Sequence[int], depth: int) -> bool:
    return b in schubert_enumerate(model, word, depth)


def schubert_member_by_peeling(model: TypeAInfinity, b, word: Sequence[int]) -> bool:
    """Cross-check: e^max along j1, j2, ... must reach u_infinity."""
    for i in word:
        b = model.e_max(i, b)
    return b == model.highest
