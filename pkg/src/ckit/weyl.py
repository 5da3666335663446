"""Affine Weyl groups acting on weights.

Elements are stored as exact matrices on the coordinate vector
(Lambda_0, ..., Lambda_n, delta).  A word (j1, ..., jl) denotes the product
s_{j1} ... s_{jl}, so its last letter acts first.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .cartan import CartanDatum, ClassicalWeight, Weight

Matrix = tuple[tuple[Fraction, ...], ...]


def _identity(size: int) -> Matrix:
    return tuple(tuple(Fraction(int(r == c)) for c in range(size)) for r in range(size))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
                 for row in a)


def _vector(lam: Weight) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in lam.lambda_coeffs) + (lam.delta_coeff,)


def _from_vector(vec) -> Weight:
    *coeffs, delta = vec
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("Weyl action left the weight lattice")
    return Weight(tuple(int(c) for c in coeffs), delta)


@dataclass(frozen=True, eq=False)
class WeylElement:
    datum: CartanDatum
    action: Matrix
    _word_cache: list = field(default_factory=list, repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.datum, _matmul(self.action, other.action))

    def act(self, lam):
        if isinstance(lam, ClassicalWeight):
            return self.act(lam.lift()).cl()
        vec = _vector(lam)
        return _from_vector(tuple(sum((m * v for m, v in zip(row, vec)), Fraction(0))
                                  for row in self.action))

    def inverse(self) -> "WeylElement":
        return from_word(self.datum, tuple(reversed(reduced_word(self))))

    def is_identity(self) -> bool:
        return self.action == _identity(len(self.action))

    @property
    def word(self) -> tuple[int, ...]:
        return reduced_word(self)

    @property
    def length(self) -> int:
        return len(reduced_word(self))


def identity(datum: CartanDatum) -> WeylElement:
    return WeylElement(datum, _identity(datum.rank + 1))


@lru_cache(maxsize=None)
def _reflection_matrix(datum: CartanDatum, i: int) -> Matrix:
    size = datum.rank + 1
    alpha = _vector(datum.alpha(i))
    rows = []
    for r in range(size):
        row = [Fraction(int(r == c)) for c in range(size)]
        row[i] -= alpha[r]
        rows.append(tuple(row))
    return tuple(rows)


def simple_reflection(datum: CartanDatum, i: int) -> WeylElement:
    return WeylElement(datum, _reflection_matrix(datum, i))


def reflect(datum: CartanDatum, i: int, lam: Weight) -> Weight:
    k = lam.pairing(i)
    return lam if k == 0 else lam - datum.alpha(i).scale(k)


def from_word(datum: CartanDatum, word) -> WeylElement:
    out = identity(datum)
    for i in word:
        out = out * simple_reflection(datum, i)
    return out


def act_word(datum: CartanDatum, word, lam: Weight) -> Weight:
    for i in reversed(tuple(word)):
        lam = reflect(datum, i, lam)
    return lam


# -- roots ---------------------------------------------------------------------

def classical_part_sign(datum: CartanDatum, coords) -> int:
    """+1, -1 or 0 according to the sign of the classical part of a root."""
    n = coords[datum.i0] / datum.marks[datum.i0]
    bar = [coords[j] - n * datum.marks[j] for j in datum.classical_nodes]
    if all(c == 0 for c in bar):
        return 0
    if all(c >= 0 for c in bar):
        return 1
    if all(c <= 0 for c in bar):
        return -1
    raise ValueError("not a root: mixed signs in the classical part")


def is_negative_root(datum: CartanDatum, beta: Weight) -> bool:
    """A real root beta-bar + n delta is negative iff n < 0, or n = 0 and beta-bar < 0."""
    coords = datum.root_coords(beta)
    n = coords[datum.i0] / datum.marks[datum.i0]
    if n != 0:
        return n < 0
    return classical_part_sign(datum, coords) < 0


def reduced_word(w: WeylElement) -> tuple[int, ...]:
    if w._word_cache:
        return w._word_cache[0]
    datum = w.datum
    letters = []
    current = w
    while not current.is_identity():
        for i in datum.index_set:
            if is_negative_root(datum, current.act(datum.alpha(i))):
                letters.append(i)
                current = current * simple_reflection(datum, i)
                break
        else:  # pragma: no cover - a non-identity element always has a descent
            raise AssertionError("no descent found for a non-identity element")
    word = tuple(reversed(letters))
    w._word_cache.append(word)
    return word


def length(w: WeylElement) -> int:
    return len(reduced_word(w))


# -- translations ---------------------------------------------------------------

@dataclass(frozen=True)
class TranslationVector:
    """An element of Q-tilde, stored by integer coordinates over cl(alpha_j), j != i0."""
    coords: tuple[int, ...]

    def weight(self, datum: CartanDatum) -> ClassicalWeight:
        return datum.from_classical_coords(dict(zip(datum.classical_nodes, self.coords)))

    @classmethod
    def from_weight(cls, datum: CartanDatum, xi: ClassicalWeight) -> "TranslationVector":
        coords = datum.classical_coords(xi)
        if any(c.denominator != 1 for c in coords.values()):
            raise ValueError(f"{xi} is not in the classical root lattice")
        return cls(tuple(int(coords[j]) for j in datum.classical_nodes))


def _as_classical(datum: CartanDatum, xi) -> ClassicalWeight:
    if isinstance(xi, TranslationVector):
        return xi.weight(datum)
    if isinstance(xi, Weight):
        return xi.cl()
    return xi


@lru_cache(maxsize=None)
def _tilde_inverse(datum: CartanDatum):
    nodes = datum.classical_nodes
    basis = datum.tilde_basis()
    cols = []
    for j in nodes:
        coords = datum.classical_coords(basis[j])
        cols.append([sympy.Rational(coords[k].numerator, coords[k].denominator) for k in nodes])
    return sympy.Matrix(cols).T.inv()


def tilde_coords(datum: CartanDatum, xi) -> tuple[Fraction, ...]:
    """Coordinates of xi over the basis alpha~_j (j != i0) of Q-tilde."""
    xi = _as_classical(datum, xi)
    coords = datum.classical_coords(xi)
    vec = sympy.Matrix([sympy.Rational(coords[k].numerator, coords[k].denominator)
                        for k in datum.classical_nodes])
    sol = _tilde_inverse(datum) * vec
    return tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol)


def in_q_tilde(datum: CartanDatum, xi) -> bool:
    xi = _as_classical(datum, xi)
    if datum.level(xi) != 0:
        return False
    return all(c.denominator == 1 for c in tilde_coords(datum, xi))


def q_tilde_element(datum: CartanDatum, coeffs) -> ClassicalWeight:
    """The element sum_j coeffs[j] alpha~_j, with j running over the classical nodes."""
    basis = datum.tilde_basis()
    out = datum.zero_classical()
    for j, c in zip(datum.classical_nodes, coeffs):
        out = out + basis[j].scale(int(c))
    return out


def translation(datum: CartanDatum, xi) -> WeylElement:
    """t(xi): lambda -> lambda + (delta,lambda) xi - ((xi,lambda) + (xi,xi)/2 (delta,lambda)) delta."""
    xi = _as_classical(datum, xi)
    if not in_q_tilde(datum, xi):
        raise ValueError(f"{xi} is not in Q-tilde")
    lifted = xi.lift()
    norm = datum.form(lifted, lifted)
    size = datum.rank + 1
    columns = []
    for j in range(datum.rank):
        lam = datum.Lambda(j)
        lev = datum.level(lam)
        image = lam + lifted.scale(lev)
        image = Weight(image.lambda_coeffs,
                       image.delta_coeff - datum.form(lam, lifted) - norm / 2 * lev)
        columns.append(_vector(image))
    columns.append(_vector(datum.delta))
    action = tuple(tuple(columns[c][r] for c in range(size)) for r in range(size))
    return WeylElement(datum, action)


def translation_length_formulas(datum: CartanDatum, xi) -> tuple[Fraction, Fraction, Fraction]:
    """The three expressions for l(t(xi)) as sums over classical roots."""
    xi = _as_classical(datum, xi)
    first = Fraction(0)
    second = Fraction(0)
    for beta in datum.classical_roots:
        value = datum.form(beta, xi) / datum.c_alpha(beta)
        first += max(value, Fraction(0))
        second += abs(value)
    third = Fraction(0)
    for beta in datum.tilde_roots:
        coroot_pairing = 2 * datum.form(beta, xi) / datum.form(beta, beta)
        third += max(coroot_pairing, Fraction(0))
    return first, second / 2, third


def translation_length(datum: CartanDatum, xi) -> int:
    first, second, third = translation_length_formulas(datum, xi)
    if not first == second == third:
        raise AssertionError(f"length formulas disagree: {first}, {second}, {third}")
    if first.denominator != 1:
        raise AssertionError(f"non-integral translation length {first}")
    return int(first)


class CayleyBall:
    """Breadth-first ball in the Cayley graph of W, keyed by the orbit of rho.

    The stabiliser of a regular dominant weight of positive level is
    trivial, and the classical projection of its orbit is still injective,
    so w is identified with cl(w rho).
    """

    def __init__(self, datum: CartanDatum, radius: int):
        self.datum = datum
        self.radius = radius
        start = tuple([1] * datum.rank)
        columns = [tuple(datum.cartan_matrix[r][i] for r in datum.index_set) for i in datum.index_set]
        dist = {start: 0}
        frontier = [start]
        for step in range(1, radius + 1):
            nxt = []
            for vec in frontier:
                for i, col in enumerate(columns):
                    k = vec[i]
                    image = tuple(v - k * c for v, c in zip(vec, col))
                    if image not in dist:
                        dist[image] = step
                        nxt.append(image)
            frontier = nxt
        self._dist = dist

    def __len__(self):
        return len(self._dist)

    def length(self, w: WeylElement) -> int | None:
        """Length of w if it lies in the ball, else None."""
        rho = Weight(tuple([1] * self.datum.rank))
        return self._dist.get(w.act(rho).lambda_coeffs)


def shortest_words(datum: CartanDatum, target: WeylElement, max_length: int) -> list[tuple[int, ...]]:
    """All words of minimal length at most max_length evaluating to target (exhaustive search)."""
    frontier = [((), identity(datum))]
    for ell in range(max_length + 1):
        hits = [word for word, elem in frontier if elem == target]
        if hits:
            return sorted(hits)
        frontier = [(word + (i,), elem * simple_reflection(datum, i))
                    for word, elem in frontier for i in datum.index_set
                    if not word or word[-1] != i]
    return []


# -- semidirect decomposition ------------------------------------------------------

def decompose(w: WeylElement) -> tuple[WeylElement, ClassicalWeight]:
    """Write w = t(xi) w0 with w0 in the finite Weyl group W_0."""
    datum = w.datum
    letters = []
    current = w
    while True:
        for j in datum.classical_nodes:
            image = current.act(datum.alpha(j))
            coords = datum.root_coords(image)
            if classical_part_sign(datum, coords) < 0:
                letters.append(j)
                current = current * simple_reflection(datum, j)
                break
        else:
            break
    finite = from_word(datum, tuple(reversed(letters)))
    translation_part = current
    base = datum.Lambda(datum.zero_check)
    moved = translation_part.act(base) - base
    lev = datum.level(base)
    xi = ClassicalWeight(tuple(c // lev for c in moved.lambda_coeffs))
    if xi.scale(lev) != moved.cl():
        raise AssertionError("translation part is not divisible by the level")
    if translation(datum, xi) * finite != w:
        raise AssertionError("recomposition t(xi) w0 failed")
    return finite, xi


def cl0_action(w: WeylElement) -> tuple[tuple[Fraction, ...], ...]:
    """The induced linear map on P_cl, as a matrix on Lambda-coefficients."""
    size = w.datum.rank
    return tuple(row[:size] for row in w.action[:size])


# -- dominance --------------------------------------------------------------------

def is_w_dominant(datum: CartanDatum, lam, w) -> bool:
    """<h_{i_k}, s_{i_{k-1}} ... s_{i_1} lam> >= 0 along a reduced word of w."""
    return _check_dominance(datum, lam, w, strict=False)


def is_regularly_w_dominant(datum: CartanDatum, lam, w) -> bool:
    return _check_dominance(datum, lam, w, strict=True)


def _check_dominance(datum: CartanDatum, lam, w, strict: bool) -> bool:
    word = reduced_word(w) if isinstance(w, WeylElement) else tuple(w)
    mu = lam.lift() if isinstance(lam, ClassicalWeight) else lam
    for i in reversed(word):
        k = mu.pairing(i)
        if k < 0 or (strict and k == 0):
            return False
        mu = reflect(datum, i, mu)
    return True


def same_chamber_strict(datum: CartanDatum, lam, mu) -> bool:
    """For every classical root alpha, (alpha, mu) > 0 implies (alpha, lam) > 0."""
    return all(datum.form(beta, lam) > 0 for beta in datum.classical_roots
               if datum.form(beta, mu) > 0)


def same_chamber(datum: CartanDatum, lam, mu) -> bool:
    return all(datum.form(beta, lam) >= 0 for beta in datum.classical_roots
               if datum.form(beta, mu) > 0)


def finite_weyl_elements(datum: CartanDatum) -> list[WeylElement]:
    """All of W_0 by breadth-first search on the generators s_j, j != i0."""
    seen = {identity(datum)}
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for j in datum.classical_nodes:
            v = w * simple_reflection(datum, j)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return sorted(seen, key=lambda e: (length(e), reduced_word(e)))


def classical_orbit(datum: CartanDatum, mu: ClassicalWeight) -> list[ClassicalWeight]:
    seen = {mu}
    stack = [mu]
    while stack:
        nu = stack.pop()
        for i in datum.index_set:
            image = datum.reflect_classical(i, nu)
            if image not in seen:
                seen.add(image)
                stack.append(image)
    return sorted(seen)
