"""Affine Cartan data, the weight lattice and the pieces of the invariant form.

Weights are stored in the basis {Lambda_i} plus a rational coefficient of
delta.  The simple root alpha_i is the weight whose Lambda-coefficients are
the i-th column of the Cartan matrix, with delta-coefficient 1/a_{i0} when
i = i0 and 0 otherwise, so that delta = sum_i a_i alpha_i holds in
coordinates.  Dropping the delta-coefficient gives the classical projection.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import sympy


@dataclass(frozen=True)
class Weight:
    lambda_coeffs: tuple[int, ...]
    delta_coeff: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lambda_coeffs", tuple(int(x) for x in self.lambda_coeffs))
        object.__setattr__(self, "delta_coeff", Fraction(self.delta_coeff))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.lambda_coeffs, other.lambda_coeffs)),
                      self.delta_coeff + other.delta_coeff)

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.lambda_coeffs), -self.delta_coeff)

    def scale(self, k: int) -> "Weight":
        return Weight(tuple(k * a for a in self.lambda_coeffs), k * self.delta_coeff)

    __rmul__ = lambda self, k: self.scale(k)

    def pairing(self, i: int) -> int:
        return self.lambda_coeffs[i]

    def cl(self) -> "ClassicalWeight":
        return ClassicalWeight(self.lambda_coeffs)

    def to_json(self) -> dict:
        return {"L": {str(i): m for i, m in enumerate(self.lambda_coeffs) if m},
                "delta": str(self.delta_coeff)}

    @classmethod
    def from_json(cls, data: dict, rank: int) -> "Weight":
        coeffs = [0] * rank
        for key, value in data.get("L", {}).items():
            coeffs[int(key)] = int(value)
        return cls(tuple(coeffs), Fraction(str(data.get("delta", "0"))))

    def __str__(self):
        parts = [f"{m}*L{i}" for i, m in enumerate(self.lambda_coeffs) if m]
        if self.delta_coeff:
            parts.append(f"{self.delta_coeff}*d")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, order=True)
class ClassicalWeight:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))

    def __add__(self, other: "ClassicalWeight") -> "ClassicalWeight":
        return ClassicalWeight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ClassicalWeight") -> "ClassicalWeight":
        return ClassicalWeight(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ClassicalWeight":
        return ClassicalWeight(tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "ClassicalWeight":
        return ClassicalWeight(tuple(k * a for a in self.coeffs))

    def pairing(self, i: int) -> int:
        return self.coeffs[i]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lift(self, delta_coeff=0) -> Weight:
        """The section s: keeps the Lambda-coefficients and sets the delta part."""
        return Weight(self.coeffs, Fraction(delta_coeff))

    def to_json(self) -> dict:
        return {"L": {str(i): m for i, m in enumerate(self.coeffs) if m}}

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


_LABEL = re.compile(r"^([ABCD])(\d+)_([12])$")

CATALOG = tuple(
    [f"A{n}_1" for n in range(1, 9)]
    + [f"A{2 * n}_2" for n in range(1, 4)]
    + ["B3_1", "B4_1", "C2_1", "C3_1", "C4_1", "D4_1"]
)


def _root_products(family: str, n: int, twist: int):
    """Squared lengths (alpha_i, alpha_i) and off-diagonal products (alpha_i, alpha_j)."""
    size = n + 1
    lengths = [Fraction(2)] * size
    bonds: dict[tuple[int, int], Fraction] = {}
    if family == "A" and twist == 1:
        if n == 1:
            bonds[(0, 1)] = Fraction(-2)
        else:
            for i in range(size):
                bonds[(i, (i + 1) % size)] = Fraction(-1)
    elif family == "A" and twist == 2:
        # A_{2k}^{(2)} with k = n/2 is stored with rank k: node 0 short, node k long
        k = n // 2
        size = k + 1
        lengths = [Fraction(2)] * size
        lengths[0] = Fraction(1)
        lengths[k] = Fraction(4)
        if k == 1:
            bonds[(0, 1)] = Fraction(-2)
        else:
            bonds[(0, 1)] = Fraction(-1)
            for j in range(1, k - 1):
                bonds[(j, j + 1)] = Fraction(-1)
            bonds[(k - 1, k)] = Fraction(-2)
    elif family == "B":
        lengths[n] = Fraction(1)
        bonds[(0, 2)] = bonds[(1, 2)] = Fraction(-1)
        for j in range(2, n):
            bonds[(j, j + 1)] = Fraction(-1)
    elif family == "C":
        for j in range(1, n):
            lengths[j] = Fraction(1)
        for j in range(n):
            bonds[(j, j + 1)] = Fraction(-1) if j in (0, n - 1) else Fraction(-1, 2)
    elif family == "D":
        bonds[(0, 2)] = bonds[(1, 2)] = Fraction(-1)
        for j in range(2, n - 2):
            bonds[(j, j + 1)] = Fraction(-1)
        bonds[(n - 2, n - 1)] = bonds[(n - 2, n)] = Fraction(-1)
    else:
        raise ValueError(f"unsupported family {family}{n}_{twist}")
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        gram[i][i] = lengths[i]
    for (i, j), v in bonds.items():
        gram[i][j] = gram[j][i] = v
    return gram


def parse_label(label: str) -> tuple[str, int, int]:
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"unknown type label {label!r}")
    family, n, twist = m.group(1), int(m.group(2)), int(m.group(3))
    if label not in CATALOG:
        raise ValueError(f"type {label!r} is not in the catalog {CATALOG}")
    return family, n, twist


def _primitive_null_vector(rows) -> list[int]:
    null = sympy.Matrix(rows).nullspace()
    if len(null) != 1:
        raise ValueError("Cartan matrix is not of affine type")
    vec = null[0]
    den = lcm(*[sympy.fraction(x)[1] for x in vec])
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return ints


@dataclass(frozen=True)
class CartanDatum:
    type_label: str
    cartan_matrix: tuple[tuple[int, ...], ...]  # entry [i][j] = <h_i, alpha_j>
    root_lengths: tuple[Fraction, ...]          # (alpha_i, alpha_i)/2
    marks: tuple[int, ...]
    comarks: tuple[int, ...]
    d: int
    i0: int
    zero_check: int                              # the node 0-check
    i0_choices: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def index_set(self) -> tuple[int, ...]:
        return tuple(range(self.rank))

    @property
    def twisted_even(self) -> bool:
        """True for the A_{2n}^{(2)} family."""
        return self.type_label.endswith("_2")

    @property
    def classical_nodes(self) -> tuple[int, ...]:
        return tuple(i for i in self.index_set if i != self.i0)

    # -- weights ------------------------------------------------------------
    def Lambda(self, i: int) -> Weight:
        coeffs = [0] * self.rank
        coeffs[i] = 1
        return Weight(tuple(coeffs))

    def alpha(self, i: int) -> Weight:
        col = tuple(self.cartan_matrix[j][i] for j in self.index_set)
        delta = Fraction(1, self.marks[self.i0]) if i == self.i0 else Fraction(0)
        return Weight(col, delta)

    def cl_alpha(self, i: int) -> ClassicalWeight:
        return self.alpha(i).cl()

    @property
    def delta(self) -> Weight:
        return Weight((0,) * self.rank, Fraction(1))

    def zero_weight(self) -> Weight:
        return Weight((0,) * self.rank)

    def zero_classical(self) -> ClassicalWeight:
        return ClassicalWeight((0,) * self.rank)

    def level(self, lam) -> int:
        coeffs = lam.lambda_coeffs if isinstance(lam, Weight) else lam.coeffs
        return sum(a * m for a, m in zip(self.comarks, coeffs))

    def varpi(self, i: int) -> Weight:
        """Level-zero fundamental weight Lambda_i - a_i^vee Lambda_{0-check}."""
        if i == self.zero_check:
            raise ValueError("varpi is not defined at the node 0-check")
        return self.Lambda(i) - self.Lambda(self.zero_check).scale(self.comarks[i])

    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    # -- root coordinates and the form ---------------------------------------
    @cached_property
    def _finite_inverse(self) -> list[list[Fraction]]:
        nodes = self.classical_nodes
        block = sympy.Matrix([[self.cartan_matrix[k][j] for j in nodes] for k in nodes])
        inv = block.inv()
        return [[Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                 for x in inv.row(r)] for r in range(len(nodes))]

    def root_coords(self, beta: Weight) -> tuple[Fraction, ...]:
        """Rational coefficients b with beta = sum_i b_i alpha_i (beta of level zero)."""
        if self.level(beta) != 0:
            raise ValueError(f"{beta} is not in the span of the simple roots")
        b = [Fraction(0)] * self.rank
        b[self.i0] = beta.delta_coeff * self.marks[self.i0]
        nodes = self.classical_nodes
        rhs = [beta.lambda_coeffs[k] - self.cartan_matrix[k][self.i0] * b[self.i0] for k in nodes]
        inv = self._finite_inverse
        for r, j in enumerate(nodes):
            b[j] = sum((inv[r][c] * rhs[c] for c in range(len(nodes))), Fraction(0))
        return tuple(b)

    def from_root_coords(self, coords) -> Weight:
        out = self.zero_weight()
        for i, c in enumerate(coords):
            c = Fraction(c)
            if c.denominator != 1:
                raise ValueError("root coordinates must be integers here")
            out = out + self.alpha(i).scale(int(c))
        return out

    def in_root_lattice(self, beta: Weight) -> bool:
        try:
            coords = self.root_coords(beta)
        except ValueError:
            return False
        return all(c.denominator == 1 for c in coords)

    def classical_coords(self, mu: ClassicalWeight) -> dict[int, Fraction]:
        """Coefficients of a level-zero classical weight over cl(alpha_j), j != i0."""
        coords = self.root_coords(mu.lift())
        return {j: coords[j] for j in self.classical_nodes}

    def from_classical_coords(self, coords: dict[int, int]) -> ClassicalWeight:
        out = self.zero_classical()
        for j, c in coords.items():
            out = out + self.cl_alpha(j).scale(int(c))
        return out

    def form(self, lam, beta) -> Fraction:
        """Invariant form when at least one argument has level zero.

        With beta = sum_i b_i alpha_i (rational b allowed) the value is
        sum_i b_i ((alpha_i, alpha_i)/2) <h_i, lam>.  Classical weights are
        lifted by the section, which is harmless since delta pairs trivially
        with level-zero weights.
        """
        lam = lam.lift() if isinstance(lam, ClassicalWeight) else lam
        beta = beta.lift() if isinstance(beta, ClassicalWeight) else beta
        if self.level(beta) != 0:
            if self.level(lam) != 0:
                raise ValueError("form needs one argument of level zero")
            lam, beta = beta, lam
        coords = self.root_coords(beta)
        return sum((c * r * m for c, r, m in zip(coords, self.root_lengths, lam.lambda_coeffs)),
                   Fraction(0))

    # -- classical roots ------------------------------------------------------
    def reflect_classical(self, i: int, mu: ClassicalWeight) -> ClassicalWeight:
        k = mu.coeffs[i]
        if k == 0:
            return mu
        return mu - self.cl_alpha(i).scale(k)

    @cached_property
    def classical_roots(self) -> tuple[ClassicalWeight, ...]:
        """All of Delta_cl, as the W-orbits of the cl(alpha_i)."""
        seen = set()
        stack = [self.cl_alpha(i) for i in self.index_set]
        while stack:
            mu = stack.pop()
            if mu in seen:
                continue
            seen.add(mu)
            for i in self.index_set:
                stack.append(self.reflect_classical(i, mu))
        return tuple(sorted(seen))

    def is_positive_classical(self, mu: ClassicalWeight) -> bool:
        coords = self.classical_coords(mu)
        return any(c > 0 for c in coords.values()) and all(c >= 0 for c in coords.values())

    @cached_property
    def positive_classical_roots(self) -> tuple[ClassicalWeight, ...]:
        return tuple(b for b in self.classical_roots if self.is_positive_classical(b))

    def c_alpha(self, beta: ClassicalWeight) -> Fraction:
        if beta not in set(self.classical_roots):
            raise ValueError(f"{beta} is not a classical root")
        return max(Fraction(1), self.form(beta, beta) / 2)

    def coroot(self, beta: ClassicalWeight) -> tuple[Fraction, ...]:
        """beta^vee = 2 beta/(beta, beta) as rational Lambda-coefficients."""
        norm = self.form(beta, beta)
        return tuple(Fraction(2 * c) / norm for c in beta.coeffs)

    def tilde_alpha(self, beta: ClassicalWeight) -> ClassicalWeight:
        """Shortest element of Q-tilde on the ray through cl(beta)."""
        norm = self.form(beta, beta)
        if self.twisted_even:
            factor = Fraction(1, 2) if norm == 4 else Fraction(1)
        else:
            factor = self.c_alpha(beta) * 2 / norm
        coeffs = [factor * c for c in beta.coeffs]
        if any(c.denominator != 1 for c in coeffs):
            raise ArithmeticError("tilde alpha left the weight lattice")
        return ClassicalWeight(tuple(int(c) for c in coeffs))

    @cached_property
    def tilde_roots(self) -> tuple[ClassicalWeight, ...]:
        return tuple(sorted({self.tilde_alpha(b) for b in self.classical_roots}))

    def tilde_basis(self) -> dict[int, ClassicalWeight]:
        """Basis {alpha~_j : j != i0} of the lattice Q-tilde."""
        return {j: self.tilde_alpha(self.cl_alpha(j)) for j in self.classical_nodes}

    def d_value(self, i: int) -> Fraction:
        """d_i = (varpi_i, alpha~_i)."""
        return self.form(self.varpi(i), self.tilde_alpha(self.cl_alpha(i)))

    def q_step(self, i: int) -> int:
        """Exponent k with q_i = q_s^k."""
        value = self.root_lengths[i] * self.d
        assert value.denominator == 1
        return int(value)

    # -- dominant level-l classical weights -----------------------------------
    def dominant_classical_of_level(self, level: int) -> list[ClassicalWeight]:
        out = []

        def rec(i, remaining, acc):
            if i == self.rank:
                if remaining == 0:
                    out.append(ClassicalWeight(tuple(acc)))
                return
            a = self.comarks[i]
            for m in range(remaining // a + 1):
                rec(i + 1, remaining - m * a, acc + [m])

        rec(0, level, [])
        return sorted(out)

    def check_invariants(self) -> bool:
        A = self.cartan_matrix
        n = self.rank
        ok = all(sum(A[i][j] * self.marks[j] for j in range(n)) == 0 for i in range(n))
        ok &= all(sum(self.comarks[i] * A[i][j] for i in range(n)) == 0 for j in range(n))
        ok &= all(self.comarks[i] == self.root_lengths[i] * self.marks[i] for i in range(n))
        ok &= all(r in {Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(1, 3)}
                  for r in self.root_lengths)
        if not self.twisted_even:
            ok &= all((Fraction(1) / r).denominator == 1 for r in self.root_lengths)
        delta = self.zero_weight()
        for i in range(n):
            delta = delta + self.alpha(i).scale(self.marks[i])
        ok &= delta == self.delta
        return bool(ok)


_CACHE: dict[str, CartanDatum] = {}


def build_cartan(type_label: str, i0: int | None = None) -> CartanDatum:
    """Catalog lookup.  ``i0`` overrides the default special node (A_{2n}^{(2)} only)."""
    key = f"{type_label}/{i0}"
    if key in _CACHE:
        return _CACHE[key]
    family, n, twist = parse_label(type_label)
    gram = _root_products(family, n, twist)
    size = len(gram)
    lengths = tuple(gram[i][i] / 2 for i in range(size))
    matrix = []
    for i in range(size):
        row = []
        for j in range(size):
            v = 2 * gram[i][j] / gram[i][i]
            assert v.denominator == 1
            row.append(int(v))
        matrix.append(tuple(row))
    marks = _primitive_null_vector(matrix)
    comarks = tuple(int(lengths[i] * marks[i]) for i in range(size))
    d = lcm(*[r.denominator for r in lengths])
    if twist == 2:
        # two extremal nodes generate W_cl: the short node 0 and the long node
        choices = (0, size - 1)
        default_i0 = size - 1  # a_{i0} = 1, needed by the affinization section
        zero_check = 0
    else:
        choices = (0,)
        default_i0 = 0
        zero_check = 0
    chosen = default_i0 if i0 is None else i0
    if chosen not in choices:
        raise ValueError(f"i0={chosen} is not admissible for {type_label}")
    datum = CartanDatum(type_label, tuple(matrix), lengths, tuple(marks), comarks, d,
                        chosen, zero_check, choices)
    if not datum.check_invariants():
        raise AssertionError(f"catalog entry {type_label} violates the Cartan invariants")
    _CACHE[key] = datum
    return datum
