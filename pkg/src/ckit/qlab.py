"""Exact q-arithmetic.

Laurent polynomials and rational functions in one variable ``q`` (playing the
role of q_s) with rational coefficients, q-integers and q-binomials, the
q-series identity behind the regularized divided powers, and those operators
on the irreducible sl2-modules V(l).

Exponents are integers.  When a quantum parameter q_i = q_s^k is needed the
helpers take a ``step`` argument k and work with q_s directly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import flint


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class LaurentPoly:
    """Laurent polynomial q^shift * body with body a flint rational polynomial.

    The body is kept with a nonzero constant term (or zero), so the
    representation is canonical and equality is structural.
    """

    __slots__ = ("_shift", "_body")

    def __init__(self, coeffs=None, shift: int = 0):
        # coeffs: dict exponent -> rational, or a list read from exponent `shift`
        if coeffs is None:
            body = flint.fmpq_poly([])
        elif isinstance(coeffs, dict):
            items = {int(e): c for e, c in coeffs.items() if c != 0}
            if not items:
                body = flint.fmpq_poly([])
            else:
                lo = min(items)
                hi = max(items)
                lst = [0] * (hi - lo + 1)
                for e, c in items.items():
                    lst[e - lo] = _flint_q(c)
                body = flint.fmpq_poly(lst)
                shift = lo
        elif isinstance(coeffs, flint.fmpq_poly):
            body = coeffs
        else:
            body = flint.fmpq_poly([_flint_q(c) for c in coeffs])
        self._shift, self._body = _normalize(body, shift)

    @classmethod
    def _raw(cls, body, shift):
        obj = cls.__new__(cls)
        obj._shift, obj._body = _normalize(body, shift)
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentPoly":
        return cls._raw(flint.fmpq_poly([_flint_q(coeff)]), exponent)

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls.monomial(0, c)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self._body.is_zero()

    def valuation(self) -> int | None:
        """Lowest exponent, None for the zero polynomial."""
        return None if self.is_zero() else self._shift

    def degree(self) -> int | None:
        return None if self.is_zero() else self._shift + self._body.degree()

    def coeff(self, exponent: int) -> Fraction:
        k = exponent - self._shift
        if k < 0 or k > self._body.degree():
            return Fraction(0)
        return _to_fraction(self._body[k])

    def terms(self) -> dict[int, Fraction]:
        out = {}
        for k, c in enumerate(self._body.coeffs()):
            if c != 0:
                out[self._shift + k] = _to_fraction(c)
        return out

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms().values())

    def is_regular(self) -> bool:
        """True when the polynomial lies in Q[q] (no negative powers)."""
        return self.is_zero() or self._shift >= 0

    def at_zero(self) -> Fraction:
        if not self.is_regular():
            raise ValueError("not regular at q = 0")
        return self.coeff(0)

    def evaluate(self, value) -> Fraction:
        value = Fraction(value)
        return sum((c * value ** e for e, c in self.terms().items()), Fraction(0))

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._shift, other._shift)
        a = self._body * flint.fmpq_poly([0] * (self._shift - lo) + [1])
        b = other._body * flint.fmpq_poly([0] * (other._shift - lo) + [1])
        return LaurentPoly._raw(a + b, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(-self._body, self._shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFunc):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self._body * other._body, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms()) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms().items()
            return LaurentPoly.monomial(-e * (-k), Fraction(1) / c ** (-k))
        return LaurentPoly._raw(self._body ** k, self._shift * k)

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ValueError when the division leaves a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        quo, rem = divmod(self._body, other._body)
        if not rem.is_zero():
            raise ValueError("inexact Laurent division")
        return LaurentPoly._raw(quo, self._shift - other._shift)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly._raw(self._body / _flint_q(other), self._shift)
        return RationalFunc(self, other)

    def bar(self) -> "LaurentPoly":
        """The involution q -> q^{-1}."""
        return LaurentPoly({-e: c for e, c in self.terms().items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """q -> q^k for a positive integer k."""
        return LaurentPoly({e * k: c for e, c in self.terms().items()})

    # -- comparison / display ----------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, RationalFunc) else other
        if other is NotImplemented:
            return False
        if isinstance(other, RationalFunc):
            return other == self
        return self._shift == other._shift and self._body == other._body

    def __hash__(self):
        return hash((self._shift, tuple(self.terms().items())))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        terms = self.terms()
        if not terms:
            return "0"
        parts = []
        for e in sorted(terms):
            c = terms[e]
            if e == 0:
                parts.append(str(c))
            else:
                mon = "q" if e == 1 else f"q^{e}"
                parts.append(mon if c == 1 else ("-" + mon if c == -1 else f"{c}*{mon}"))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in sorted(self.terms().items())}


def _flint_q(c):
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _normalize(body, shift):
    if body.is_zero():
        return 0, flint.fmpq_poly([])
    coeffs = body.coeffs()
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        body = flint.fmpq_poly(coeffs[k:])
    return shift + k, body


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Q = LaurentPoly.monomial(1)


def qpow(e: int) -> LaurentPoly:
    return LaurentPoly.monomial(e)


class RationalFunc:
    """Reduced fraction num/den of Laurent polynomials.

    The denominator is stored as an honest polynomial with constant term 1;
    powers of q are pushed into the numerator.  Regularity at q = 0 is then
    a question about the numerator's valuation only.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_laurent(num)
        den = ONE if den is None else _as_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        nb, db = num._body, den._body
        g = nb.gcd(db)
        if g.degree() > 0:
            nb = divmod(nb, g)[0]
            db = divmod(db, g)[0]
        c0 = db.coeffs()[0]  # nonzero after normalisation
        nb = nb / c0
        db = db / c0
        self.num = LaurentPoly._raw(nb, num._shift - den._shift)
        self.den = LaurentPoly._raw(db, 0)

    def is_laurent(self) -> bool:
        return self.den == ONE

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_regular(self) -> bool:
        return self.num.is_regular()

    def at_zero(self) -> Fraction:
        if not self.is_regular():
            raise ValueError("pole at q = 0")
        return self.num.coeff(0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return RationalFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def bar(self) -> "RationalFunc":
        return RationalFunc(self.num.bar(), self.den.bar())

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunc({self})"

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a Laurent polynomial")


# ---------------------------------------------------------------------------
# q-numbers

@lru_cache(maxsize=None)
def qint(k: int, step: int = 1) -> LaurentPoly:
    """Symmetric q-integer [k] = (q^k - q^-k)/(q - q^-1) in the variable q^step."""
    if k == 0:
        return ZERO
    sign = 1 if k > 0 else -1
    k = abs(k)
    return LaurentPoly({step * (k - 1 - 2 * j): sign for j in range(k)})


@lru_cache(maxsize=None)
def qfact(k: int, step: int = 1) -> LaurentPoly:
    if k < 0:
        raise ValueError("negative factorial")
    out = ONE
    for j in range(1, k + 1):
        out = out * qint(j, step)
    return out


@lru_cache(maxsize=None)
def qbinom_sym(n: int, m: int, step: int = 1) -> LaurentPoly:
    """Symmetric q-binomial [n choose m] built from q-integers.

    Defined for integer n (possibly negative) and m >= 0 by the falling product
    [n][n-1]...[n-m+1]/[m]!; zero for m < 0.
    """
    if m < 0:
        return ZERO
    num = ONE
    for j in range(m):
        num = num * qint(n - j, step)
    return num.divexact(qfact(m, step))


@lru_cache(maxsize=None)
def pochhammer(a_exponent: int, n: int, base_exponent: int = 1) -> LaurentPoly:
    """(a; p)_n = prod_{i<n} (1 - a p^i) with a = q^a_exponent and p = q^base_exponent."""
    if n < 0:
        raise ValueError("negative length")
    out = ONE
    for i in range(n):
        out = out * (ONE - qpow(a_exponent + i * base_exponent))
    return out


@lru_cache(maxsize=None)
def gauss_poly(m: int, n: int, base_exponent: int = 2) -> LaurentPoly:
    """Ordinary Gaussian polynomial (p;p)_m / ((p;p)_n (p;p)_{m-n}) with p = q^base."""
    if n < 0 or n > m:
        return ZERO
    p = base_exponent
    return pochhammer(p, m, p).divexact(pochhammer(p, n, p) * pochhammer(p, m - n, p))


def qbin_gauss(m: int, n: int) -> LaurentPoly:
    """q^{n(n-m)} (q^2;q^2)_m / ((q^2;q^2)_n (q^2;q^2)_{m-n})."""
    if n < 0 or n > m:
        raise ValueError("need 0 <= n <= m")
    return qpow(n * (n - m)) * gauss_poly(m, n, 2)


def a_coeff(k: int, n: int, t_exponent: int, step: int = 1) -> LaurentPoly:
    """Coefficient a_k(t) of the regularized divided power, at t = q_i^t_exponent.

    a_k(t) = (-1)^k q_i^{k(1-n)} t^k prod_{nu<k} (1 - q_i^{n+2 nu}).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    head = LaurentPoly.monomial(step * (k * (1 - n) + k * t_exponent), (-1) ** k)
    return head * pochhammer(step * n, k, 2 * step)


# ---------------------------------------------------------------------------
# The q-series identity

def identity_sum(l: int, m: int, n: int) -> LaurentPoly:
    """A = sum_k a_k(q^{l-2m}) [n+m, m-k] [l-m+k, k] (symmetric binomials)."""
    total = ZERO
    for k in range(m + 1):
        total = total + a_coeff(k, n, l - 2 * m) * qbinom_sym(n + m, m - k) * qbinom_sym(l - m + k, k)
    return total


def identity_sum_pochhammer(l: int, m: int, n: int) -> LaurentPoly:
    """The same sum written with q^2-Pochhammer symbols (the hypergeometric form).

    sum_k (-1)^k q^{k(k+1-2m)-nm} (q^n;q^2)_k (q^2;q^2)_{n+m} (q^2;q^2)_{l-m+k}
        / ((q^2;q^2)_{m-k} (q^2;q^2)_{n+k} (q^2;q^2)_k (q^2;q^2)_{l-m})
    """
    total = ZERO
    for k in range(m + 1):
        ratio = gauss_poly(n + m, m - k) * gauss_poly(l - m + k, k)
        total = total + LaurentPoly.monomial(k * (k + 1 - 2 * m) - n * m, (-1) ** k) \
            * pochhammer(n, k, 2) * ratio
    return total


def identity_rhs_times(l: int, m: int, n: int) -> LaurentPoly:
    """(q^2;q^2)_m times the product-side sum, which is a genuine polynomial.

    Product side: sum_k q^{k(2l-2m-n+2)} prod_{j=1..k} (1-q^{n+2(j-1)})/(1-q^{2j})
                                        prod_{j=1..m-k} (1-q^{n+2j})/(1-q^{2j}).
    Multiplying by (q^2;q^2)_m turns 1/((q^2;q^2)_k (q^2;q^2)_{m-k}) into a
    Gaussian polynomial.
    """
    total = ZERO
    for k in range(m + 1):
        total = total + qpow(k * (2 * l - 2 * m - n + 2)) * pochhammer(n, k, 2) \
            * pochhammer(n + 2, m - k, 2) * gauss_poly(m, k)
    return total


def identity_rhs(l: int, m: int, n: int) -> RationalFunc:
    return RationalFunc(identity_rhs_times(l, m, n), pochhammer(2, m, 2))


def verify_qbinomial_identity(l: int, m: int, n: int) -> bool:
    """Check the identity in both forms and that A lies in 1 + q Z[q]."""
    if not (0 <= m <= l and n >= 0):
        raise ValueError("need 0 <= m <= l and n >= 0")
    lhs = identity_sum(l, m, n)
    if lhs != identity_sum_pochhammer(l, m, n):
        return False
    if lhs * pochhammer(2, m, 2) != identity_rhs_times(l, m, n):
        return False
    return lhs.is_regular() and lhs.is_integral() and lhs.coeff(0) == 1


def scan_qbinomial_identity(nmax: int, mmax: int, span: int) -> list[tuple[int, int, int]]:
    """Return the failing (l, m, n) triples over the requested box."""
    bad = []
    for n in range(nmax + 1):
        for m in range(mmax + 1):
            for l in range(m, m + span + 1):
                if not verify_qbinomial_identity(l, m, n):
                    bad.append((l, m, n))
    return bad


# ---------------------------------------------------------------------------
# sl2-modules and the regularized operators

Matrix = list  # list of rows of LaurentPoly


def _zero_matrix(dim):
    return [[ZERO] * dim for _ in range(dim)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    dim = len(a)
    out = _zero_matrix(dim)
    for i in range(dim):
        row = a[i]
        for k in range(dim):
            if row[k].is_zero():
                continue
            bk = b[k]
            for j in range(dim):
                if not bk[j].is_zero():
                    out[i][j] = out[i][j] + row[k] * bk[j]
    return out


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(a: Matrix, c: LaurentPoly) -> Matrix:
    return [[x * c for x in row] for row in a]


def identity(dim: int) -> Matrix:
    out = _zero_matrix(dim)
    for i in range(dim):
        out[i][i] = ONE
    return out


class Sl2Module:
    """Irreducible U_q(sl2)-module V(l) in the basis f^{(m)}u, 0 <= m <= l.

    Matrices act on column vectors; column m is the image of f^{(m)}u.
    ``step`` makes q_i = q^step.
    """

    def __init__(self, l: int, step: int = 1):
        if l < 0:
            raise ValueError("highest weight must be nonnegative")
        self.l = l
        self.step = step
        dim = l + 1
        self.dim = dim
        self.e = _zero_matrix(dim)
        self.f = _zero_matrix(dim)
        self.t = _zero_matrix(dim)
        self.t_inv = _zero_matrix(dim)
        for m in range(dim):
            self.t[m][m] = qpow(step * (l - 2 * m))
            self.t_inv[m][m] = qpow(-step * (l - 2 * m))
            if m >= 1:
                self.e[m - 1][m] = qint(l - m + 1, step)
            if m + 1 <= l:
                self.f[m + 1][m] = qint(m + 1, step)

    def t_exponent(self, m: int) -> int:
        """Exponent of q_i in the t-eigenvalue on f^{(m)}u."""
        return self.l - 2 * m

    def check_relations(self) -> bool:
        ef = matmul(self.e, self.f)
        fe = matmul(self.f, self.e)
        comm = matadd(ef, matscale(fe, -ONE))
        qq = qpow(self.step) - qpow(-self.step)
        rhs = matadd(self.t, matscale(self.t_inv, -ONE))
        for i in range(self.dim):
            for j in range(self.dim):
                if comm[i][j] * qq != rhs[i][j]:
                    return False
        q2 = qpow(2 * self.step)
        te = matmul(self.t, self.e)
        et = matscale(matmul(self.e, self.t), q2)
        tf = matscale(matmul(self.t, self.f), q2)
        ft = matmul(self.f, self.t)
        return te == et and tf == ft

    def divided_power(self, which: str, k: int) -> Matrix:
        """e^{(k)} or f^{(k)} as a matrix, computed as X^k / [k]!."""
        base = self.e if which == "e" else self.f
        if k < 0:
            return _zero_matrix(self.dim)
        out = identity(self.dim)
        for _ in range(k):
            out = matmul(base, out)
        fac = qfact(k, self.step)
        return [[x.divexact(fac) if not x.is_zero() else ZERO for x in row] for row in out]


def regularized_F(n: int, module: Sl2Module) -> Matrix:
    """Matrix of sum_{k >= 0, k >= -n} f^{(n+k)} e^{(k)} a_k(t) on the module."""
    dim = module.dim
    out = _zero_matrix(dim)
    step = module.step
    for k in range(max(0, -n), dim + 1):
        fpow = module.divided_power("f", n + k)
        epow = module.divided_power("e", k)
        a_diag = _zero_matrix(dim)
        for m in range(dim):
            a_diag[m][m] = a_coeff(k, n, module.t_exponent(m), step)
        term = matmul(fpow, matmul(epow, a_diag))
        out = matadd(out, term)
    return out


def regularized_coefficients(n: int, module: Sl2Module) -> dict[int, LaurentPoly]:
    """Return {m: c} with F~^{(n)} f^{(m)}u = c f^{(m+n)}u for 0 <= m+n <= l.

    Raises if the matrix has any entry outside the expected positions, which
    would mean the operator does not shift the weight by -n alpha.
    """
    mat = regularized_F(n, module)
    coeffs = {}
    for m in range(module.dim):
        for row in range(module.dim):
            entry = mat[row][m]
            if entry.is_zero():
                continue
            if row != m + n:
                raise AssertionError("regularized operator has the wrong weight")
            coeffs[m] = entry
    return coeffs


def regularized_ok(n: int, l: int) -> bool:
    """Every coefficient is regular at q = 0 with value 1, and it is zero
    exactly when f^{(m+n)}u falls outside the module."""
    module = Sl2Module(l)
    coeffs = regularized_coefficients(n, module)
    for m in range(l + 1):
        inside = 0 <= m + n <= l
        c = coeffs.get(m)
        if not inside:
            if c is not None:
                return False
            continue
        if c is None or not c.is_regular() or c.at_zero() != 1:
            return False
    return True


def regularized_coefficient_closed_form(l: int, m: int, n: int) -> LaurentPoly:
    """Closed form of the coefficient of F~^{(n)} on f^{(m)}u for n >= 0."""
    return identity_sum(l, m, n)


def laurent_from_terms(pairs: Iterable[tuple[int, int]]) -> LaurentPoly:
    return LaurentPoly({e: c for e, c in pairs})
