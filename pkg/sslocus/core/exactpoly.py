"""Exact arithmetic in the indeterminate p.

Polynomials (`PPoly`), rational functions (`RatFn`) and factored products
(`FactoredPPoly`) with `fractions.Fraction` coefficients, Bernoulli numbers,
zeta values at negative odd integers and the proportionality constant v(g).
No floating point is used anywhere in this module.

>>> f = p_power(2, -1) * p_power(6, -1)
>>> f.eval(2)
Fraction(189, 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import (
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from .common import InconsistentSystemError, Rational


def _fraction_tuple(coefficients: Iterable[Rational]) -> Tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coefficients]
    while coeffs and not coeffs[-1]:
        _ = coeffs.pop()

    return tuple(coeffs)


@dataclass(frozen=True, eq=False)
class PPoly:
    """dense univariate polynomial in p; `coefficients[i]` belongs to p^i"""

    coefficients: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _fraction_tuple(self.coefficients))

    @classmethod
    def constant(cls, c: Rational) -> PPoly:
        return cls((c,))

    @classmethod
    def variable(cls) -> PPoly:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> PPoly:
        if k < 0:
            raise ValueError(f"negative exponent {k}")

        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        """degree; -1 for the zero polynomial"""
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def is_constant(self) -> bool:
        return self.degree <= 0

    def eval(self, p0: Rational) -> Fraction:
        """exact value at p = p0 (Horner scheme)"""
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * p0 + c

        return acc

    def derivative(self) -> PPoly:
        return PPoly(i * c for i, c in enumerate(self.coefficients) if i)

    def compose(self, inner: PPoly) -> PPoly:
        """self(inner(p))"""
        acc = PPoly()
        for c in reversed(self.coefficients):
            acc = acc * inner + c

        return acc

    def monic(self) -> PPoly:
        if not self:
            return self

        return self * (1 / self.leading_coefficient)

    def __bool__(self):
        return bool(self.coefficients)

    def __eq__(self, other: object) -> bool:
        o = _as_ppoly(other)
        if o is None:
            return NotImplemented

        return self.coefficients == o.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __neg__(self) -> PPoly:
        return PPoly(-c for c in self.coefficients)

    def __add__(self, other: Union[PPoly, Rational]) -> PPoly:
        o = _as_ppoly(other)
        if o is None:
            return NotImplemented

        n = max(len(self.coefficients), len(o.coefficients))
        a = self.coefficients + (Fraction(0),) * (n - len(self.coefficients))
        b = o.coefficients + (Fraction(0),) * (n - len(o.coefficients))
        return PPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other: Union[PPoly, Rational]) -> PPoly:
        o = _as_ppoly(other)
        if o is None:
            return NotImplemented

        return self + (-o)

    def __rsub__(self, other: Union[PPoly, Rational]) -> PPoly:
        return (-self) + other

    def __mul__(self, other: Union[PPoly, Rational]) -> PPoly:
        o = _as_ppoly(other)
        if o is None:
            return NotImplemented

        if not self or not o:
            return PPoly()

        out = [Fraction(0)] * (len(self.coefficients) + len(o.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            if not x:
                continue
            for j, y in enumerate(o.coefficients):
                out[i + j] += x * y

        return PPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> PPoly:
        if exponent < 0:
            raise ValueError("negative powers of a polynomial are rational functions")

        result = PPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1

        return result

    def __divmod__(self, other: Union[PPoly, Rational]) -> Tuple[PPoly, PPoly]:
        divisor = _as_ppoly(other)
        if divisor is None:
            return NotImplemented

        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")

        remainder = list(self.coefficients)
        quotient = [Fraction(0)] * max(len(remainder) - divisor.degree, 0)
        lead = divisor.leading_coefficient
        for shift in range(len(quotient) - 1, -1, -1):
            c = remainder[shift + divisor.degree] / lead
            quotient[shift] = c
            if c:
                for i, d in enumerate(divisor.coefficients):
                    remainder[shift + i] -= c * d

        return PPoly(quotient), PPoly(remainder[: max(divisor.degree, 0)])

    def __floordiv__(self, other: Union[PPoly, Rational]) -> PPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: Union[PPoly, Rational]) -> PPoly:
        return divmod(self, other)[1]

    def __truediv__(self, other: Union[PPoly, Rational, RatFn]) -> RatFn:
        return RatFn(self) / other

    def __rtruediv__(self, other: Rational) -> RatFn:
        return RatFn(PPoly.constant(other)) / self

    def __str__(self) -> str:
        if not self:
            return "0"

        terms: List[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "p" if k == 1 else f"p^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append(f"{sign} {body}")

        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _as_ppoly(x: object) -> Optional[PPoly]:
    if isinstance(x, PPoly):
        return x
    elif isinstance(x, (int, Fraction)):
        return PPoly.constant(x)
    else:
        return None


P = PPoly.variable()
"""the indeterminate p"""


def p_power(k: int, shift: Rational = 0) -> PPoly:
    """p^k + shift"""
    return PPoly.monomial(k) + shift


def ppoly_gcd(a: PPoly, b: PPoly) -> PPoly:
    """monic greatest common divisor (rational Euclidean algorithm)"""
    while b:
        a, b = b, a % b

    return a.monic()


@dataclass(frozen=True, eq=False)
class RatFn:
    """element of Q(p) in canonical form: coprime, monic denominator"""

    numerator: PPoly
    denominator: PPoly = field(default_factory=lambda: PPoly.constant(1))

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")

        if not num:
            num, den = PPoly(), PPoly.constant(1)
        else:
            g = ppoly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading_coefficient
            num, den = num * (1 / lead), den * (1 / lead)

        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def coerce(cls, x: Union[RatFn, PPoly, Rational]) -> RatFn:
        if isinstance(x, RatFn):
            return x
        elif isinstance(x, PPoly):
            return cls(x)
        else:
            return cls(PPoly.constant(x))

    def eval(self, p0: Rational) -> Fraction:
        den = self.denominator.eval(p0)
        if not den:
            raise ZeroDivisionError(f"denominator {self.denominator} vanishes at {p0}")

        return self.numerator.eval(p0) / den

    def is_polynomial(self) -> bool:
        return self.denominator.is_constant()

    def to_ppoly(self) -> PPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")

        return self.numerator

    def __bool__(self):
        return bool(self.numerator)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (RatFn, PPoly, int, Fraction)):
            o = RatFn.coerce(other)
            return (self.numerator, self.denominator) == (o.numerator, o.denominator)

        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __neg__(self) -> RatFn:
        return RatFn(-self.numerator, self.denominator)

    def __add__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        if self.denominator == o.denominator:
            return RatFn(self.numerator + o.numerator, self.denominator)

        return RatFn(
            self.numerator * o.denominator + o.numerator * self.denominator,
            self.denominator * o.denominator,
        )

    __radd__ = __add__

    def __sub__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        return self + (-o)

    def __rsub__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        return o - self

    def __mul__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        return RatFn(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        if not o:
            raise ZeroDivisionError("division by the zero rational function")

        return RatFn(self.numerator * o.denominator, self.denominator * o.numerator)

    def __rtruediv__(self, other: Union[RatFn, PPoly, Rational]) -> RatFn:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented

        return o / self

    def __pow__(self, exponent: int) -> RatFn:
        if exponent < 0:
            return RatFn(self.denominator**-exponent, self.numerator**-exponent)

        return RatFn(self.numerator**exponent, self.denominator**exponent)

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.numerator)

        return f"({self.numerator}) / ({self.denominator})"


def _as_ratfn(x: object) -> Optional[RatFn]:
    if isinstance(x, (RatFn, PPoly, int, Fraction)):
        return RatFn.coerce(x)

    return None


@dataclass(frozen=True)
class FactoredPPoly:
    """scalar times a product of polynomial factors with positive exponents"""

    scalar: Fraction = Fraction(1)
    factors: Tuple[Tuple[PPoly, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        assert all(e > 0 for _, e in self.factors), self.factors

    @classmethod
    def of(
        cls, *factors: Union[PPoly, Tuple[PPoly, int]], scalar: Rational = 1
    ) -> FactoredPPoly:
        return cls(
            Fraction(scalar),
            tuple(f if isinstance(f, tuple) else (f, 1) for f in factors),
        )

    def expand(self) -> PPoly:
        result = PPoly.constant(self.scalar)
        for f, e in self.factors:
            result = result * f**e

        return result

    def eval(self, p0: Rational) -> Fraction:
        result = self.scalar
        for f, e in self.factors:
            result *= f.eval(p0) ** e

        return result

    def __mul__(self, other: Union[FactoredPPoly, Rational]) -> FactoredPPoly:
        if isinstance(other, FactoredPPoly):
            return FactoredPPoly(
                self.scalar * other.scalar, self.factors + other.factors
            )
        elif isinstance(other, (int, Fraction)):
            return FactoredPPoly(self.scalar * other, self.factors)
        else:
            return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts: List[str] = []
        if self.scalar != 1 or not self.factors:
            parts.append(str(self.scalar))

        for f, e in self.factors:
            parts.append(f"({f})" + ("" if e == 1 else f"^{e}"))

        return " ".join(parts)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> Tuple[Fraction, ...]:
    table = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum((comb(m + 1, k) * table[k] for k in range(m)), Fraction(0))
        table.append(-s / (m + 1))

    return tuple(table)


def bernoulli(n: int) -> Fraction:
    """B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0 with B_0 = 1 (so B_1 = -1/2)

    >>> bernoulli(12)
    Fraction(-691, 2730)
    """
    if n < 2 or n % 2:
        raise ValueError(f"expected an even n >= 2, got {n}")

    return _bernoulli_table(n)[n]


def zeta_neg(k: int) -> Fraction:
    """zeta(1 - 2k) = -B_{2k} / (2k)"""
    if k < 1:
        raise ValueError(f"expected k >= 1, got {k}")

    return -bernoulli(2 * k) / (2 * k)


def proportionality_v(g: int) -> Fraction:
    """v(g) = (-1)^{g(g+1)/2} 2^{-g} zeta(-1) zeta(-3) ... zeta(1-2g)

    >>> proportionality_v(4)
    Fraction(1, 1393459200)
    """
    if g < 0:
        raise ValueError(f"expected g >= 0, got {g}")

    v = Fraction((-1) ** (g * (g + 1) // 2), 2**g)
    for k in range(1, g + 1):
        v *= zeta_neg(k)

    return v


F = TypeVar("F", Fraction, RatFn)


def _to_field(x: Union[int, Fraction, RatFn, PPoly]) -> Union[Fraction, RatFn]:
    if isinstance(x, int):
        return Fraction(x)
    elif isinstance(x, PPoly):
        return RatFn(x)
    else:
        return x


def reduced_row_echelon(
    matrix: Sequence[Sequence[Union[int, Fraction, RatFn, PPoly]]],
) -> Tuple[List[List[Union[Fraction, RatFn]]], List[int]]:
    """reduced row echelon form over Q or Q(p) and the pivot columns"""
    rows = [[_to_field(x) for x in row] for row in matrix]
    n_cols = len(rows[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == len(rows):
            break

        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue

        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            factor = rows[i][c]
            if i != r and factor:
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]

        pivots.append(c)
        r += 1

    return rows, pivots


def rational_rank(
    matrix: Sequence[Sequence[Union[int, Fraction, RatFn, PPoly]]]
) -> int:
    return len(reduced_row_echelon(matrix)[1])


def solve_linear(
    rows: Sequence[Sequence[Union[int, Fraction, RatFn, PPoly]]],
    rhs: Sequence[Union[int, Fraction, RatFn, PPoly]],
) -> List[Union[Fraction, RatFn]]:
    """unique solution of an (overdetermined) consistent system"""
    if len(rows) != len(rhs):
        raise ValueError(f"{len(rows)} rows but {len(rhs)} right hand sides")

    n = len(rows[0])
    echelon, pivots = reduced_row_echelon(
        [list(row) + [b] for row, b in zip(rows, rhs)]
    )
    if n in pivots:
        raise InconsistentSystemError("inconsistent linear system")

    if len(pivots) < n:
        raise InconsistentSystemError(
            f"underdetermined linear system: rank {len(pivots)} < {n} unknowns"
        )

    return [echelon[i][n] for i in range(n)]


def in_row_span(
    rows: Sequence[Sequence[Union[int, Fraction, RatFn, PPoly]]],
    vector: Sequence[Union[int, Fraction, RatFn, PPoly]],
) -> bool:
    return rational_rank(list(rows) + [vector]) == rational_rank(rows)
