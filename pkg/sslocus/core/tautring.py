"""The tautological ring R_g generated by the Chern classes of the Hodge bundle.

Elements are stored in the square-free basis lambda_{i1}...lambda_{ik}, each basis
monomial encoded as a bitmask (bit i - 1 <=> lambda_i). Arbitrary lambda
polynomials are brought into this basis with the rewrite rules that follow from
c(E) c(E^dual) = 1.

>>> l1 = lambda_class(3, 1)
>>> str(l1 * l1 * l1 * l1)
'8*λ1λ3'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

import numpy as np
from loguru import logger

from .common import Frozen, GenusError, Rational, RewriteOrder
from .exactpoly import RatFn, proportionality_v, rational_rank

Coefficient = Union[Fraction, RatFn]
Exponents = Tuple[int, ...]
"""exponents (e_1, ..., e_g) of lambda_1^e_1 ... lambda_g^e_g"""

LambdaPolynomial = Mapping[Exponents, Union[Rational, RatFn]]
"""formal lambda polynomial with arbitrary exponents"""


def mask_indices(mask: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_degree(mask: int) -> int:
    return sum(mask_indices(mask))


def top_degree(g: int) -> int:
    return g * (g + 1) // 2


@dataclass(frozen=True)
class RewriteTable:
    g: int
    square_rules: Mapping[int, Tuple[Tuple[int, int, int], ...]]
    """i -> terms (coefficient, j, k) of lambda_i^2 = sum coefficient lambda_j lambda_k
    with lambda_0 = 1"""


@lru_cache(maxsize=None)
def rewrite_table(g: int) -> RewriteTable:
    """lambda_i^2 = 2 sum_{k=1}^{i} (-1)^(k-1) lambda_{i-k} lambda_{i+k}

    with lambda_j = 0 for j > g
    """
    if g < 1:
        raise GenusError(f"expected g >= 1, got {g}")

    rules = {
        i: tuple(
            (2 * (-1) ** (k - 1), i - k, i + k)
            for k in range(1, i + 1)
            if i + k <= g
        )
        for i in range(1, g + 1)
    }
    return RewriteTable(g, Frozen(rules))


def _reduce_monomial(
    table: RewriteTable,
    exponents: Exponents,
    pick: Callable[[List[int]], int],
    memo: Optional[Dict[Exponents, Dict[int, Fraction]]],
) -> Dict[int, Fraction]:
    if memo is not None and exponents in memo:
        return memo[exponents]

    result: Dict[int, Fraction] = {}
    squares = [i for i, e in enumerate(exponents) if e >= 2]
    degree = sum((i + 1) * e for i, e in enumerate(exponents))
    if degree > top_degree(table.g):
        # R_g vanishes above the socle degree
        result = {}
    elif not squares:
        mask = sum(1 << i for i, e in enumerate(exponents) if e)
        result = {mask: Fraction(1)}
    else:
        # each rewrite raises the sum of squared indices; the recursion terminates
        i = pick(squares)
        base = list(exponents)
        base[i] -= 2
        for coeff, lo, hi in table.square_rules[i + 1]:
            term = list(base)
            if lo:
                term[lo - 1] += 1

            term[hi - 1] += 1
            for mask, c in _reduce_monomial(table, tuple(term), pick, memo).items():
                result[mask] = result.get(mask, Fraction(0)) + coeff * c

        result = {m: c for m, c in result.items() if c}

    if memo is not None:
        memo[exponents] = result

    return result


@lru_cache(maxsize=32)
def _memo(g: int, order: RewriteOrder) -> Dict[Exponents, Dict[int, Fraction]]:
    """reduced monomials of one rewrite table and order"""
    return {}


def _picker(order: RewriteOrder, seed: Optional[int]) -> Callable[[List[int]], int]:
    if order == "ascending":
        return min
    elif order == "descending":
        return max
    elif order == "random":
        rng = np.random.default_rng(seed)
        return lambda squares: squares[int(rng.integers(len(squares)))]
    else:
        raise ValueError(f"unknown rewrite order '{order}'")


def _reduce_exponents(
    g: int,
    exponents: Exponents,
    order: RewriteOrder = "ascending",
    seed: Optional[int] = None,
) -> Dict[int, Fraction]:
    memo = None if order == "random" else _memo(g, order)
    return _reduce_monomial(rewrite_table(g), exponents, _picker(order, seed), memo)


def _as_coefficient(c: Union[Rational, RatFn]) -> Coefficient:
    return c if isinstance(c, RatFn) else Fraction(c)


@dataclass(frozen=True, eq=False)
class TautClass:
    """element of R_g; `terms` maps square-free bitmasks to nonzero coefficients"""

    g: int
    terms: Mapping[int, Coefficient]

    def __post_init__(self):
        if self.g < 1:
            raise GenusError(f"expected g >= 1, got {self.g}")

        full = (1 << self.g) - 1
        assert all(0 <= m <= full for m in self.terms), self.terms
        object.__setattr__(
            self,
            "terms",
            Frozen({m: _as_coefficient(c) for m, c in sorted(self.terms.items()) if c}),
        )

    @classmethod
    def zero(cls, g: int) -> TautClass:
        return cls(g, {})

    @classmethod
    def one(cls, g: int) -> TautClass:
        return cls(g, {0: Fraction(1)})

    @classmethod
    def monomial(cls, g: int, *indices: int) -> TautClass:
        """a square-free basis monomial lambda_{i1} ... lambda_{ik}"""
        if len(set(indices)) != len(indices):
            raise ValueError(f"repeated index in {indices}; use `lambda_class`")

        _check_indices(g, indices)
        return cls(g, {sum(1 << (i - 1) for i in indices): Fraction(1)})

    def coefficient(self, *indices: int) -> Coefficient:
        return self.terms.get(sum(1 << (i - 1) for i in indices), Fraction(0))

    def grading(self) -> Dict[int, TautClass]:
        parts: Dict[int, Dict[int, Coefficient]] = {}
        for mask, c in self.terms.items():
            parts.setdefault(mask_degree(mask), {})[mask] = c

        return {d: TautClass(self.g, t) for d, t in sorted(parts.items())}

    def is_homogeneous(self) -> bool:
        return len(self.grading()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """degree of a nonzero homogeneous class"""
        grading = self.grading()
        if len(grading) != 1:
            return None

        return next(iter(grading))

    def _check_genus(self, other: TautClass):
        if other.g != self.g:
            raise GenusError(f"genus mismatch: {self.g} != {other.g}")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TautClass):
            return NotImplemented

        return self.g == other.g and dict(self.terms) == dict(other.terms)

    def __neg__(self) -> TautClass:
        return TautClass(self.g, {m: -c for m, c in self.terms.items()})

    def __add__(self, other: TautClass) -> TautClass:
        self._check_genus(other)
        terms: Dict[int, Coefficient] = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c

        return TautClass(self.g, terms)

    def __sub__(self, other: TautClass) -> TautClass:
        return self + (-other)

    def __mul__(self, other: Union[TautClass, Rational, RatFn]) -> TautClass:
        if isinstance(other, TautClass):
            return mul(self, other)
        elif isinstance(other, (int, Fraction, RatFn)):
            return TautClass(self.g, {m: c * other for m, c in self.terms.items()})
        else:
            return NotImplemented

    def __rmul__(self, other: Union[Rational, RatFn]) -> TautClass:
        return self * other

    def __pow__(self, exponent: int) -> TautClass:
        result = TautClass.one(self.g)
        for _ in range(exponent):
            result = result * self

        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        parts: List[str] = []
        for mask, c in self.terms.items():
            name = "".join(f"λ{i}" for i in mask_indices(mask)) or "1"
            if isinstance(c, RatFn) and (
                not c.is_polynomial() or c.numerator.degree > 0
            ):
                parts.append(f"({c})*{name}")
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}" if name != "1" else str(c))

        return " + ".join(parts).replace("+ -", "- ")


def _check_indices(g: int, indices: Iterable[int]):
    for i in indices:
        if not 1 <= i <= g:
            raise GenusError(f"index lambda_{i} out of range for g={g}")


def reduce(
    g: int,
    expr: LambdaPolynomial,
    order: RewriteOrder = "ascending",
    seed: Optional[int] = None,
) -> TautClass:
    """rewrite a lambda polynomial with arbitrary exponents into the square-free basis

    Args:
        g: genus of the ring
        expr: map from exponent tuples (e_1, e_2, ...) to coefficients
        order: which repeated index to rewrite first
        seed: seed for `order="random"`
    """
    terms: Dict[int, Coefficient] = {}
    for exponents, c in expr.items():
        if any(e < 0 for e in exponents):
            raise ValueError(f"negative exponent in {exponents}")

        _check_indices(g, [i + 1 for i, e in enumerate(exponents) if e])

        padded = tuple(exponents[:g]) + (0,) * max(g - len(exponents), 0)
        coeff = _as_coefficient(c)
        for mask, r in _reduce_exponents(g, padded, order, seed).items():
            terms[mask] = terms.get(mask, Fraction(0)) + r * coeff

    return TautClass(g, terms)


def lambda_class(g: int, *indices: int) -> TautClass:
    """the product lambda_{i1} ... lambda_{ik} (indices may repeat), reduced

    >>> str(lambda_class(4, 2, 2))
    '2*λ1λ3 - 2*λ4'
    """
    _check_indices(g, indices)
    exponents = [0] * g
    for i in indices:
        exponents[i - 1] += 1

    return reduce(g, {tuple(exponents): 1})


def mul(a: TautClass, b: TautClass) -> TautClass:
    if a.g != b.g:
        raise GenusError(f"genus mismatch: {a.g} != {b.g}")

    g = a.g
    terms: Dict[int, Coefficient] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            exponents = tuple((ma >> i & 1) + (mb >> i & 1) for i in range(g))
            for m, r in _reduce_exponents(g, exponents).items():
                terms[m] = terms.get(m, Fraction(0)) + r * ca * cb

    return TautClass(g, terms)


def socle_degree(c: TautClass) -> Coefficient:
    """degree of a top-degree class: coefficient of lambda_1...lambda_g times v(g)"""
    grading = c.grading()
    top = top_degree(c.g)
    if any(d != top for d in grading):
        raise ValueError(
            f"expected a class of degree {top}, got degrees {sorted(grading)}"
        )

    return c.terms.get((1 << c.g) - 1, Fraction(0)) * proportionality_v(c.g)


def quotient_open(c: TautClass) -> TautClass:
    """image in R_g/(lambda_g): drops every monomial containing lambda_g"""
    bit = 1 << (c.g - 1)
    return TautClass(c.g, {m: v for m, v in c.terms.items() if not m & bit})


def to_lower_genus(c: TautClass) -> TautClass:
    """the isomorphism R_g/(lambda_g) -> R_{g-1} applied to `quotient_open(c)`"""
    if c.g < 2:
        raise GenusError("R_1/(lambda_1) is Q, there is no R_0 class")

    return TautClass(c.g - 1, dict(quotient_open(c).terms))


def basis(g: int, degree: Optional[int] = None) -> List[int]:
    """bitmasks of the square-free basis, optionally of a single degree"""
    masks = range(1 << g)
    if degree is not None:
        masks = [m for m in masks if mask_degree(m) == degree]

    return sorted(masks, key=lambda m: (mask_degree(m), m))


def pairing_matrix(g: int, n: int) -> List[List[Coefficient]]:
    """degree-n basis against degree-(top - n) basis via the socle degree"""
    left = basis(g, n)
    right = basis(g, top_degree(g) - n)
    return [
        [
            socle_degree(
                mul(TautClass(g, {a: Fraction(1)}), TautClass(g, {b: Fraction(1)}))
            )
            for b in right
        ]
        for a in left
    ]


def is_gorenstein(g: int) -> bool:
    for n in range(top_degree(g) + 1):
        matrix = pairing_matrix(g, n)
        if len(matrix) != len(basis(g, top_degree(g) - n)):
            logger.warning("pairing in degree {} of R_{} is not square", n, g)
            return False

        if rational_rank(matrix) != len(matrix):
            logger.warning("pairing in degree {} of R_{} is singular", n, g)
            return False

    return True


def total_chern_class(g: int, dual: bool = False) -> TautClass:
    """1 + lambda_1 + ... + lambda_g, or the alternating sum for the dual bundle"""
    return TautClass(
        g,
        {
            0: Fraction(1),
            **{
                1 << (i - 1): Fraction((-1) ** i if dual else 1)
                for i in range(1, g + 1)
            },
        },
    )


def defining_relation_holds(g: int) -> bool:
    """c(E) c(E^dual) = 1 in every degree"""
    product = total_chern_class(g) * total_chern_class(g, dual=True)
    return product == TautClass.one(g)

