from fractions import Fraction
from itertools import product
from typing import Dict, Tuple

import numpy as np
import pytest

from sslocus.core.common import GenusError, RewriteOrder
from sslocus.core.tautring import (
    TautClass,
    basis,
    defining_relation_holds,
    is_gorenstein,
    lambda_class,
    mul,
    quotient_open,
    reduce,
    rewrite_table,
    socle_degree,
    to_lower_genus,
    top_degree,
)
from sslocus.core.tautring import _memo  # pyright: ignore[reportPrivateUsage]


def _random_polynomial(
    rng: np.random.Generator, g: int
) -> Dict[Tuple[int, ...], Fraction]:
    expr: Dict[Tuple[int, ...], Fraction] = {}
    for _ in range(int(rng.integers(1, 4))):
        exponents = tuple(int(e) for e in rng.integers(0, 4, size=g))
        expr[exponents] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))

    return expr


def _random_class(rng: np.random.Generator, g: int) -> TautClass:
    monomials = rng.integers(0, 1 << g, size=3)
    return TautClass(g, {int(m): Fraction(int(rng.integers(-3, 4))) for m in monomials})


@pytest.mark.parametrize("g", range(1, 7))
def test_basis_size(g: int):
    assert len(basis(g)) == 2**g
    assert sum(len(basis(g, d)) for d in range(top_degree(g) + 1)) == 2**g


def test_rewrite_rules():
    assert rewrite_table(1).square_rules[1] == ()
    assert rewrite_table(4).square_rules[2] == ((2, 1, 3), (-2, 0, 4))
    with pytest.raises(GenusError):
        _ = rewrite_table(0)


def test_reduce_examples():
    assert reduce(2, {(2, 0): 1}) == 2 * TautClass.monomial(2, 2)
    assert str(reduce(4, {(0, 2, 0, 0): 1})) == "2*λ1λ3 - 2*λ4"
    assert str(lambda_class(3, 1, 1, 1, 1)) == "8*λ1λ3"
    assert str(lambda_class(4, 1, 1, 1, 1)) == "8*λ1λ3 - 8*λ4"
    assert lambda_class(3, 3, 3) == TautClass.zero(3)


def test_reduce_rejects_out_of_range():
    with pytest.raises(GenusError):
        _ = reduce(2, {(0, 0, 1): 1})

    with pytest.raises(GenusError):
        _ = lambda_class(3, 4)

    with pytest.raises(ValueError):
        _ = reduce(2, {(-1, 0): 1})

    with pytest.raises(ValueError):
        _ = TautClass.monomial(3, 1, 1)


@pytest.mark.parametrize(
    "g,order", product(range(1, 6), ["descending", "random"])
)
def test_reduce_confluence(g: int, order: RewriteOrder):
    rng = np.random.default_rng(g)
    for seed in range(50):
        expr = _random_polynomial(rng, g)
        assert reduce(g, expr, order, seed) == reduce(g, expr, "ascending")


def test_mul_examples():
    assert lambda_class(2, 1) * lambda_class(2, 1) == 2 * lambda_class(2, 2)
    top = TautClass.monomial(4, 1, 2, 3, 4)
    assert mul(TautClass.monomial(4, 1, 2, 3), lambda_class(4, 4)) == top
    left = TautClass.monomial(4, 1, 3) * lambda_class(4, 1, 1)
    right = Fraction(1, 8) * lambda_class(4, 1, 1, 1, 1) * lambda_class(4, 1, 1)
    assert left != right
    assert quotient_open(left) == quotient_open(right)
    with pytest.raises(GenusError):
        _ = mul(TautClass.one(3), TautClass.one(4))


@pytest.mark.parametrize("g", range(1, 6))
def test_ring_axioms(g: int):
    rng = np.random.default_rng(100 + g)
    for _ in range(50):
        a, b, c = (_random_class(rng, g) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("g", range(2, 6))
def test_quotient_open_is_multiplicative(g: int):
    rng = np.random.default_rng(200 + g)
    for _ in range(20):
        a, b = _random_class(rng, g), _random_class(rng, g)
        product_first = quotient_open(a * b)
        assert product_first == quotient_open(quotient_open(a) * quotient_open(b))


def test_quotient_open_examples():
    assert not quotient_open(TautClass.monomial(4, 1, 2, 3, 4))
    assert quotient_open(TautClass.monomial(4, 1, 3)) == TautClass.monomial(4, 1, 3)
    assert quotient_open(lambda_class(4, 1, 1, 1, 1)) == 8 * TautClass.monomial(4, 1, 3)


def test_to_lower_genus():
    lower = to_lower_genus(lambda_class(4, 1, 1, 1, 1))
    assert lower.g == 3
    assert lower == lambda_class(3, 1, 1, 1, 1)
    with pytest.raises(GenusError):
        _ = to_lower_genus(TautClass.one(1))


@pytest.mark.parametrize(
    "g,expected",
    [(1, Fraction(1, 24)), (3, Fraction(1, 2903040)), (4, Fraction(1, 1393459200))],
)
def test_socle_degree(g: int, expected: Fraction):
    top = TautClass.monomial(g, *range(1, g + 1))
    assert socle_degree(top) == expected


def test_socle_degree_of_lambda1_powers():
    assert socle_degree(TautClass.zero(4)) == 0
    by_order = [
        socle_degree(reduce(3, {(6, 0, 0): 1}, order))
        for order in ("ascending", "descending")
    ]
    assert by_order[0] == by_order[1]
    # lambda_1^6 = 8 lambda_1 lambda_3 lambda_1^2 = 16 lambda_1 lambda_2 lambda_3
    assert by_order[0] == 16 * Fraction(1, 2903040)
    with pytest.raises(ValueError):
        _ = socle_degree(TautClass.monomial(3, 1, 2))


@pytest.mark.parametrize("g", range(1, 6))
def test_gorenstein(g: int):
    assert is_gorenstein(g)


@pytest.mark.parametrize("g", range(1, 7))
def test_defining_relation(g: int):
    assert defining_relation_holds(g)


def test_grading():
    c = TautClass.one(3) + lambda_class(3, 1) + lambda_class(3, 1, 1)
    assert not c.is_homogeneous()
    assert sorted(c.grading()) == [0, 1, 2]
    assert c.degree is None
    assert lambda_class(3, 2, 1).degree == 3
    assert str(c) == "1 + λ1 + 2*λ2"


def test_reduction_memo_is_bounded():
    assert _memo(3, "ascending") is _memo(3, "ascending")
    assert _memo(3, "ascending") is not _memo(3, "descending")
    assert _memo.cache_info().maxsize == 32
