import random
from fractions import Fraction

import pytest
import sympy

from sslocus.core.common import InconsistentSystemError
from sslocus.core.exactpoly import (
    P,
    FactoredPPoly,
    PPoly,
    RatFn,
    bernoulli,
    in_row_span,
    p_power,
    ppoly_gcd,
    proportionality_v,
    rational_rank,
    solve_linear,
    zeta_neg,
)


def _random_ppoly(rng: random.Random) -> PPoly:
    return PPoly(
        Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        for _ in range(rng.randint(0, 6))
    )


@pytest.mark.parametrize(
    "f,p0,expected",
    [
        (P - 1, 2, 1),
        ((p_power(2, -1) * p_power(6, -1)), 2, 189),
        (PPoly(), 7, 0),
    ],
)
def test_eval(f: PPoly, p0: int, expected: int):
    assert f.eval(p0) == expected


def test_canonical_coefficients():
    assert PPoly((1, 2, 0, 0)).coefficients == (1, 2)
    assert PPoly((0, 0)).coefficients == ()
    assert PPoly().degree == -1
    assert str(PPoly()) == "0"
    assert str(2 * P - 1) == "2*p - 1"
    assert str(-(P**3) + P) == "-p^3 + p"


def test_eval_is_multiplicative():
    rng = random.Random(0)
    for _ in range(20):
        f, g = _random_ppoly(rng), _random_ppoly(rng)
        p0 = rng.randint(-10, 10)
        assert (f * g).eval(p0) == f.eval(p0) * g.eval(p0)


def test_expand_matches_sympy():
    p = sympy.Symbol("p")
    factored = FactoredPPoly.of(
        (P - 1, 3), P**3 - 1, P**4 - 1, P**6 - 1, scalar=Fraction(1, 2)
    )
    oracle = sympy.Poly(
        sympy.Rational(1, 2) * (p - 1) ** 3 * (p**3 - 1) * (p**4 - 1) * (p**6 - 1), p
    )
    expanded = factored.expand()
    assert expanded.degree == oracle.degree()
    for (k,), c in oracle.terms():
        assert expanded.coefficients[k] == Fraction(str(c))


def test_expand_commutes_with_eval():
    rng = random.Random(1)
    factored = FactoredPPoly.of((P + 1, 2), P**2 + 1, (P**3 - 1, 3), scalar=-3)
    for _ in range(10):
        p0 = rng.randint(-20, 20)
        assert factored.expand().eval(p0) == factored.eval(p0)


def test_factored_str():
    assert str(FactoredPPoly.of((P - 1, 3), P**3 - 1)) == "(p - 1)^3 (p^3 - 1)"
    assert str(FactoredPPoly()) == "1"


def test_divmod():
    a = (P**2 + 1) * (P - 3) + 5
    q, r = divmod(a, P**2 + 1)
    assert q == P - 3
    assert r == 5
    with pytest.raises(ZeroDivisionError):
        _ = divmod(a, PPoly())


def test_gcd_is_monic():
    assert ppoly_gcd(2 * (P - 1) * (P + 2), 3 * (P - 1) * (P + 5)) == P - 1
    assert ppoly_gcd(P**2 + 1, P + 1) == 1


def test_ratfn_canonical():
    rng = random.Random(2)
    base = RatFn(P**2 - 1, 2 * P + 2)
    assert base.numerator == Fraction(1, 2) * (P - 1)
    assert base.denominator == 1
    assert base.is_polynomial()

    num, den = P**3 + 2, 3 * P**2 - P
    reference = RatFn(num, den)
    assert reference.denominator.leading_coefficient == 1
    for _ in range(10):
        h = _random_ppoly(rng)
        if not h:
            continue
        scaled = RatFn(num * h, den * h)
        assert (scaled.numerator, scaled.denominator) == (
            reference.numerator,
            reference.denominator,
        )


def test_ratfn_arithmetic():
    x = RatFn(P + 1, P**2 + 1)
    y = RatFn(P - 1, P**2 + 1)
    assert x + y == RatFn(2 * P, P**2 + 1)
    assert x / x == 1
    assert (x * y).eval(2) == Fraction(3, 25)
    assert x**-1 == RatFn(P**2 + 1, P + 1)
    with pytest.raises(ZeroDivisionError):
        _ = RatFn(P, PPoly())

    with pytest.raises(ZeroDivisionError):
        _ = RatFn(P, P - 2).eval(2)

    with pytest.raises(ValueError):
        _ = x.to_ppoly()


@pytest.mark.parametrize(
    "n,expected",
    [(2, Fraction(1, 6)), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))],
)
def test_bernoulli(n: int, expected: Fraction):
    assert bernoulli(n) == expected


@pytest.mark.parametrize("n", range(2, 31, 2))
def test_bernoulli_against_sympy(n: int):
    b = sympy.bernoulli(n)
    assert bernoulli(n) == Fraction(str(b))


@pytest.mark.parametrize("n", [-2, 0, 1, 3])
def test_bernoulli_rejects(n: int):
    with pytest.raises(ValueError):
        _ = bernoulli(n)


@pytest.mark.parametrize(
    "k,expected",
    [(1, Fraction(-1, 12)), (2, Fraction(1, 120)), (3, Fraction(-1, 252))],
)
def test_zeta_neg(k: int, expected: Fraction):
    assert zeta_neg(k) == expected


@pytest.mark.parametrize(
    "g,expected",
    [
        (0, Fraction(1)),
        (1, Fraction(1, 24)),
        (2, Fraction(1, 5760)),
        (3, Fraction(1, 2903040)),
        (4, Fraction(1, 1393459200)),
    ],
)
def test_proportionality_v(g: int, expected: Fraction):
    assert proportionality_v(g) == expected


def test_linear_algebra_over_rational_functions():
    rows = [[P, 1], [1, P]]
    x, y = solve_linear(rows, [P + 1, P + 1])
    assert x == 1
    assert y == 1
    assert rational_rank([[P, 1], [P**2, P]]) == 1
    assert in_row_span([[P, 1]], [P**2, P])
    assert not in_row_span([[P, 1]], [1, P])


def test_solve_linear_errors():
    with pytest.raises(InconsistentSystemError):
        _ = solve_linear([[1, 1], [1, 1]], [1, 2])

    with pytest.raises(InconsistentSystemError):
        _ = solve_linear([[1, 1], [2, 2]], [1, 2])
