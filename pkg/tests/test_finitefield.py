from itertools import product
from typing import Optional

import numpy as np
import pytest

from sslocus.core.common import BudgetExceededError
from sslocus.core.finitefield import (
    Fq,
    Point,
    all_f_p2_points_on_F2,
    analyze_fiber_curve,
    check_sample,
    count_F2_surface,
    count_fermat_curve,
    count_G1_surface,
    count_isotropic,
    count_projective,
    count_quadric_Q,
    echelon_bases,
    flag_equations,
    gaussian_binomial,
    get_field,
    is_irreducible,
    jacobian_rank_samples,
    lowest_irreducible,
    projective_blocks,
    projective_size,
    quadric_shape,
    sample_flag_point,
    superspecial_fibre_count,
    surface_symmetries,
)


def test_lowest_irreducible():
    assert lowest_irreducible(2, 4) == (1, 1, 0, 0, 1)
    assert lowest_irreducible(3, 2) == (1, 0, 1)
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)
    with pytest.raises(ValueError):
        _ = lowest_irreducible(4, 2)

    with pytest.raises(ValueError):
        _ = lowest_irreducible(2, 0)


def test_field_too_large():
    with pytest.raises(ValueError):
        _ = Fq(2, 21)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 4), (3, 2), (5, 2), (3, 4)])
def test_field_axioms(p: int, m: int):
    field = get_field(p, m)
    rng = np.random.default_rng(p * 10 + m)
    a, b, c = (field.random(rng, 200) for _ in range(3))
    assert np.all(field.mul(a, field.mul(b, c)) == field.mul(field.mul(a, b), c))
    assert np.all(
        field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
    )
    assert np.all(field.sub(field.add(a, b), b) == a)
    assert np.all(field.add(a, field.neg(a)) == 0)

    nonzero = field.random(rng, 200, nonzero=True)
    assert np.all(field.mul(nonzero, field.inv(nonzero)) == 1)
    assert np.all(field.div(a, nonzero) == field.mul(a, field.pow(nonzero, -1)))
    assert np.all(field.frobenius(a, m) == a)
    assert np.all(field.frobenius(field.nth_root_p(a), 1) == a)
    assert np.all(field.pow(a, 0) == 1)
    assert np.all(field.pow(nonzero, field.order - 1) == 1)


def test_field_elements(f16: Fq):
    assert f16.order == 16
    assert len(f16.elements()) == 16
    assert int(np.count_nonzero(f16.in_subfield(f16.elements(), 2))) == 4
    assert int(np.count_nonzero(f16.in_subfield(f16.elements(), 1))) == 2
    with pytest.raises(ValueError):
        _ = f16.in_subfield(3, 3)

    with pytest.raises(ZeroDivisionError):
        _ = f16.inv(0)

    g = f16.primitive_element
    powers = {int(f16.pow(g, k)) for k in range(15)}
    assert len(powers) == 15
    assert f16.from_coefficients(f16.coefficients(11)) == 11
    assert f16.scalar(5) == 1


def test_field_rank(f16: Fq):
    assert f16.rank([[1, 2, 3], [2, 4, 6]]) == f16.rank([[1, 2, 3]])
    a = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    assert f16.rank(a) == 2
    b = f16.mul(7, a[0])
    assert f16.rank(np.stack([a[0], b])) == 1


@pytest.mark.parametrize(
    "p,m,n", [(p, m, n) for (p, m), n in product([(2, 1), (2, 2), (3, 1)], [1, 2, 3])]
)
def test_projective_blocks(p: int, m: int, n: int):
    field = get_field(p, m)
    forward = np.concatenate(list(projective_blocks(field, n)))
    backward = np.concatenate(list(projective_blocks(field, n, reverse=True)))
    assert len(forward) == projective_size(field.order, n)
    assert {tuple(x) for x in forward} == {tuple(x) for x in backward}
    # the first nonzero coordinate is 1
    lead = forward[np.arange(len(forward)), np.argmax(forward != 0, axis=1)]
    assert np.all(lead == 1)


@pytest.mark.parametrize("p,expected", [(2, 9), (3, 28), (5, 126)])
def test_fermat_curve(p: int, expected: int):
    assert count_fermat_curve(p) == expected == p**3 + 1
    assert count_fermat_curve(p, reverse=True) == expected


def test_superspecial_fibre_count():
    assert superspecial_fibre_count(2) == 45
    assert superspecial_fibre_count(3) == 28 * 10


@pytest.mark.parametrize("p,f2,g1", [(2, 85, 45), (3, 820, 280)])
def test_surfaces(p: int, f2: int, g1: int):
    assert count_F2_surface(p) == f2
    assert count_G1_surface(p) == g1
    assert count_G1_surface(p, reverse=True) == g1
    for permutation in surface_symmetries():
        assert count_G1_surface(p, permutation=permutation) == g1

    assert all_f_p2_points_on_F2(p)


def test_budget():
    with pytest.raises(BudgetExceededError):
        _ = count_fermat_curve(2, budget=20)

    assert count_fermat_curve(2, budget=21) == 9
    with pytest.raises(BudgetExceededError):
        _ = count_isotropic("symplectic", 4, 2, 2, budget=10)


def test_count_projective_everything(f16: Fq):
    assert count_projective(f16, 2, lambda x: np.ones(len(x), dtype=bool)) == 273


@pytest.mark.parametrize(
    "n,k,p,m", [(4, 2, 2, 1), (4, 1, 2, 2), (5, 2, 3, 1), (3, 3, 7, 1)]
)
def test_echelon_bases_cover_grassmannian(n: int, k: int, p: int, m: int):
    field = get_field(p, m)
    bases = list(echelon_bases(field, n, k))
    assert sum(len(b) for b in bases) == gaussian_binomial(n, k, field.order)
    for b in bases[:3]:
        assert all(field.rank(x) == k for x in b[:20])


@pytest.mark.parametrize("p,planes", [(2, 27), (3, 112)])
def test_hermitian_planes(p: int, planes: int):
    assert count_isotropic("hermitian", 4, 2, p) == planes == (p**3 + 1) * (p + 1)


@pytest.mark.parametrize("p", [2, 3])
def test_hermitian_lines(p: int):
    assert count_isotropic("hermitian", 4, 1, p) == (p**2 + 1) * (p**3 + 1)
    # with x -> x^(p^2) the form is alternating: every line is isotropic
    lines = count_isotropic("hermitian", 4, 1, p, conjugation_power=2)
    assert lines == count_F2_surface(p)


@pytest.mark.parametrize("p", [2, 3])
def test_symplectic_planes(p: int):
    q = p**2
    assert count_isotropic("symplectic", 4, 2, p) == (q + 1) * (q**2 + 1)


def test_isotropic_dimensions():
    with pytest.raises(ValueError):
        _ = count_isotropic("symplectic", 3, 1, 2)

    with pytest.raises(ValueError):
        _ = count_isotropic("symplectic", 4, 0, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_quadric(p: int):
    result = count_quadric_Q(p)
    q = p**2
    assert result.shape == "smooth"
    assert result.count == (q + 1) * (q**2 + 1)
    assert result.count == count_isotropic("symplectic", 4, 2, p)
    assert result.count <= result.grassmannian_count


def test_quadric_values_at_2():
    result = count_quadric_Q(2)
    assert (result.count, result.grassmannian_count) == (85, 357)


@pytest.mark.parametrize(
    "count,q,shape",
    [
        (85, 4, "smooth"),
        (1 + 4 * 25, 4, "cone_hyperbolic"),
        (1 + 4 * 17, 4, "cone_elliptic"),
        (7, 4, "other"),
    ],
)
def test_quadric_shape(count: int, q: int, shape: str):
    assert quadric_shape(count, q) == shape


@pytest.mark.parametrize("p", [2, 3])
def test_fiber_curve_rational(p: int):
    field = get_field(p, 4)
    result = analyze_fiber_curve(field, 1)
    assert result.on_line
    assert result.count == p**5 + 1
    assert result.lines == p
    assert result.singular_points == (result.cusp,)
    assert result.cusp == (0, 1, int(field.neg(1)))


@pytest.mark.parametrize("p", [2, 3])
def test_fiber_curve_generic(p: int):
    field = get_field(p, 4)
    elements = field.elements()
    a2 = int(elements[~field.in_subfield(elements, 2)][0])
    result = analyze_fiber_curve(field, a2)
    assert not result.on_line
    assert result.count == p**4 + 1
    assert result.lines == 0
    if p == 2:
        assert result.singular_points == ()
    else:
        assert result.singular_points == (result.cusp,)


def test_fiber_curve_needs_even_degree():
    with pytest.raises(ValueError):
        _ = analyze_fiber_curve(get_field(2, 3), 1)


def _sample(field: Fq, chart: int, seed: int) -> Point:
    rng = np.random.default_rng(seed)
    point: Optional[Point] = None
    while point is None:
        point = sample_flag_point(field, chart, rng)

    return point


@pytest.mark.parametrize("chart", [1, 2])
def test_sampled_points_lie_on_f0(f16: Fq, chart: int):
    for seed in range(10):
        point = _sample(f16, chart, seed)
        assert check_sample(f16, point, chart) is None
        assert flag_equations(f16, point) == (0, 0, 0, 0)


def test_check_sample_rejects(f16: Fq):
    point = _sample(f16, 1, 0)
    assert check_sample(f16, {**point, 9: 0}, 1) == "chart 1 requires a9 = 1"
    assert check_sample(f16, point, 2) is not None
    moved = {**point, 11: int(f16.add(point[11], 1))}
    assert check_sample(f16, moved, 1) == "not on F0"


@pytest.mark.parametrize("p", [2, 3])
def test_jacobian_rank(p: int):
    report = jacobian_rank_samples(p, trials=100, seed=0)
    assert report.passed, report
    assert [c.chart for c in report.charts] == [1, 2]
    assert all(c.samples == 100 and c.witness is None for c in report.charts)
