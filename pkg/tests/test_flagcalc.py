from typing import Mapping

import pytest

from sslocus.core.common import (
    ExceptionalClassError,
    GenusError,
    InconsistentSystemError,
    Monomial,
)
from sslocus.core import flagcalc
from sslocus.core.exactpoly import P, RatFn
from sslocus.core.flagcalc import (
    DIRECT_EXPANSION,
    FINAL_COMBINATION,
    HALF_U4_COMBINATION,
    UNKNOWNS,
    EllClass,
    RelationSystem,
    chern_hodge_g4,
    combined_relation,
    crosscheck_printed_g4,
    degree_vector,
    dpsi_class,
    ells,
    f4,
    fibre_degree,
    g3_chain,
    hodge_lambda_g4,
    lambda1_fourth_check,
    monomial_name,
    one_unknown_solution,
    positivity_bound,
    relation_system_g4,
    solved_vector_closed_form,
    vanishing_reduce,
)
from sslocus.core.strata import ss_class

U = P - 1
R = P * P - P + 1
K = P * (P * P + 1)


def test_solution_vector(solution_g4: Mapping[Monomial, RatFn]):
    expected = [K * R, -K * R, -K * U * U, K * R, K * P]
    assert [solution_g4[m] for m in UNKNOWNS] == [RatFn(e) for e in expected]
    assert dict(solution_g4) == solved_vector_closed_form()


@pytest.mark.parametrize(
    "monomial,at_2,at_3",
    [
        ((3, 1, 0), 30, 210),
        ((3, 0, 1), -30, -210),
        ((1, 3, 0), -10, -120),
        ((1, 2, 1), 30, 210),
        ((1, 1, 2), 20, 90),
    ],
)
def test_solution_at_small_primes(
    solution_g4: Mapping[Monomial, RatFn], monomial: Monomial, at_2: int, at_3: int
):
    assert solution_g4[monomial].eval(2) == at_2
    assert solution_g4[monomial].eval(3) == at_3


def test_relation_system():
    system = relation_system_g4()
    assert system.rank() == len(UNKNOWNS)
    assert system.rank(homogeneous_only=True) == len(UNKNOWNS) - 1
    assert sum(e.derived for e in system.equations) == 4
    assert len(system.equations) == 9
    assert not any(system.residuals(system.solve()).values())


def test_select_drops_a_family():
    system = relation_system_g4().select(exclude=["final_stone"])
    assert isinstance(system, RelationSystem)
    assert all(e.key != "final_stone" for e in system.equations)
    assert system.rank() == len(UNKNOWNS) - 1


def test_combined_relation():
    expected = (2 * P, 0, 0, 0, -2 * R)
    assert combined_relation() == tuple(RatFn.coerce(x) for x in expected)


def test_one_unknown_solution(solution_g4: Mapping[Monomial, RatFn]):
    affine = one_unknown_solution()
    x = solution_g4[(1, 2, 1)]
    assert affine.at(x) == dict(solution_g4)
    assert affine.slope[(1, 2, 1)] == 1


def test_positivity_bound():
    bound = positivity_bound()
    assert bound.matches_closed_form
    assert bound.threshold == K * U * U
    assert all(bound.holds_at(p) for p in (2, 3, 5, 7))


def test_lambda1_fourth():
    check = lambda1_fourth_check()
    assert check.holds
    assert check.degree_lambda1_fourth == 8 * check.degree_lambda3_lambda1


def test_hodge_classes_on_f0():
    lambda1 = chern_hodge_g4().degree_part(1)
    assert str(lambda1) == "(p - 1)*l2 + (p - 1)*l1 + (p - 1)*l0"
    assert hodge_lambda_g4(0) == EllClass.one(4)
    assert not chern_hodge_g4().degree_part(5)


def test_crosscheck():
    crosscheck = crosscheck_printed_g4()
    printed = P * U**4 * (P * P + P + 1) * (P * P + 1)
    assert crosscheck.printed_value == RatFn(printed)
    assert crosscheck.values[HALF_U4_COMBINATION] == RatFn(printed)
    assert crosscheck.values[DIRECT_EXPANSION] == RatFn(printed)
    assert crosscheck.values[FINAL_COMBINATION] == RatFn(
        2 * P * (P * P + 1) * U * U * (P * P + P + 1)
    )
    assert crosscheck.values[FINAL_COMBINATION].eval(2) == 140
    assert crosscheck.printed_value.eval(2) == 70
    assert not crosscheck.final_matches_printed

    verdicts = {(v.first, v.second): v for v in crosscheck.pairs}
    agreeing = verdicts[(HALF_U4_COMBINATION, DIRECT_EXPANSION)]
    assert agreeing.agree
    assert agreeing.in_relation_span
    for key in [
        (HALF_U4_COMBINATION, FINAL_COMBINATION),
        (FINAL_COMBINATION, DIRECT_EXPANSION),
    ]:
        assert not verdicts[key].agree
        assert not verdicts[key].in_relation_span

    assert len(crosscheck.findings()) == 3


def test_f4():
    derivation = f4()
    assert derivation.result == ss_class(4).coefficient
    assert derivation.result.eval(2) == 6615
    first_line = derivation.format().splitlines()[0]
    assert first_line == "f_4 = (p - 1)^3 (p^3 - 1) (p^4 - 1) (p^6 - 1)"
    assert dict(derivation.steps)["deg lambda_3 lambda_1 on S"] == str(
        U**4 * (P * P + P + 1) * (P * P + 1)
    )


def test_g3_chain():
    chain = g3_chain()
    assert chain.f3 == ss_class(3).coefficient
    assert chain.f3.eval(3) == 8320
    assert chain.deg_lambda2.expand() == (P + 1) * U * U
    assert chain.section_self_intersection == -2 * (P + 1)
    assert chain.l0_squared_coefficient
    assert chain.derivation.name == "f_3"


def test_g3_chain_needs_nonzero_l0_squared(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setattr(flagcalc, "chern_hodge_g3", lambda: EllClass.one(3))
    with pytest.raises(InconsistentSystemError):
        _ = flagcalc.g3_chain.__wrapped__()


def test_dpsi_fibre_degree():
    assert fibre_degree(dpsi_class()) == P
    with pytest.raises(ValueError):
        _ = fibre_degree(ells()[0])


def test_exceptional_class_is_not_multiplied():
    l0 = ells()[0]
    with pytest.raises(ExceptionalClassError):
        _ = dpsi_class() * l0

    assert dpsi_class().without_exceptional() * l0


def test_truncation():
    l0, l1, l2 = ells()
    assert not l0**5
    assert degree_vector(l0**4) == (RatFn.coerce(0),) * 5
    assert not vanishing_reduce(l2**3 * l0)
    unit = tuple(RatFn.coerce(int(m == (3, 1, 0))) for m in UNKNOWNS)
    assert degree_vector(l0**3 * l1) == unit

    a, b = ells(3)
    assert not b * b
    assert a * b


def test_genus_contexts():
    with pytest.raises(GenusError):
        _ = EllClass.one(5)

    with pytest.raises(ValueError):
        _ = EllClass.ell(3, 2)

    with pytest.raises(GenusError):
        _ = vanishing_reduce(EllClass.one(3))

    with pytest.raises(GenusError):
        _ = EllClass.one(3) + EllClass.one(4)


@pytest.mark.parametrize(
    "monomial,name",
    [((3, 1, 0), "l0^3*l1"), ((1, 1, 2), "l0*l1*l2^2"), ((0, 0, 0), "1")],
)
def test_monomial_name(monomial: Monomial, name: str):
    assert monomial_name(monomial) == name


def test_inconsistent_system_error_is_arithmetic():
    assert issubclass(InconsistentSystemError, ArithmeticError)
