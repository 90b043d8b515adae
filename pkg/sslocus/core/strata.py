"""Closed-form cycle classes and counts of supersingular strata.

All counts are masses: each object is weighted by 1/#Aut, so the numbers of
components N_g come multiplied by the proportionality constant v(g).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Sequence

from loguru import logger

from .common import GenusError, InconsistentSystemError
from .exactpoly import P, FactoredPPoly, PPoly, RatFn, p_power, proportionality_v
from .tautring import TautClass, socle_degree


@dataclass(frozen=True)
class StratumClass:
    """coefficient times a single square-free lambda monomial"""

    g: int
    coefficient: FactoredPPoly
    monomial: TautClass

    def __post_init__(self):
        assert len(self.monomial.terms) == 1, self.monomial
        assert self.monomial.g == self.g

    @property
    def codimension(self) -> int:
        degree = self.monomial.degree
        assert degree is not None
        return degree

    def evaluate(self, p0: int) -> Fraction:
        return self.coefficient.eval(p0)

    def __str__(self):
        return f"{self.coefficient} {self.monomial}"


@dataclass(frozen=True)
class CountIdentity:
    name: str
    lhs: FactoredPPoly
    rhs: FactoredPPoly

    def holds(self) -> bool:
        return self.lhs.expand() == self.rhs.expand()

    def holds_at(self, p0: int) -> bool:
        return self.lhs.eval(p0) == self.rhs.eval(p0)

    def __str__(self):
        return f"{self.name}: {self.lhs} = {self.rhs}"


class IdentityEvaluation(NamedTuple):
    name: str
    p: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _check_genus(g: int, low: int = 1, high: int = 64):
    if not low <= g <= high:
        raise GenusError(f"expected {low} <= g <= {high}, got g={g}")


def ss_class_shape(g: int) -> TautClass:
    """lambda_g lambda_{g-2} ... ending in lambda_1 (g odd) or lambda_2 (g even)"""
    _check_genus(g)
    return TautClass.monomial(g, *range(g, 0, -2))


def complementary_monomial(g: int) -> TautClass:
    """lambda_{g-1} lambda_{g-3} ...

    the complement of `ss_class_shape(g)` in the socle
    """
    _check_genus(g, 2)
    return TautClass.monomial(g, *range(g - 1, 0, -2))


_P_MINUS_1 = p_power(1, -1)


def _ss_coefficient(g: int) -> FactoredPPoly:
    if g == 1:
        return FactoredPPoly.of(_P_MINUS_1)
    elif g == 2:
        return FactoredPPoly.of(_P_MINUS_1, p_power(2, -1))
    elif g == 3:
        return FactoredPPoly.of((_P_MINUS_1, 2), p_power(3, -1), p_power(4, -1))
    elif g == 4:
        return FactoredPPoly.of(
            (_P_MINUS_1, 3), p_power(3, -1), p_power(4, -1), p_power(6, -1)
        )
    else:
        raise GenusError(
            f"the class of the supersingular locus is known for g <= 4, not g={g}"
        )


def ss_class(g: int) -> StratumClass:
    """[S_g] = f_g(p) times `ss_class_shape(g)` for g <= 4

    >>> str(ss_class(2))
    '(p - 1) (p^2 - 1) λ2'
    """
    _check_genus(g, 1, 4)
    return StratumClass(g, _ss_coefficient(g), ss_class_shape(g))


def eo_prank_class(g: int, f: int) -> StratumClass:
    """class of the p-rank <= f locus: (p - 1)(p^2 - 1)...(p^{g-f} - 1) lambda_{g-f}"""
    _check_genus(g)
    if not 0 <= f <= g:
        raise ValueError(f"expected 0 <= f <= {g}, got f={f}")

    codim = g - f
    coefficient = FactoredPPoly.of(*(p_power(i, -1) for i in range(1, codim + 1)))
    monomial = TautClass.one(g) if codim == 0 else TautClass.monomial(g, codim)
    return StratumClass(g, coefficient, monomial)


def superspecial_mass(g: int) -> FactoredPPoly:
    """(p - 1)(p^2 + 1)...(p^g + (-1)^g) v(g), the degree of the superspecial locus

    >>> superspecial_mass(1).eval(2)
    Fraction(1, 24)
    """
    _check_genus(g)
    return FactoredPPoly.of(
        *(p_power(i, (-1) ** i) for i in range(1, g + 1)),
        scalar=proportionality_v(g),
    )


def component_count_N(g: int) -> FactoredPPoly:
    """mass N_g of the irreducible components of the supersingular locus"""
    _check_genus(g)
    if g % 2:
        return superspecial_mass(g)

    return FactoredPPoly.of(
        *(p_power(4 * i - 2, -1) for i in range(1, g // 2 + 1)),
        scalar=proportionality_v(g),
    )


def correction_factor(g: int) -> RatFn:
    """prod (p^{2i-1} + 1) / prod (p^{2i} + 1), i = 1..g/2, turning the mass into N_g"""
    _check_genus(g)
    if g % 2:
        raise GenusError(f"the correction factor exists for even g only, got g={g}")

    num = PPoly.constant(1)
    den = PPoly.constant(1)
    for i in range(1, g // 2 + 1):
        num = num * p_power(2 * i - 1, 1)
        den = den * p_power(2 * i, 1)

    return RatFn(num, den)


def lambda_degree_on_component(g: int) -> FactoredPPoly:
    """deg of the complementary monomial on one irreducible component"""
    if g == 3:
        # deg lambda_2
        return FactoredPPoly.of(p_power(1, 1), (_P_MINUS_1, 2))
    elif g == 4:
        # deg lambda_3 lambda_1
        return FactoredPPoly.of((_P_MINUS_1, 4), P * P + P + 1, p_power(2, 1))
    else:
        raise GenusError(f"expected g in (3, 4), got g={g}")


def superspecial_point_counts(g: int) -> Dict[str, FactoredPPoly]:
    """numbers of F_{p^2}-points of the fibres over a superspecial point"""
    if g == 3:
        return {"F0": FactoredPPoly.of(p_power(3, 1), p_power(2, 1))}
    elif g == 4:
        return {
            "F0": FactoredPPoly.of((p_power(2, 1), 3), p_power(3, 1), p_power(4, 1)),
            "G0": FactoredPPoly.of((p_power(2, 1), 2), p_power(3, 1)),
        }
    else:
        raise GenusError(f"expected g in (3, 4), got g={g}")


@dataclass(frozen=True)
class ANumberLocus:
    """the loci with a-number >= 2 in genus 3"""

    v32_class: StratumClass
    """class of the closure of V_[3,2]"""
    m32: FactoredPPoly
    """mass of the irreducible components of V_[3,2]"""
    v321_degree: FactoredPPoly
    """degree of the superspecial locus V_[3,2,1]"""


def a_number_locus_g3() -> ANumberLocus:
    v32 = StratumClass(
        3,
        FactoredPPoly.of((_P_MINUS_1, 2), p_power(6, -1)),
        TautClass.monomial(3, 2, 3),
    )
    # deg([V_32] lambda_1) / (p - 1)
    socle = socle_degree(v32.monomial * TautClass.monomial(3, 1))
    assert isinstance(socle, Fraction)
    m32 = FactoredPPoly.of(_P_MINUS_1, p_power(6, -1), scalar=socle)
    return ANumberLocus(v32, m32, superspecial_mass(3))


def _socle_identity(g: int) -> CountIdentity:
    ss = ss_class(g)
    socle = socle_degree(ss.monomial * complementary_monomial(g))
    assert isinstance(socle, Fraction)
    return CountIdentity(
        f"deg [S_{g}] {complementary_monomial(g)} = deg on a component * N_{g}",
        ss.coefficient * socle,
        lambda_degree_on_component(g) * component_count_N(g),
    )


def consistency_identities(g: int) -> List[CountIdentity]:
    """the counting identities for g in (3, 4); each one is verified

    Raises:
        InconsistentSystemError: an identity does not expand to equal polynomials
    """
    if g == 3:
        v = proportionality_v(3)
        locus = a_number_locus_g3()
        identities = [
            CountIdentity(
                "m_32 (p^2 + 1) = deg V_321 (p^3 + 1)",
                locus.m32 * FactoredPPoly.of(p_power(2, 1)),
                locus.v321_degree * FactoredPPoly.of(p_power(3, 1)),
            ),
            CountIdentity(
                "N_3 (p^3 + 1)(p^2 + 1) = deg V_321 #F0",
                component_count_N(3) * FactoredPPoly.of(p_power(3, 1), p_power(2, 1)),
                locus.v321_degree * superspecial_point_counts(3)["F0"],
            ),
            CountIdentity(
                "m_32 = (p - 1)(p^6 - 1) v(3)",
                locus.m32,
                FactoredPPoly.of(_P_MINUS_1, p_power(6, -1), scalar=v),
            ),
            CountIdentity(
                "(p - 1) m_32 = coefficient of [V_32]",
                locus.m32 * FactoredPPoly.of(_P_MINUS_1),
                locus.v32_class.coefficient * v,
            ),
            _socle_identity(3),
        ]
    elif g == 4:
        counts = superspecial_point_counts(4)
        sigma = superspecial_mass(4)
        identities = [
            CountIdentity(
                "N_4 (p^2 + 1)^3 (p^3 + 1)(p^4 + 1)"
                + " = Sigma_4 (p + 1)(p^2 + 1)^2 (p^3 + 1)^2",
                component_count_N(4) * counts["F0"],
                sigma
                * FactoredPPoly.of(
                    p_power(1, 1), (p_power(2, 1), 2), (p_power(3, 1), 2)
                ),
            ),
            CountIdentity(
                "N_4 (p^2 + 1)(p^4 + 1) = Sigma_4 (p + 1)(p^3 + 1)",
                component_count_N(4) * FactoredPPoly.of(p_power(2, 1), p_power(4, 1)),
                sigma * FactoredPPoly.of(p_power(1, 1), p_power(3, 1)),
            ),
            CountIdentity(
                "#F0 = (p^2 + 1)(p^4 + 1) #G0",
                counts["F0"],
                counts["G0"] * FactoredPPoly.of(p_power(2, 1), p_power(4, 1)),
            ),
            _socle_identity(4),
        ]
    else:
        raise GenusError(f"consistency identities exist for g in (3, 4), got g={g}")

    for identity in identities:
        if not identity.holds():
            raise InconsistentSystemError(f"identity does not hold: {identity}")

        logger.debug("identity holds: {}", identity.name)

    return identities


def evaluate_identities(
    identities: Sequence[CountIdentity], primes: Sequence[int] = (2, 3, 5)
) -> List[IdentityEvaluation]:
    """both sides of every identity evaluated at every prime"""
    return [
        IdentityEvaluation(
            identity.name, p0, identity.lhs.eval(p0), identity.rhs.eval(p0)
        )
        for identity in identities
        for p0 in primes
    ]


def mass_correction_holds(g: int) -> bool:
    """superspecial_mass(g) * correction_factor(g) = component_count_N(g) in Q(p)"""
    lhs = superspecial_mass(g).expand() * correction_factor(g)
    return lhs == RatFn(component_count_N(g).expand())
