"""Intersection numbers on the flag-type models of supersingular components.

Classes are polynomials in l0 = c1(Q0), l1 = c1(Q1), l2 = c1(Q2) with coefficients
in Q(p), truncated above the dimension of the model (4 for g=4, 2 for g=3).
For g=4 the Chern classes of the Hodge bundle are expanded, a relation system is
derived and solved for the five surviving degree-4 monomials, and the class of
the supersingular locus is recovered from deg(lambda_3 lambda_1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from loguru import logger

from .common import (
    ExceptionalClassError,
    Frozen,
    GenusError,
    InconsistentSystemError,
    Monomial,
)
from .exactpoly import (
    P,
    FactoredPPoly,
    PPoly,
    RatFn,
    in_row_span,
    rational_rank,
    solve_linear,
)
from .strata import component_count_N, lambda_degree_on_component, ss_class

Scalar = Union[int, Fraction, PPoly, RatFn]

UNKNOWNS: Tuple[Monomial, ...] = ((3, 1, 0), (3, 0, 1), (1, 3, 0), (1, 2, 1), (1, 1, 2))
"""the degree-4 monomials l0^3 l1, l0^3 l2, l0 l1^3, l0 l1^2 l2, l0 l1 l2^2 that
survive on F0"""

_ZERO = RatFn(PPoly())
_p = RatFn(P)


def _dimension(genus_context: int) -> int:
    if genus_context == 4:
        return 4
    elif genus_context == 3:
        return 2
    else:
        raise GenusError(
            f"the l-calculus exists for g in (3, 4), got g={genus_context}"
        )


def _stored(genus_context: int, monomial: Monomial) -> bool:
    if sum(monomial) > _dimension(genus_context):
        return False

    if genus_context == 3:
        if monomial[2]:
            raise ValueError("there is no l2 in the g=3 calculus")

        # l1 lives on the Fermat curve
        return monomial[1] < 2

    return True


def monomial_name(monomial: Monomial) -> str:
    parts: List[str] = []
    for i, e in enumerate(monomial):
        if e == 1:
            parts.append(f"l{i}")
        elif e > 1:
            parts.append(f"l{i}^{e}")

    return "*".join(parts) or "1"


@dataclass(frozen=True, eq=False)
class EllClass:
    """a class in the l-calculus of genus 3 or 4

    `exceptional` is the coefficient of the exceptional marker e, a class supported
    on fibres that never enters monomial products."""

    genus_context: int
    terms: Mapping[Monomial, RatFn]
    exceptional: RatFn = field(default_factory=lambda: _ZERO)

    def __post_init__(self):
        ctx = self.genus_context
        terms = {
            m: RatFn.coerce(c)
            for m, c in sorted(self.terms.items())
            if c and _stored(ctx, m)
        }
        object.__setattr__(self, "terms", Frozen(terms))
        object.__setattr__(self, "exceptional", RatFn.coerce(self.exceptional))

    @classmethod
    def zero(cls, genus_context: int) -> EllClass:
        return cls(genus_context, {})

    @classmethod
    def one(cls, genus_context: int) -> EllClass:
        return cls(genus_context, {(0, 0, 0): 1})

    @classmethod
    def ell(cls, genus_context: int, i: int) -> EllClass:
        if not 0 <= i < (3 if genus_context == 4 else 2):
            raise ValueError(f"no l{i} for g={genus_context}")

        exponents = tuple(int(j == i) for j in range(3))
        return cls(genus_context, {exponents: 1})  # type: ignore

    @property
    def dimension(self) -> int:
        return _dimension(self.genus_context)

    def coefficient(self, monomial: Monomial) -> RatFn:
        return self.terms.get(monomial, _ZERO)

    def degree_part(self, degree: int) -> EllClass:
        return EllClass(
            self.genus_context,
            {m: c for m, c in self.terms.items() if sum(m) == degree},
        )

    def without_exceptional(self) -> EllClass:
        return EllClass(self.genus_context, self.terms)

    def _check_context(self, other: EllClass):
        if other.genus_context != self.genus_context:
            raise GenusError(
                f"cannot combine classes of g={self.genus_context}"
                + f" and g={other.genus_context}"
            )

    def __bool__(self):
        return bool(self.terms) or bool(self.exceptional)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EllClass):
            return NotImplemented

        return (
            self.genus_context == other.genus_context
            and dict(self.terms) == dict(other.terms)
            and self.exceptional == other.exceptional
        )

    def __neg__(self) -> EllClass:
        return EllClass(
            self.genus_context,
            {m: -c for m, c in self.terms.items()},
            -self.exceptional,
        )

    def __add__(self, other: EllClass) -> EllClass:
        self._check_context(other)
        terms: Dict[Monomial, RatFn] = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, _ZERO) + c

        return EllClass(
            self.genus_context, terms, self.exceptional + other.exceptional
        )

    def __sub__(self, other: EllClass) -> EllClass:
        return self + (-other)

    def __mul__(self, other: Union[EllClass, Scalar]) -> EllClass:
        if not isinstance(other, EllClass):
            if not isinstance(other, (int, Fraction, PPoly, RatFn)):
                return NotImplemented

            return EllClass(
                self.genus_context,
                {m: c * other for m, c in self.terms.items()},
                self.exceptional * other,
            )

        self._check_context(other)
        if self.exceptional or other.exceptional:
            raise ExceptionalClassError(
                "the exceptional class e does not enter monomial products;"
                + " drop it with `without_exceptional()`"
            )

        terms: Dict[Monomial, RatFn] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
                if _stored(self.genus_context, m):
                    terms[m] = terms.get(m, _ZERO) + ca * cb

        return EllClass(self.genus_context, terms)

    def __rmul__(self, other: Scalar) -> EllClass:
        return self * other

    def __pow__(self, exponent: int) -> EllClass:
        result = EllClass.one(self.genus_context)
        for _ in range(exponent):
            result = result * self

        return result

    def __str__(self) -> str:
        parts = [f"({c})*{monomial_name(m)}" for m, c in self.terms.items()]
        if self.exceptional:
            parts.append(f"({self.exceptional})*e")

        return " + ".join(parts) or "0"


def _inverse(x: EllClass) -> EllClass:
    """1/x for a class with constant term 1"""
    if x.coefficient((0, 0, 0)) != 1:
        raise ValueError(f"{x} is not invertible as a truncated power series")

    nilpotent = EllClass.one(x.genus_context) - x
    result = EllClass.one(x.genus_context)
    power = EllClass.one(x.genus_context)
    for _ in range(x.dimension):
        power = power * nilpotent
        result = result + power

    return result


def ells(genus_context: int = 4) -> Tuple[EllClass, ...]:
    return tuple(
        EllClass.ell(genus_context, i) for i in range(3 if genus_context == 4 else 2)
    )


def c2_q1() -> EllClass:
    """c2(Q1) = (l0^2 + l1^2 - l2^2) / 2"""
    a, b, c = ells()
    return (a * a + b * b - c * c) * Fraction(1, 2)


@lru_cache(maxsize=None)
def chern_hodge_g4() -> EllClass:
    """total Chern class of the Hodge bundle on F0

    (1 - l2)(1 + p l1 + p^2 c2)(1 + p l0) / [(1 - p l2)(1 + l1 + c2)(1 + l0)]

    >>> str(chern_hodge_g4().degree_part(1))
    '(p - 1)*l2 + (p - 1)*l1 + (p - 1)*l0'
    """
    a, b, c = ells()
    c2 = c2_q1()
    one = EllClass.one(4)
    numerator = (one - c) * (one + _p * b + _p * _p * c2) * (one + _p * a)
    denominator = (one - _p * c) * (one + b + c2) * (one + a)
    total = numerator * _inverse(denominator)
    logger.debug("c(E) on F0: {}", total)
    return total


def hodge_lambda_g4(i: int) -> EllClass:
    return chern_hodge_g4().degree_part(i)


def vanishing_reduce(c: EllClass) -> EllClass:
    """drop the monomials that vanish on F0

    l2^3 = 0 since l2 comes from the surface F2; in degree 4 every monomial with an
    even power of l0 is a pullback from the threefold F1 and vanishes."""
    if c.genus_context != 4:
        raise GenusError("vanishing_reduce applies to the g=4 calculus")

    return EllClass(
        4,
        {
            m: v
            for m, v in c.terms.items()
            if m[2] < 3 and not (sum(m) == 4 and m[0] % 2 == 0)
        },
        c.exceptional,
    )


def degree_vector(c: EllClass) -> Tuple[RatFn, ...]:
    """coefficients of the surviving degree-4 monomials of a g=4 class"""
    top = vanishing_reduce(c).degree_part(4)
    assert set(top.terms) <= set(UNKNOWNS), top
    return tuple(top.coefficient(m) for m in UNKNOWNS)


def evaluate_degree(
    c: Union[EllClass, Sequence[RatFn]], solution: Mapping[Monomial, RatFn]
) -> RatFn:
    row = degree_vector(c) if isinstance(c, EllClass) else c
    total = _ZERO
    for coeff, m in zip(row, UNKNOWNS):
        total = total + coeff * solution[m]

    return total


@dataclass(frozen=True)
class Relation:
    key: str
    """relation family; a derived row and its transcribed counterpart share the key"""
    provenance: str
    row: Tuple[RatFn, ...]
    rhs: RatFn = _ZERO
    derived: bool = False

    @property
    def homogeneous(self) -> bool:
        return not self.rhs


@dataclass(frozen=True)
class RelationSystem:
    unknowns: Tuple[Monomial, ...]
    equations: Tuple[Relation, ...]

    def select(self, exclude: Sequence[str] = ()) -> RelationSystem:
        return RelationSystem(
            self.unknowns, tuple(e for e in self.equations if e.key not in exclude)
        )

    def rows(self, homogeneous_only: bool = False) -> List[Tuple[RatFn, ...]]:
        return [
            e.row for e in self.equations if e.homogeneous or not homogeneous_only
        ]

    def rank(self, homogeneous_only: bool = False) -> int:
        return rational_rank(self.rows(homogeneous_only))

    def solve(self) -> Dict[Monomial, RatFn]:
        values = solve_linear(self.rows(), [e.rhs for e in self.equations])
        return {m: RatFn.coerce(v) for m, v in zip(self.unknowns, values)}

    def residuals(self, solution: Mapping[Monomial, RatFn]) -> Dict[str, RatFn]:
        return {
            e.provenance: evaluate_degree(e.row, solution) - e.rhs
            for e in self.equations
        }


def _row(*entries: Scalar) -> Tuple[RatFn, ...]:
    return tuple(RatFn.coerce(e) for e in entries)


def _transcribed_relations() -> List[Relation]:
    p = _p
    u = p - 1
    r = p * p - p + 1
    return [
        Relation(
            "lambda4",
            "lambda_4 vanishes on the supersingular locus",
            _row(p, -(p * p + 1), p, -(u * u), -(2 * p * p - p + 2)),
        ),
        Relation(
            "c3A",
            "third Chern class of the rank-3 quotient vanishes (times l0)",
            _row(2, -u, 0, u, -2 * r),
        ),
        Relation(
            "c2L",
            "hyperplane section class times c2 of the rank-2 sheaf (times l0)",
            _row(0, p, 0, -p, 2 * r),
        ),
        Relation(
            "final_stone",
            "(l0^2 + l1^2 - l2^2)(p l1 - (p^2 + 1) l2) = 0 (times l0)",
            _row(p, -(p * p + 1), p, -(p * p + 1), -p),
        ),
        Relation(
            "normalization",
            "deg l0 l1 l2^2 = p^2 (p^2 + 1)",
            _row(0, 0, 0, 0, 1),
            RatFn(P * P * (P * P + 1)),
        ),
    ]


def dpsi_class() -> EllClass:
    """class of the closure of the degeneracy locus of psi: p l1 - (p^2 + 1) l2 + e"""
    _, b, c = ells()
    return EllClass(4, (_p * b - (_p * _p + 1) * c).terms, exceptional=RatFn.coerce(1))


def fibre_degree(c: EllClass) -> RatFn:
    """degree of a divisor class on a reduced fibre of F1 -> F2 (l1 -> 1, l2 -> 0)"""
    part = c.degree_part(1)
    if part.coefficient((1, 0, 0)):
        raise ValueError("l0 does not live on F1")

    return part.coefficient((0, 1, 0))


def _derived_relations() -> List[Relation]:
    a, b, c = ells()
    one = EllClass.one(4)
    c2 = c2_q1()

    c_a = (one - c) * _inverse(one - _p * c) * _inverse(one + b + c2)
    c_l = (
        (one - _p * c)
        * _inverse(one - _p * _p * c)
        * _inverse(one - c)
        * _inverse(one + _p * b + _p * _p * c2)
    )
    return [
        Relation(
            "lambda4",
            "degree-4 part of c(E)",
            degree_vector(hodge_lambda_g4(4)),
            derived=True,
        ),
        Relation(
            "c3A",
            "c3 of (1 - l2)/((1 - p l2)(1 + l1 + c2)) times l0",
            degree_vector(c_a.degree_part(3) * a),
            derived=True,
        ),
        Relation(
            "c2L",
            "c2 of (1 - p l2)/((1 - p^2 l2)(1 - l2)(1 + p l1 + p^2 c2)) times l2 l0",
            degree_vector(c_l.degree_part(2) * c * a),
            derived=True,
        ),
        Relation(
            "final_stone",
            "2 c2(Q1) [D(psi)] without e, times l0",
            degree_vector(c2 * 2 * dpsi_class().without_exceptional() * a),
            derived=True,
        ),
    ]


def _proportional(u: Sequence[RatFn], v: Sequence[RatFn]) -> bool:
    return any(u) and any(v) and rational_rank([u, v]) == 1


@lru_cache(maxsize=None)
def relation_system_g4() -> RelationSystem:
    """derived and transcribed relations among the five surviving monomials

    Raises:
        InconsistentSystemError: a derived row is not proportional to its
            transcribed counterpart
    """
    transcribed = _transcribed_relations()
    derived = _derived_relations()
    by_key = {t.key: t for t in transcribed}
    for d in derived:
        if not _proportional(d.row, by_key[d.key].row):
            raise InconsistentSystemError(
                f"derived relation '{d.provenance}' = {[str(x) for x in d.row]}"
                + f" is not proportional to '{by_key[d.key].provenance}'"
            )

        logger.debug("derived relation '{}' matches its transcription", d.key)

    return RelationSystem(UNKNOWNS, tuple(transcribed + derived))


@lru_cache(maxsize=None)
def solve_g4() -> Mapping[Monomial, RatFn]:
    """the degrees of the five surviving monomials on F0

    Raises:
        InconsistentSystemError: the system is singular or inconsistent
    """
    system = relation_system_g4()
    rank = system.rank()
    if rank != len(UNKNOWNS):
        raise InconsistentSystemError(f"relation system has rank {rank}")

    solution = system.solve()
    for provenance, residual in system.residuals(solution).items():
        if residual:
            raise InconsistentSystemError(f"'{provenance}' leaves residual {residual}")

    for m, v in solution.items():
        logger.debug("deg {} = {}", monomial_name(m), v)

    return Frozen(solution)


def combined_relation() -> Tuple[RatFn, ...]:
    """p (c3A row) + (p - 1) (c2L row) = 2p l0^3 l1 - 2(p^2 - p + 1) l0 l1 l2^2"""
    by_key = {t.key: t for t in _transcribed_relations()}
    return tuple(
        _p * x + (_p - 1) * y for x, y in zip(by_key["c3A"].row, by_key["c2L"].row)
    )


@dataclass(frozen=True)
class AffineSolution:
    """degrees as `constant + slope * x` with x = deg l0 l1^2 l2"""

    constant: Mapping[Monomial, RatFn]
    slope: Mapping[Monomial, RatFn]

    def at(self, x: Scalar) -> Dict[Monomial, RatFn]:
        return {m: self.constant[m] + self.slope[m] * x for m in UNKNOWNS}


def one_unknown_solution() -> AffineSolution:
    """solution of every relation except the final stone, in terms of x"""
    system = relation_system_g4().select(exclude=["final_stone"])
    x_row = _row(0, 0, 0, 1, 0)

    def solve_at(x: int) -> Dict[Monomial, RatFn]:
        extended = RelationSystem(
            system.unknowns,
            system.equations + (Relation("x", "fix x", x_row, RatFn.coerce(x)),),
        )
        return extended.solve()

    at0 = solve_at(0)
    at1 = solve_at(1)
    return AffineSolution(
        Frozen(at0), Frozen({m: at1[m] - at0[m] for m in UNKNOWNS})
    )


def _lambda1_fourth() -> Tuple[RatFn, ...]:
    l1 = hodge_lambda_g4(1)
    return degree_vector(l1 * l1 * l1 * l1)


@dataclass(frozen=True)
class PositivityBound:
    """deg lambda_1^4 = slope * x + constant must be positive"""

    slope: RatFn
    constant: RatFn
    threshold: RatFn
    """x must exceed this"""
    solved_x: RatFn
    matches_closed_form: bool
    """whether the line equals 8 (p-1)^4 (p^2+p+1) (x/p - (p^2+1)(p-1)^2)"""

    def holds_at(self, p0: int) -> bool:
        return self.solved_x.eval(p0) > self.threshold.eval(p0)


def positivity_bound() -> PositivityBound:
    affine = one_unknown_solution()
    row = _lambda1_fourth()
    slope = evaluate_degree(row, affine.slope)
    constant = evaluate_degree(row, affine.constant)
    u = _p - 1
    closed_slope = 8 * u**4 * (_p * _p + _p + 1) / _p
    closed_constant = -8 * u**4 * (_p * _p + _p + 1) * (_p * _p + 1) * u * u
    return PositivityBound(
        slope,
        constant,
        -constant / slope,
        solve_g4()[(1, 2, 1)],
        slope == closed_slope and constant == closed_constant,
    )


@dataclass(frozen=True)
class Lambda1FourthCheck:
    lambda1_fourth: Tuple[RatFn, ...]
    lambda3_lambda1: Tuple[RatFn, ...]
    lambda4: Tuple[RatFn, ...]
    degree_lambda1_fourth: RatFn
    degree_lambda3_lambda1: RatFn

    @property
    def holds(self) -> bool:
        """lambda_1^4 = 8 lambda_3 lambda_1 - 8 lambda_4 monomial by monomial"""
        return all(
            x == 8 * y - 8 * z
            for x, y, z in zip(self.lambda1_fourth, self.lambda3_lambda1, self.lambda4)
        )


def lambda1_fourth_check() -> Lambda1FourthCheck:
    solution = solve_g4()
    l31 = degree_vector(hodge_lambda_g4(3) * hodge_lambda_g4(1))
    l1_4 = _lambda1_fourth()
    return Lambda1FourthCheck(
        l1_4,
        l31,
        degree_vector(hodge_lambda_g4(4)),
        evaluate_degree(l1_4, solution),
        evaluate_degree(l31, solution),
    )


@dataclass(frozen=True)
class PairVerdict:
    first: str
    second: str
    difference: RatFn
    in_relation_span: bool

    @property
    def agree(self) -> bool:
        return not self.difference


@dataclass(frozen=True)
class Crosscheck:
    rows: Mapping[str, Tuple[RatFn, ...]]
    values: Mapping[str, RatFn]
    """each combination evaluated at the solved degrees"""
    printed_value: RatFn
    """p (p-1)^4 (p^2+p+1) (p^2+1), the value claimed for the final combination"""
    pairs: Tuple[PairVerdict, ...]

    @property
    def final_matches_printed(self) -> bool:
        return self.values[FINAL_COMBINATION] == self.printed_value

    def findings(self) -> List[str]:
        out: List[str] = []
        if not self.final_matches_printed:
            out.append(
                f"{FINAL_COMBINATION} evaluates to {self.values[FINAL_COMBINATION]},"
                + f" not {self.printed_value}"
                + f" (ratio {self.values[FINAL_COMBINATION] / self.printed_value})"
            )

        for pair in self.pairs:
            if not pair.agree:
                out.append(
                    f"{pair.first} - {pair.second} = {pair.difference};"
                    + (" in" if pair.in_relation_span else " not in")
                    + " the span of the relations"
                )

        return out


HALF_U4_COMBINATION = "half_u4_combination"
"""1/2 (p-1)^4 (l0^3 l1 + l0^3 l2 + l0 l1^3 + 3 l0 l1^2 l2 + 3 l0 l1 l2^2)"""
FINAL_COMBINATION = "final_combination"
"""(p^2-3p+1) l0^3 l1 + (2p^2-2p+2) l0^3 l2 + (p^2-3p+1) l0 l1^3
+ 4(p-1)^2 l0 l1^2 l2 + (5p^2-7p+5) l0 l1 l2^2"""
DIRECT_EXPANSION = "direct_expansion"
"""lambda_3 lambda_1 from the Chern class expansion"""


def crosscheck_printed_g4() -> Crosscheck:
    """compare three expressions for deg(lambda_3 lambda_1) on F0

    Disagreements are findings, not errors."""
    p = _p
    u = p - 1
    half_u4 = u**4 / 2
    rows = {
        HALF_U4_COMBINATION: _row(*(half_u4 * k for k in (1, 1, 1, 3, 3))),
        FINAL_COMBINATION: _row(
            p * p - 3 * p + 1,
            2 * p * p - 2 * p + 2,
            p * p - 3 * p + 1,
            4 * u * u,
            5 * p * p - 7 * p + 5,
        ),
        DIRECT_EXPANSION: degree_vector(hodge_lambda_g4(3) * hodge_lambda_g4(1)),
    }
    solution = solve_g4()
    values = {name: evaluate_degree(row, solution) for name, row in rows.items()}
    relations = relation_system_g4().rows(homogeneous_only=True)
    names = list(rows)
    pairs: List[PairVerdict] = []
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            difference = tuple(x - y for x, y in zip(rows[first], rows[second]))
            pairs.append(
                PairVerdict(
                    first,
                    second,
                    values[first] - values[second],
                    in_row_span(relations, difference),
                )
            )

    crosscheck = Crosscheck(
        Frozen(rows),
        Frozen(values),
        RatFn(P * (P - 1) ** 4 * (P * P + P + 1) * (P * P + 1)),
        tuple(pairs),
    )
    for finding in crosscheck.findings():
        logger.warning("finding: {}", finding)

    return crosscheck


@dataclass(frozen=True)
class Derivation:
    name: str
    steps: Tuple[Tuple[str, str], ...]
    """(label, rendered intermediate value)"""
    result: FactoredPPoly

    def format(self) -> str:
        lines = [f"{self.name} = {self.result}"]
        lines.extend(f"  {label}: {value}" for label, value in self.steps)
        return "\n".join(lines)


def _as_ppoly(x: RatFn, what: str, steps: List[Tuple[str, str]]) -> PPoly:
    if not x.is_polynomial():
        trace = "\n".join(f"  {label}: {value}" for label, value in steps)
        raise InconsistentSystemError(f"{what} = {x} is not a polynomial\n{trace}")

    return x.to_ppoly()


@lru_cache(maxsize=None)
def f4() -> Derivation:
    """f_4(p) from deg(lambda_3 lambda_1) on F0

    Raises:
        InconsistentSystemError: the result differs from
            (p-1)^3 (p^3-1) (p^4-1) (p^6-1); the message carries the trace
    """
    steps: List[Tuple[str, str]] = []
    solution = solve_g4()
    on_f0 = evaluate_degree(hodge_lambda_g4(3) * hodge_lambda_g4(1), solution)
    steps.append(("deg lambda_3 lambda_1 on F0", str(on_f0)))
    # F0 -> S has degree p
    on_component = _as_ppoly(on_f0 / _p, "deg lambda_3 lambda_1 on S", steps)
    steps.append(("deg lambda_3 lambda_1 on S", str(on_component)))
    n_over_v = component_count_N(4) * (1 / component_count_N(4).scalar)
    steps.append(("N_4 / v(4)", str(n_over_v)))
    value = on_component * n_over_v.expand()
    steps.append(("f_4", str(value)))

    expected = ss_class(4).coefficient
    if (
        on_component != lambda_degree_on_component(4).expand()
        or value != expected.expand()
    ):
        trace = "\n".join(f"  {label}: {v}" for label, v in steps)
        raise InconsistentSystemError(f"f_4 differs from {expected}\n{trace}")

    logger.info("f_4 = {}", expected)
    return Derivation("f_4", tuple(steps), expected)


@dataclass(frozen=True)
class G3Chain:
    f3: FactoredPPoly
    deg_lambda2: FactoredPPoly
    section_class: EllClass
    section_self_intersection: PPoly
    l0_squared_coefficient: RatFn
    """coefficient c in lambda_1^2 - 2 lambda_2 = c l0^2; nonzero forces l0^2 = 0"""
    derivation: Derivation


def chern_hodge_g3() -> EllClass:
    """(1 - l1)(1 - p l1)^-1 (1 + l0)^-1 (1 + p l0) with l1^2 = 0"""
    a, b = ells(3)
    one = EllClass.one(3)
    return (one - b) * _inverse(one - _p * b) * _inverse(one + a) * (one + _p * a)


def _degree_g3(c: EllClass) -> RatFn:
    """degree of a 2-class on F0 once l0^2 = 0 is known; deg l0 l1 = p + 1"""
    top = c.degree_part(2)
    assert set(top.terms) <= {(1, 1, 0), (2, 0, 0)}, top
    return top.coefficient((1, 1, 0)) * (_p + 1)


def _drop_l0_squared(c: EllClass) -> EllClass:
    return EllClass(3, {m: v for m, v in c.terms.items() if m[0] < 2}, c.exceptional)


@lru_cache(maxsize=None)
def g3_chain() -> G3Chain:
    """deg lambda_2, f_3 and the contracted section for g=3"""
    steps: List[Tuple[str, str]] = []
    total = chern_hodge_g3()
    l1 = total.degree_part(1)
    l2 = total.degree_part(2)
    steps.append(("lambda_1", str(l1)))
    steps.append(("lambda_2", str(l2)))

    relation = l1 * l1 - l2 * 2
    coefficient = relation.coefficient((2, 0, 0))
    if set(relation.terms) != {(2, 0, 0)} or not coefficient:
        raise InconsistentSystemError(
            f"lambda_1^2 - 2 lambda_2 = {relation} is not a nonzero multiple of l0^2"
        )

    steps.append(("lambda_1^2 - 2 lambda_2", str(relation)))

    deg_l2 = _as_ppoly(_degree_g3(_drop_l0_squared(l2)), "deg lambda_2", steps)
    steps.append(("deg lambda_2", str(deg_l2)))

    n_over_v = component_count_N(3) * (1 / component_count_N(3).scalar)
    f3_value = deg_l2 * n_over_v.expand()
    steps.append(("f_3", str(f3_value)))

    # section S = l0 + t l1 with lambda_1 S = 0
    a, b = ells(3)

    def lambda1_s(t: int) -> RatFn:
        return _degree_g3(_drop_l0_squared(l1 * (a + b * t)))

    t = -lambda1_s(0) / (lambda1_s(1) - lambda1_s(0))
    section = a + b * t
    self_intersection = _as_ppoly(
        _degree_g3(_drop_l0_squared(section * section)), "S^2", steps
    )
    steps.append(("S", str(section)))
    steps.append(("S^2", str(self_intersection)))

    expected = ss_class(3).coefficient
    deg_expected = lambda_degree_on_component(3)
    if deg_l2 != deg_expected.expand() or f3_value != expected.expand():
        trace = "\n".join(f"  {label}: {v}" for label, v in steps)
        raise InconsistentSystemError(f"f_3 differs from {expected}\n{trace}")

    logger.info("f_3 = {}", expected)
    return G3Chain(
        expected,
        deg_expected,
        section,
        self_intersection,
        coefficient,
        Derivation("f_3", tuple(steps), expected),
    )


def solved_vector_closed_form() -> Dict[Monomial, RatFn]:
    """p (p^2+1) [p^2-p+1, -(p^2-p+1), -(p-1)^2, p^2-p+1, p]"""
    p = _p
    k = p * (p * p + 1)
    r = p * p - p + 1
    return dict(zip(UNKNOWNS, (k * r, -k * r, -k * (p - 1) ** 2, k * r, k * p)))

