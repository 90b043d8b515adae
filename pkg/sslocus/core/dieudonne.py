"""Truncated Witt vector linear algebra for Dieudonné modules in normal form.

W(F_{p^m})/p^N is realised as (Z/p^N)[x]/(F) with F the monic lift of
`finitefield.lowest_irreducible(p, m)`; Frobenius sends x to the root of F that is
congruent to x^p modulo p. Matrices are numpy object arrays of `WittScalar`.

The normal form of a symplectic matrix gamma = (a b; c d) presenting Frobenius of a
p-rank 0, a-number 1 module has a = d = the lower shift, c = E_{1g}, and
b_{1g} = -1, b_{1j} = 0 (j < g), b_{ig} = 0 (i > 1), b_{s+1,t} symmetric in s, t.
Frobenius acts sigma-linearly by (a pb; c pd).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from ._settings import settings
from .common import GenusError, PrecisionError
from .finitefield import Fq, get_field, lowest_irreducible
from .utils import p_adic_valuation

WittMatrix = NDArray[np.object_]
SampleKind = Literal["ss_pattern", "generic", "free"]


@dataclass(frozen=True)
class WittContext:
    """W(F_{p^m}) / p^N"""

    p: int
    m: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise PrecisionError(f"precision N must be positive, got {self.N}")

        if self.p**self.N >= 2**62:
            raise PrecisionError(f"p^N = {self.p}^{self.N} exceeds the sampling range")

    @cached_property
    def modulus(self) -> Tuple[int, ...]:
        return lowest_irreducible(self.p, self.m)

    @property
    def pN(self) -> int:
        return self.p**self.N

    @cached_property
    def residue_field(self) -> Fq:
        return get_field(self.p, self.m)

    def element(self, coefficients: Iterable[int]) -> WittScalar:
        return WittScalar(self, tuple(coefficients))

    def scalar(self, c: int) -> WittScalar:
        return WittScalar(self, (c,))

    @property
    def zero(self) -> WittScalar:
        return self.scalar(0)

    @property
    def one(self) -> WittScalar:
        return self.scalar(1)

    @property
    def generator(self) -> WittScalar:
        return WittScalar(self, (0, 1))

    def reduce(self, coefficients: Sequence[int]) -> Tuple[int, ...]:
        c = list(coefficients) + [0] * max(0, self.m - len(coefficients))
        for k in range(len(c) - 1, self.m - 1, -1):
            lead = c[k]
            if lead:
                for i in range(self.m):
                    c[k - self.m + i] -= lead * self.modulus[i]

        return tuple(x % self.pN for x in c[: self.m])

    def from_residue(self, code: int) -> WittScalar:
        """the lift with digits in [0, p) of an element of F_{p^m}"""
        return self.element(self.residue_field.coefficients(code))

    def random(self, rng: np.random.Generator) -> WittScalar:
        return self.element(int(c) for c in rng.integers(0, self.pN, size=self.m))

    def random_unit(self, rng: np.random.Generator) -> WittScalar:
        while True:
            x = self.random(rng)
            if x.residue:
                return x

    def _polynomial_at(self, coefficients: Sequence[int], x: WittScalar) -> WittScalar:
        result = self.zero
        for c in reversed(coefficients):
            result = result * x + c

        return result

    @cached_property
    def frobenius_images(self) -> Tuple[WittScalar, ...]:
        """sigma^k(x) for k = 0 .. m - 1"""
        derivative = [i * c for i, c in enumerate(self.modulus)][1:]
        theta = self.generator ** self.p
        for _ in range(self.N.bit_length() + 1):
            slope = self._polynomial_at(derivative, theta)
            if not slope.residue:
                raise PrecisionError("the modulus is not separable modulo p")

            theta = theta - self._polynomial_at(self.modulus, theta) * slope.inverse()

        if self._polynomial_at(self.modulus, theta):
            raise PrecisionError("Hensel lift of the Frobenius image did not converge")

        images = [self.generator]
        for _ in range(self.m - 1):
            images.append(self._polynomial_at(images[-1].coefficients, theta))

        if self._polynomial_at(images[-1].coefficients, theta) != self.generator:
            raise PrecisionError(
                f"sigma^{self.m} is not the identity at precision {self.N}"
            )

        logger.debug("W(F_{}^{})/p^{}: sigma(x) = {}", self.p, self.m, self.N, theta)
        return tuple(images)

    def sigma(self, x: WittScalar, k: int = 1) -> WittScalar:
        k %= self.m
        if k == 0:
            return x

        return self._polynomial_at(x.coefficients, self.frobenius_images[k])

    def matrix(self, rows: Sequence[Sequence[Union[WittScalar, int]]]) -> WittMatrix:
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                out[i, j] = x if isinstance(x, WittScalar) else self.scalar(x)

        return out

    def identity(self, n: int) -> WittMatrix:
        return self.matrix([[int(i == j) for j in range(n)] for i in range(n)])


@lru_cache(maxsize=None)
def get_witt_context(p: int, m: int, N: int) -> WittContext:
    return WittContext(p, m, N)


@dataclass(frozen=True, eq=False)
class WittScalar:
    """an element of W(F_{p^m})/p^N; `coefficients[i]` belongs to x^i"""

    context: WittContext = field(repr=False)
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", self.context.reduce(self.coefficients))

    @property
    def residue(self) -> int:
        """code of the image in F_{p^m}"""
        return self.context.residue_field.from_coefficients(self.coefficients)

    @property
    def valuation(self) -> int:
        """p-adic valuation, N for zero"""
        p, N = self.context.p, self.context.N
        return min(p_adic_valuation(c, p, N) for c in self.coefficients)

    def sigma(self, k: int = 1) -> WittScalar:
        return self.context.sigma(self, k)

    def divide_by_p_power(self, v: int) -> WittScalar:
        """exact quotient by p^v; defined modulo p^(N - v)"""
        q = self.context.p**v
        assert all(c % q == 0 for c in self.coefficients), (self, v)
        return WittScalar(self.context, tuple(c // q for c in self.coefficients))

    def inverse(self) -> WittScalar:
        r = self.residue
        if r == 0:
            raise ZeroDivisionError(f"{self} is not a unit")

        y = self.context.from_residue(int(self.context.residue_field.inv(r)))
        for _ in range(self.context.N.bit_length() + 1):
            y = y * (2 - self * y)

        return y

    def _coerce(self, other: object) -> Optional[WittScalar]:
        if isinstance(other, WittScalar):
            assert other.context == self.context
            return other
        elif isinstance(other, (int, np.integer)):
            return self.context.scalar(int(other))
        else:
            return None

    def __add__(self, other: Union[WittScalar, int]) -> WittScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented

        coefficients = tuple(a + b for a, b in zip(self.coefficients, o.coefficients))
        return WittScalar(self.context, coefficients)

    __radd__ = __add__

    def __neg__(self) -> WittScalar:
        return WittScalar(self.context, tuple(-c for c in self.coefficients))

    def __sub__(self, other: Union[WittScalar, int]) -> WittScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented

        return self + (-o)

    def __rsub__(self, other: Union[WittScalar, int]) -> WittScalar:
        return (-self) + other

    def __mul__(self, other: Union[WittScalar, int]) -> WittScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented

        prod = [0] * (2 * self.context.m - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(o.coefficients):
                    prod[i + j] += a * b

        return WittScalar(self.context, tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> WittScalar:
        if exponent < 0:
            return self.inverse() ** (-exponent)

        result = self.context.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1

        return result

    def __bool__(self):
        return any(self.coefficients)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented

        return self.coefficients == o.coefficients

    def __hash__(self) -> int:
        return hash((self.context, self.coefficients))

    def __repr__(self):
        return f"WittScalar{self.coefficients}"


def frobenius_lift(x: WittScalar) -> WittScalar:
    """sigma(x)"""
    return x.sigma()


def sigma_matrix(a: WittMatrix, k: int = 1) -> WittMatrix:
    return np.vectorize(lambda x: x.sigma(k), otypes=[object])(a)


def matrix_valuation(a: WittMatrix) -> int:
    return min(x.valuation for x in a.flat)


def _rows(a: WittMatrix) -> List[List[WittScalar]]:
    return [list(row) for row in a]


def iterate_semilinear(a: WittMatrix, n: int) -> WittMatrix:
    """a sigma(a) ... sigma^(n-1)(a), the matrix of F^n if F has matrix a"""
    if n < 0:
        raise ValueError(f"expected n >= 0, got {n}")

    context: WittContext = a.flat[0].context
    result = context.identity(a.shape[0])
    for k in range(n):
        result = result @ sigma_matrix(a, k)

    return result


def standard_symplectic(context: WittContext, g: int) -> WittMatrix:
    """J = (0 1; -1 0) in g x g blocks"""
    return context.matrix(
        [
            [(1 if j == i + g else -1 if i == j + g else 0) for j in range(2 * g)]
            for i in range(2 * g)
        ]
    )


def criterion_index_set(g: int) -> List[Tuple[int, int]]:
    """1-based entries (i, j) of gamma with 2 <= i <= g-1, g+1 <= j <= 2g-2, i+j <= 2g;
    their vanishing modulo p implies supersingularity"""
    return [
        (i, j)
        for i in range(2, g)
        for j in range(g + 1, 2 * g - 1)
        if i + j <= 2 * g
    ]


def _free_index(i: int, j: int, g: int) -> Tuple[int, int]:
    """(s, t), s <= t, of the symmetric block entry b_{s+1,t} at gamma_{i,j}"""
    s, t = i - 1, j - g
    return (min(s, t), max(s, t))


def condition_count(g: int) -> int:
    """number of independent conditions in `criterion_index_set` after symmetry

    >>> [condition_count(g) for g in range(2, 7)]
    [0, 1, 2, 4, 6]
    """
    return len({_free_index(i, j, g) for i, j in criterion_index_set(g)})


@dataclass(frozen=True, eq=False)
class GammaForm:
    g: int
    context: WittContext
    gamma: WittMatrix

    def __post_init__(self):
        assert self.gamma.shape == (2 * self.g, 2 * self.g), self.gamma.shape

    def entry(self, i: int, j: int) -> WittScalar:
        """1-based access as in gamma_{ij}"""
        return self.gamma[i - 1, j - 1]


def random_gamma(
    g: int,
    p: int = 2,
    m: Optional[int] = None,
    N: Optional[int] = None,
    seed: Optional[int] = None,
    ss_pattern: bool = False,
    avoid_pattern: bool = False,
) -> GammaForm:
    """random symplectic normal form

    Args:
        g: genus
        p: characteristic
        m: residue degree, defaults to `settings.residue_degree`
        N: p-adic precision, defaults to 2g + 4
        seed: seed of the free entries
        ss_pattern: force the criterion entries to vanish modulo p
        avoid_pattern: draw every criterion entry as a unit
    """
    if g < 1:
        raise GenusError(f"expected g >= 1, got g={g}")

    if ss_pattern and avoid_pattern:
        raise ValueError("ss_pattern and avoid_pattern exclude each other")

    context = get_witt_context(
        p,
        settings.residue_degree if m is None else m,
        2 * g + 4 if N is None else N,
    )
    rng = np.random.default_rng(seed)
    pattern = {_free_index(i, j, g) for i, j in criterion_index_set(g)}
    free = {}
    for s in range(1, g):
        for t in range(s, g):
            if (s, t) in pattern and ss_pattern:
                free[s, t] = p * context.random(rng)
            elif (s, t) in pattern and avoid_pattern:
                free[s, t] = context.random_unit(rng)
            else:
                free[s, t] = context.random(rng)

    gamma = context.matrix([[0] * (2 * g) for _ in range(2 * g)])
    for i in range(1, g):
        gamma[i, i - 1] = context.one  # a
        gamma[g + i, g + i - 1] = context.one  # d

    gamma[g, g - 1] = context.one  # c_{1g}
    gamma[0, 2 * g - 1] = -context.one  # b_{1g}
    for s in range(1, g):
        for t in range(1, g):
            gamma[s, g + t - 1] = free[min(s, t), max(s, t)]  # b_{s+1,t}

    return GammaForm(g, context, gamma)


def symplectic_defect(form: GammaForm) -> int:
    """valuation of gamma J gamma^t - J"""
    j = standard_symplectic(form.context, form.g)
    return matrix_valuation(form.gamma @ j @ form.gamma.T - j)


def lemma_structure_holds(form: GammaForm) -> bool:
    """gamma_{1,g+1..2g-1} = 0 and (gamma_{ij})_{2<=i<=g, g+1<=j<=2g-1} symmetric"""
    g = form.g
    if any(form.entry(1, j) for j in range(g + 1, 2 * g)):
        return False

    block = form.gamma[1:g, g : 2 * g - 1]
    return all(block[s, t] == block[t, s] for s in range(g - 1) for t in range(g - 1))


def f_matrix(form: GammaForm) -> WittMatrix:
    """(a pb; c pd)"""
    out = form.gamma.copy()
    out[:, form.g :] = form.context.p * form.gamma[:, form.g :]
    return out


def charpoly(a: WittMatrix) -> List[WittScalar]:
    """coefficients c_0 = 1, c_1, ..., c_n of det(t - a) = sum c_i t^(n-i)

    Division free (Berkowitz), so valid over W/p^N.
    """
    n = a.shape[0]
    context: WittContext = a.flat[0].context
    poly = [context.one, -a[0, 0]]
    for r in range(1, n):
        row = a[r, :r]
        col = a[:r, r]
        block = a[:r, :r]
        t = [context.one, -a[r, r]]
        w = col
        for _ in range(r):
            t.append(-(row @ w))
            w = block @ w

        poly = [
            sum((t[i - j] * poly[j] for j in range(min(i, r) + 1)), context.zero)
            for i in range(r + 2)
        ]

    return poly


def hodge_valuations(a: WittMatrix) -> List[int]:
    """valuations of the elementary divisors of `a` over the local ring W/p^N,
    by elimination with a pivot of minimal valuation"""
    context: WittContext = a.flat[0].context
    rows = _rows(a)
    n_rows, n_cols = len(rows), len(rows[0])
    valuations: List[int] = []
    active_rows = list(range(n_rows))
    active_cols = list(range(n_cols))
    while active_rows and active_cols:
        v, r, c = min(
            (rows[r][c].valuation, r, c) for r in active_rows for c in active_cols
        )
        if v >= context.N:
            break

        unit_inv = rows[r][c].divide_by_p_power(v).inverse()
        for r2 in active_rows:
            if r2 != r and rows[r2][c]:
                f = rows[r2][c].divide_by_p_power(v) * unit_inv
                rows[r2] = [x - f * y for x, y in zip(rows[r2], rows[r])]

        for c2 in active_cols:
            if c2 != c and rows[r][c2]:
                f = rows[r][c2].divide_by_p_power(v) * unit_inv
                for r2 in range(n_rows):
                    rows[r2][c2] = rows[r2][c2] - f * rows[r2][c]

        valuations.append(v)
        active_rows.remove(r)
        active_cols.remove(c)

    valuations.extend([context.N] * min(len(active_rows), len(active_cols)))
    return sorted(valuations)


SlopeStatus = Literal["conclusive", "inconclusive"]


@dataclass(frozen=True)
class SlopeProfile:
    slopes: Tuple[Fraction, ...]
    """increasing; empty if inconclusive"""
    status: SlopeStatus = "conclusive"

    def __post_init__(self):
        if self.status == "conclusive":
            assert list(self.slopes) == sorted(self.slopes)
            assert all(a + b == 1 for a, b in zip(self.slopes, reversed(self.slopes)))
            assert all(0 <= s <= 1 for s in self.slopes)

    @property
    def supersingular(self) -> Optional[bool]:
        if self.status == "inconclusive":
            return None

        return all(s == Fraction(1, 2) for s in self.slopes)

    def __str__(self):
        if self.status == "inconclusive":
            return "inconclusive"

        return " ".join(str(s) for s in self.slopes)


def _lower_hull(points: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    hull: List[Tuple[int, int]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                _ = hull.pop()
            else:
                break
        hull.append(pt)

    return hull


def newton_slopes(
    form: GammaForm, iterations: int = 1, buffer: Optional[int] = None
) -> SlopeProfile:
    """Newton slopes of F from the characteristic polynomial of the W-linear map
    F^(m j), 1 <= j <= k = `iterations`

    Slopes below 1/2 are read off the lower hull of (i, val c_i), i <= g; the rest of
    the first half is 1/2 and the second half follows by symmetry. The slopes do not
    depend on j, so j is the largest power whose digits up to val c_g lie `buffer`
    digits below the precision. Requires k g < N - buffer; the answer is
    inconclusive if that fails or if no j qualifies.
    """
    if iterations < 1:
        raise ValueError(f"expected iterations >= 1, got {iterations}")

    context = form.context
    g = form.g
    buffer = settings.precision_buffer if buffer is None else buffer
    known = context.N - buffer
    # val c_g <= g m j / 2
    j = min(iterations, (2 * known - 1) // (g * context.m))
    if iterations * g >= known or j < 1:
        logger.warning(
            "precision {} with buffer {} cannot certify slopes at g={}, k={}",
            context.N,
            buffer,
            g,
            iterations,
        )
        return SlopeProfile((), "inconclusive")

    mk = context.m * j
    logger.debug("slopes at g={} from F^{}", g, mk)

    phi = iterate_semilinear(f_matrix(form), mk)
    coefficients = charpoly(phi)
    points = [(0, 0)]
    for i in range(1, g + 1):
        v = coefficients[i].valuation
        if v < known:
            points.append((i, v))

    first_half: List[Fraction] = []
    hull = _lower_hull(points)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        if 2 * slope >= mk:
            break
        first_half.extend([slope / mk] * (x2 - x1))

    first_half.extend([Fraction(1, 2)] * (g - len(first_half)))
    slopes = tuple(first_half + [1 - s for s in reversed(first_half)])
    return SlopeProfile(slopes)


def _f_power_columns(a: WittMatrix, n: int) -> List[WittMatrix]:
    """F^k e_1 for k = 0 .. n"""
    context: WittContext = a.flat[0].context
    e1 = np.empty(a.shape[0], dtype=object)
    e1[:] = [context.one] + [context.zero] * (a.shape[0] - 1)
    columns = [e1]
    for _ in range(n):
        columns.append(a @ np.array([x.sigma() for x in columns[-1]], dtype=object))

    return columns


@dataclass(frozen=True)
class Eq4Result:
    passed: bool
    residual_valuation: int


def verify_eq4(form: GammaForm) -> Eq4Result:
    """F^(2g) e_1 = P e_1 with
    P = sum_{i<=g<j} p^(j-g) sigma^(2g-j)(gamma_ij) F^(2g+i-j-1)"""
    g = form.g
    context = form.context
    if context.N < 2 * g + 2:
        raise PrecisionError(f"precision {context.N} below 2g + 2 = {2 * g + 2}")

    columns = _f_power_columns(f_matrix(form), 2 * g)
    rhs = np.array([context.zero] * (2 * g), dtype=object)
    for i in range(1, g + 1):
        for j in range(g + 1, 2 * g + 1):
            coefficient = context.p ** (j - g) * form.entry(i, j).sigma(2 * g - j)
            if coefficient:
                rhs = rhs + coefficient * columns[2 * g + i - j - 1]

    residual = min(x.valuation for x in columns[2 * g] - rhs)
    return Eq4Result(residual >= context.N - 2 * g, residual)


def ss_criterion_check(form: GammaForm) -> bool:
    """all criterion entries vanish modulo p; sufficient for supersingularity"""
    return all(form.entry(i, j).residue == 0 for i, j in criterion_index_set(form.g))


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    kind: SampleKind
    criterion: bool
    slopes: SlopeProfile
    eq4: Eq4Result
    symplectic_defect: int
    lemma_structure: bool
    hodge: Tuple[int, ...]
    precision: int

    @property
    def structure_holds(self) -> bool:
        g = len(self.hodge) // 2
        return (
            self.eq4.passed
            and self.lemma_structure
            and self.symplectic_defect >= self.precision - 2
            and self.hodge == (0,) * g + (1,) * g
        )

    @property
    def consistent(self) -> bool:
        """criterion implies supersingular, and the structural checks pass"""
        return self.structure_holds and (
            not self.criterion or self.slopes.supersingular is not False
        )


def run_trial(form: GammaForm, index: int, seed: int, kind: SampleKind) -> TrialRecord:
    return TrialRecord(
        index,
        seed,
        kind,
        ss_criterion_check(form),
        newton_slopes(form),
        verify_eq4(form),
        symplectic_defect(form),
        lemma_structure_holds(form),
        tuple(hodge_valuations(f_matrix(form))),
        form.context.N,
    )


def run_trials(
    g: int,
    p: int = 2,
    m: Optional[int] = None,
    N: Optional[int] = None,
    trials: int = 20,
    seed: int = 0,
    generic: Literal["generic", "free"] = "generic",
) -> List[TrialRecord]:
    """one ss_pattern and one off-pattern sample per trial, seeds seed, seed + 1, ..."""
    records: List[TrialRecord] = []
    for index in range(trials):
        s = seed + index
        for kind in ("ss_pattern", generic):
            form = random_gamma(
                g,
                p,
                m,
                N,
                seed=s,
                ss_pattern=kind == "ss_pattern",
                avoid_pattern=kind == "generic",
            )
            record = run_trial(form, index, s, kind)
            logger.debug(
                "g={} trial {} {}: criterion {}, slopes {}",
                g,
                index,
                kind,
                record.criterion,
                record.slopes,
            )
            records.append(record)

    return records


@dataclass(frozen=True)
class TrialSummary:
    g: int
    trials: int
    implication_holds: bool
    """criterion => all slopes 1/2 on every sample"""
    rejection_rate: Optional[Fraction]
    """share of off-pattern samples that are not supersingular"""
    inconclusive: int
    structural_failures: int


def summarize_trials(g: int, records: Sequence[TrialRecord]) -> TrialSummary:
    off = [r for r in records if not r.criterion and r.slopes.status == "conclusive"]
    rejected = [r for r in off if not r.slopes.supersingular]
    return TrialSummary(
        g,
        len({r.index for r in records}),
        all(r.slopes.supersingular is not False for r in records if r.criterion),
        Fraction(len(rejected), len(off)) if off else None,
        sum(r.slopes.status == "inconclusive" for r in records),
        sum(not r.structure_holds for r in records),
    )
