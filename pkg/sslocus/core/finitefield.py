"""Exhaustive point counts over finite fields.

`Fq` implements F_{p^m} on integer codes (base-p digits of the coefficient vector
modulo a fixed irreducible polynomial) with numpy log/exp tables, so every field
operation is vectorised over arrays of codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Literal,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from sympy import isprime
from tqdm import tqdm

from ._settings import settings
from .common import BudgetExceededError, FormKind

Codes = Union[int, np.integer, NDArray[np.int64]]
Points = NDArray[np.int64]
"""array of shape (N, n + 1) of normalised homogeneous coordinates"""


def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        _ = a.pop()

    return a


def _poly_rem(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """remainder of a modulo b over F_p (coefficient lists, lowest degree first)"""
    rem = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(rem) >= len(b):
        c = rem[-1] * inv_lead % p
        shift = len(rem) - len(b)
        for i, d in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * d) % p

        rem = _poly_trim(rem)

    return rem


def is_irreducible(coefficients: Sequence[int], p: int) -> bool:
    """trial division by every monic polynomial of degree <= m / 2"""
    m = len(coefficients) - 1
    for d in range(1, m // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not _poly_rem(coefficients, list(tail) + [1], p):
                return False

    return True


@lru_cache(maxsize=None)
def lowest_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """monic irreducible polynomial of degree m over F_p with the smallest code
    sum c_i p^i, coefficients lowest degree first

    >>> lowest_irreducible(2, 4)
    (1, 1, 0, 0, 1)
    """
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")

    if m < 1:
        raise ValueError(f"expected m >= 1, got {m}")

    for code in range(p**m):
        tail = tuple(code // p**i % p for i in range(m))
        if is_irreducible(tail + (1,), p):
            return tail + (1,)

    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")


class Fq:
    """the finite field F_{p^m}"""

    max_order = 2**20

    def __init__(self, p: int, m: int):
        super().__init__()
        self.p = p
        self.m = m
        self.order = p**m
        if self.order > self.max_order:
            raise ValueError(f"F_{p}^{m} is too large for table arithmetic")

        self.modulus = lowest_irreducible(p, m)
        self._place = p ** np.arange(m, dtype=np.int64)
        codes = np.arange(self.order, dtype=np.int64)
        self._digits = (codes[:, None] // self._place[None, :]) % p
        self._exp, self._log = self._build_tables()

    def __repr__(self):
        return f"Fq(p={self.p}, m={self.m})"

    def _mulmod(self, a: int, b: int) -> int:
        da = [int(x) for x in self._digits[a]]
        db = [int(x) for x in self._digits[b]]
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y

        rem = _poly_rem(prod, self.modulus, self.p) if self.m > 1 else [
            prod[0] % self.p
        ]
        return sum(c * self.p**i for i, c in enumerate(rem))

    def _build_tables(self) -> Tuple[NDArray[np.int64], NDArray[np.int64]]:
        n = self.order - 1
        for candidate in range(1, self.order):
            powers = [1]
            x = 1
            for _ in range(n - 1):
                x = self._mulmod(x, candidate)
                if x == 1:
                    break
                powers.append(x)
            else:
                if self._mulmod(x, candidate) != 1:
                    continue

                exp = np.array(powers + powers, dtype=np.int64)
                log = np.full(self.order, -1, dtype=np.int64)
                log[exp[:n]] = np.arange(n, dtype=np.int64)
                logger.debug("F_{}^{}: primitive element {}", self.p, self.m, candidate)
                return exp, log

        raise AssertionError(f"no primitive element in F_{self.p}^{self.m}")

    @property
    def primitive_element(self) -> int:
        return int(self._exp[1]) if self.order > 2 else 1

    def elements(self) -> NDArray[np.int64]:
        return np.arange(self.order, dtype=np.int64)

    def scalar(self, c: int) -> int:
        """image of an integer in the prime field"""
        return c % self.p

    def coefficients(self, a: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self._digits[a])

    def from_coefficients(self, coefficients: Sequence[int]) -> int:
        assert len(coefficients) <= self.m
        return sum((c % self.p) * self.p**i for i, c in enumerate(coefficients))

    def add(self, a: Codes, b: Codes) -> NDArray[np.int64]:
        return ((self._digits[a] + self._digits[b]) % self.p) @ self._place

    def neg(self, a: Codes) -> NDArray[np.int64]:
        return ((-self._digits[a]) % self.p) @ self._place

    def sub(self, a: Codes, b: Codes) -> NDArray[np.int64]:
        return ((self._digits[a] - self._digits[b]) % self.p) @ self._place

    def mul(self, a: Codes, b: Codes) -> NDArray[np.int64]:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a: Codes) -> NDArray[np.int64]:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")

        return self._exp[(-self._log[a]) % (self.order - 1)]

    def div(self, a: Codes, b: Codes) -> NDArray[np.int64]:
        return self.mul(a, self.inv(b))

    def pow(self, a: Codes, k: int) -> NDArray[np.int64]:
        """a^k with 0^0 = 1"""
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones_like(a)

        if k < 0:
            return self.pow(self.inv(a), -k)

        out = self._exp[(self._log[a] * (k % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def frobenius(self, a: Codes, k: int = 1) -> NDArray[np.int64]:
        """a^(p^k)"""
        return self.pow(a, self.p**k)

    def nth_root_p(self, a: Codes) -> NDArray[np.int64]:
        """the unique p-th root a^(q/p)"""
        return self.pow(a, self.order // self.p)

    def in_subfield(self, a: Codes, d: int) -> NDArray[np.bool_]:
        if self.m % d:
            raise ValueError(f"F_{self.p}^{d} is not a subfield of F_{self.p}^{self.m}")

        a = np.asarray(a, dtype=np.int64)
        return self.frobenius(a, d) == a

    def random(
        self,
        rng: np.random.Generator,
        size: Optional[int] = None,
        nonzero: bool = False,
    ) -> NDArray[np.int64]:
        return rng.integers(1 if nonzero else 0, self.order, size=size, dtype=np.int64)

    def rank(self, matrix: Union[Sequence[Sequence[int]], NDArray[np.int64]]) -> int:
        a = np.array(matrix, dtype=np.int64)
        n_rows, n_cols = a.shape
        rank = 0
        for c in range(n_cols):
            if rank == n_rows:
                break

            nonzero = np.nonzero(a[rank:, c])[0]
            if nonzero.size == 0:
                continue

            pivot = rank + int(nonzero[0])
            a[[rank, pivot]] = a[[pivot, rank]]
            a[rank] = self.mul(a[rank], self.inv(a[rank, c]))
            for r in range(n_rows):
                if r != rank and a[r, c]:
                    a[r] = self.sub(a[r], self.mul(a[r, c], a[rank]))

            rank += 1

        return rank


@lru_cache(maxsize=None)
def get_field(p: int, m: int) -> Fq:
    return Fq(p, m)


@dataclass(frozen=True)
class ProjectivePointSet:
    n: int
    """dimension of the ambient projective space"""
    count: int
    representatives: Optional[Points] = None
    """normalised coordinates (first nonzero coordinate 1), if kept"""

    def __post_init__(self):
        assert self.representatives is None or len(self.representatives) == self.count


def projective_size(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def projective_blocks(field: Fq, n: int, reverse: bool = False) -> Iterator[Points]:
    """normalised points of P^n, one block per position of the leading 1"""
    q = field.order
    leads = range(n, -1, -1) if reverse else range(n + 1)
    for lead in leads:
        free = n - lead
        block = np.zeros((q**free, n + 1), dtype=np.int64)
        block[:, lead] = 1
        if free:
            block[:, lead + 1 :] = np.indices((q,) * free).reshape(free, -1).T

        yield block[::-1] if reverse else block


def _check_budget(size: int, budget: Optional[int], what: str):
    budget = settings.enumeration_budget if budget is None else budget
    if size > budget:
        raise BudgetExceededError(
            f"{what}: {size} candidates exceed the budget {budget}"
        )


def enumerate_projective(
    field: Fq,
    n: int,
    predicate: Callable[[Points], NDArray[np.bool_]],
    *,
    reverse: bool = False,
    keep: bool = False,
    budget: Optional[int] = None,
    desc: str = "points",
) -> ProjectivePointSet:
    """points of P^n(F_q) satisfying `predicate`, evaluated block by block"""
    _check_budget(projective_size(field.order, n), budget, desc)
    count = 0
    kept: List[Points] = []
    for block in tqdm(
        projective_blocks(field, n, reverse),
        total=n + 1,
        desc=desc,
        disable=not settings.progress,
    ):
        mask = predicate(block)
        count += int(np.count_nonzero(mask))
        if keep:
            kept.append(block[mask])

    logger.debug("{} over F_{}^{}: {}", desc, field.p, field.m, count)
    return ProjectivePointSet(
        n, count, np.concatenate(kept) if keep else None
    )


def count_projective(
    field: Fq,
    n: int,
    predicate: Callable[[Points], NDArray[np.bool_]],
    reverse: bool = False,
    budget: Optional[int] = None,
    desc: str = "points",
) -> int:
    return enumerate_projective(
        field, n, predicate, reverse=reverse, budget=budget, desc=desc
    ).count


def fermat_predicate(field: Fq) -> Callable[[Points], NDArray[np.bool_]]:
    e = field.p + 1

    def predicate(x: Points) -> NDArray[np.bool_]:
        powers = [field.pow(x[:, i], e) for i in range(3)]
        return field.add(field.add(powers[0], powers[1]), powers[2]) == 0

    return predicate


def count_fermat_curve(
    p: int, reverse: bool = False, budget: Optional[int] = None
) -> int:
    """#{a^(p+1) + b^(p+1) + c^(p+1) = 0} in P^2(F_{p^2}); equals p^3 + 1"""
    field = get_field(p, 2)
    return count_projective(
        field, 2, fermat_predicate(field), reverse, budget, desc="Fermat curve"
    )


def frobenius_pair_form(field: Fq, x: Points, e: int) -> NDArray[np.int64]:
    """x1 x4^e - x1^e x4 + x2 x3^e - x2^e x3"""
    a1, a2, a3, a4 = (x[:, i] for i in range(4))
    first = field.sub(field.mul(a1, field.pow(a4, e)), field.mul(field.pow(a1, e), a4))
    second = field.sub(field.mul(a2, field.pow(a3, e)), field.mul(field.pow(a2, e), a3))
    return field.add(first, second)


def surface_predicate(
    field: Fq, e: int, permutation: Sequence[int] = (0, 1, 2, 3)
) -> Callable[[Points], NDArray[np.bool_]]:
    def predicate(x: Points) -> NDArray[np.bool_]:
        return frobenius_pair_form(field, x[:, list(permutation)], e) == 0

    return predicate


def count_F2_surface(
    p: int,
    reverse: bool = False,
    budget: Optional[int] = None,
    permutation: Sequence[int] = (0, 1, 2, 3),
) -> int:
    """points of a1 a4^(p^2) - a1^(p^2) a4 + a2 a3^(p^2) - a2^(p^2) a3 = 0

    in P^3(F_{p^2})
    """
    field = get_field(p, 2)
    return count_projective(
        field, 3, surface_predicate(field, p**2, permutation), reverse, budget, "F2"
    )


def count_G1_surface(
    p: int,
    reverse: bool = False,
    budget: Optional[int] = None,
    permutation: Sequence[int] = (0, 1, 2, 3),
) -> int:
    """points of a d^p - a^p d + b c^p - b^p c = 0 over F_{p^2}"""
    field = get_field(p, 2)
    return count_projective(
        field, 3, surface_predicate(field, p, permutation), reverse, budget, "G1"
    )


def surface_symmetries() -> List[Tuple[int, int, int, int]]:
    """coordinate permutations mapping the pairing form to plus or minus itself"""
    return [(0, 1, 2, 3), (3, 2, 1, 0), (1, 0, 3, 2), (2, 3, 0, 1)]


def all_f_p2_points_on_F2(p: int) -> bool:
    """every F_{p^2}-point of P^3 lies on F2 since x^(p^2) = x there"""
    return count_F2_surface(p) == projective_size(p**2, 3)


def superspecial_fibre_count(p: int) -> int:
    """#F0(F_{p^2}) for g=3: a P^1-bundle over the Fermat curve"""
    return count_fermat_curve(p) * (p**2 + 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1

    return num // den


def echelon_bases(field: Fq, n: int, k: int) -> Iterator[NDArray[np.int64]]:
    """reduced row echelon bases of all k-subspaces of F_q^n, shape (N, k, n) per
    pivot pattern"""
    q = field.order
    for pivots in combinations(range(n), k):
        free = [
            (i, j)
            for i, pivot in enumerate(pivots)
            for j in range(pivot + 1, n)
            if j not in pivots
        ]
        count = q ** len(free)
        bases = np.zeros((count, k, n), dtype=np.int64)
        for i, pivot in enumerate(pivots):
            bases[:, i, pivot] = 1

        if free:
            values = np.indices((q,) * len(free)).reshape(len(free), -1).T
            for f, (i, j) in enumerate(free):
                bases[:, i, j] = values[:, f]

        yield bases


def pairing(
    field: Fq,
    u: NDArray[np.int64],
    v: NDArray[np.int64],
    conjugation: int = 0,
) -> NDArray[np.int64]:
    """sum_t u_t conj(v_{n-1-t}) - u_{n-1-t} conj(v_t), conj = x^(p^conjugation)"""
    n = u.shape[-1]
    assert n % 2 == 0, n
    total = np.zeros(u.shape[:-1], dtype=np.int64)
    for t in range(n // 2):
        s = n - 1 - t
        vs = field.frobenius(v[..., s], conjugation) if conjugation else v[..., s]
        vt = field.frobenius(v[..., t], conjugation) if conjugation else v[..., t]
        term = field.sub(field.mul(u[..., t], vs), field.mul(u[..., s], vt))
        total = field.add(total, term)

    return total


def count_isotropic(
    form: FormKind,
    n: int,
    k: int,
    p: int,
    conjugation_power: int = 1,
    budget: Optional[int] = None,
) -> int:
    """totally isotropic k-subspaces of F_{p^2}^n

    Args:
        form: "hermitian" (conjugation x -> x^(p^conjugation_power)) or "symplectic"
        n: even dimension of the space
        k: dimension of the subspaces
        p: characteristic
        conjugation_power: 1 for the unitary form; 2 gives x -> x^(p^2), the
            identity on F_{p^2}
        budget: maximal number of subspaces visited
    """
    if n % 2 or not 0 < k <= n:
        raise ValueError(f"invalid dimensions n={n}, k={k}")

    field = get_field(p, 2)
    _check_budget(gaussian_binomial(n, k, field.order), budget, "subspaces")
    conjugation = conjugation_power if form == "hermitian" else 0
    count = 0
    for bases in echelon_bases(field, n, k):
        isotropic = np.ones(len(bases), dtype=bool)
        for i in range(k):
            for j in range(i if form == "hermitian" else i + 1, k):
                isotropic &= pairing(field, bases[:, i], bases[:, j], conjugation) == 0

        count += int(np.count_nonzero(isotropic))

    logger.debug("{} isotropic {}-subspaces of F_{}^{}: {}", form, k, p**2, n, count)
    return count


QuadricShape = Literal["smooth", "cone_hyperbolic", "cone_elliptic", "other"]


@dataclass(frozen=True)
class QuadricCount:
    count: int
    shape: QuadricShape
    grassmannian_count: int
    """#Gr(2,4)(F_q), an upper bound for the hyperplane section"""


def quadric_shape(count: int, q: int) -> QuadricShape:
    """match a point count of a quadric threefold in P^4 against the classical shapes"""
    if count == (q + 1) * (q * q + 1):
        return "smooth"
    elif count == 1 + q * (q + 1) ** 2:
        return "cone_hyperbolic"
    elif count == 1 + q * (q * q + 1):
        return "cone_elliptic"
    else:
        return "other"


def count_quadric_Q(p: int, budget: Optional[int] = None) -> QuadricCount:
    """the Pluecker quadric cut by l14 + l23 = 0, in the coordinates
    (l12, l13, l23, l24, l34): l12 l34 - l13 l24 - l23^2 = 0 over F_{p^2}"""
    field = get_field(p, 2)

    def predicate(x: Points) -> NDArray[np.bool_]:
        value = field.sub(field.mul(x[:, 0], x[:, 4]), field.mul(x[:, 1], x[:, 3]))
        return field.sub(value, field.mul(x[:, 2], x[:, 2])) == 0

    q = field.order
    count = count_projective(field, 4, predicate, budget=budget, desc="quadric Q")
    return QuadricCount(count, quadric_shape(count, q), (q * q + 1) * (q * q + q + 1))


@dataclass(frozen=True)
class FiberCurveAnalysis:
    """the curve a8^p + a2 a7^p - a5^(p-1) (a8 + a2^p a7) = 0 in P^2 (a5 : a7 : a8)"""

    a2: int
    on_line: bool
    """a2 is F_{p^2}-rational"""
    count: int
    singular_points: Tuple[Tuple[int, int, int], ...]
    cusp: Tuple[int, int, int]
    """(0 : 1 : -a2^(1/p)), where the singularity is expected"""
    lines: int
    """number of lines through the cusp contained in the curve"""


def fiber_curve_value(field: Fq, a2: int, x: Points) -> NDArray[np.int64]:
    p = field.p
    a5, a7, a8 = x[:, 0], x[:, 1], x[:, 2]
    head = field.add(field.pow(a8, p), field.mul(a2, field.pow(a7, p)))
    inner = field.add(a8, field.mul(field.pow(a2, p), a7))
    return field.sub(head, field.mul(field.pow(a5, p - 1), inner))


def fiber_curve_gradient(
    field: Fq, a2: int, x: Points
) -> Tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.int64]]:
    """partial derivatives in a5, a7, a8; p-th powers differentiate to zero"""
    p = field.p
    a5, a7, a8 = x[:, 0], x[:, 1], x[:, 2]
    a2p = field.pow(a2, p)
    a5_p1 = field.pow(a5, p - 1)
    # -(p - 1) = 1 in characteristic p
    d5 = field.mul(field.pow(a5, p - 2), field.add(a8, field.mul(a2p, a7)))
    d7 = field.neg(field.mul(a5_p1, a2p))
    d8 = field.neg(a5_p1)
    return d5, d7, d8


def analyze_fiber_curve(
    field: Fq, a2: int, budget: Optional[int] = None
) -> FiberCurveAnalysis:
    """points, singular points and line components of the fibre curve over `field`"""
    if field.m % 2:
        raise ValueError("the fibre curve is analysed over an extension of F_{p^2}")

    def on_curve(x: Points) -> NDArray[np.bool_]:
        return fiber_curve_value(field, a2, x) == 0

    def singular(x: Points) -> NDArray[np.bool_]:
        mask = on_curve(x)
        for d in fiber_curve_gradient(field, a2, x):
            mask &= d == 0

        return mask

    count = count_projective(field, 2, on_curve, budget=budget, desc="fibre curve")
    points = enumerate_projective(
        field, 2, singular, keep=True, budget=budget, desc="singular points"
    ).representatives
    assert points is not None
    c = int(field.nth_root_p(a2))
    cusp = (0, 1, int(field.neg(c)))

    # lines a8 + c a7 = z a5 through the cusp, z in F_p
    lines = 0
    for z in range(field.p):
        def on_line(x: Points, z: int = z) -> NDArray[np.bool_]:
            lhs = field.add(x[:, 2], field.mul(c, x[:, 1]))
            return field.sub(lhs, field.mul(field.scalar(z), x[:, 0])) == 0

        line_points = enumerate_projective(
            field, 2, on_line, keep=True, budget=budget, desc="line"
        ).representatives
        assert line_points is not None
        if np.all(on_curve(line_points)):
            lines += 1

    return FiberCurveAnalysis(
        a2,
        bool(field.in_subfield(a2, 2)),
        count,
        tuple(tuple(int(v) for v in pt) for pt in points),  # type: ignore
        cusp,
        lines,
    )


Point = Dict[int, int]
"""coordinates a_1 ... a_11 by index"""

CHART_VARIABLES: Dict[int, Tuple[int, ...]] = {
    1: (2, 3, 4, 7, 8, 10, 11),
    2: (2, 3, 4, 5, 8, 10, 11),
}


def flag_equations(field: Fq, a: Point) -> Tuple[int, int, int, int]:
    """f, g1, g2, g3 at a point"""
    p = field.p
    F = field

    def pw(i: int, k: int) -> int:
        return int(F.pow(a[i], k))

    def m(*xs: int) -> int:
        out = 1
        for x in xs:
            out = int(F.mul(out, x))
        return out

    def s(*terms: Tuple[int, int]) -> int:
        out = 0
        for sign, value in terms:
            out = int(F.add(out, value if sign > 0 else F.neg(value)))
        return out

    q2 = p * p
    f = s(
        (1, m(a[1], pw(4, q2))),
        (-1, m(pw(1, q2), a[4])),
        (1, m(a[2], pw(3, q2))),
        (-1, m(pw(2, q2), a[3])),
    )
    a5 = pw(5, p - 1)
    g1 = s(
        (1, m(a[1], pw(8, p))),
        (-1, m(pw(1, p), a5, a[8])),
        (1, m(a[2], pw(7, p))),
        (-1, m(pw(2, p), a5, a[7])),
        (1, m(pw(3, p), a5, a[6])),
        (-1, m(a[3], pw(6, p))),
    )
    g2 = s((1, m(a[1], pw(11, p))), (1, m(a[2], pw(10, p))), (-1, m(a[3], pw(9, p))))
    g3 = s((1, m(pw(1, p), a[11])), (1, m(pw(2, p), a[10])), (-1, m(pw(3, p), a[9])))
    return f, g1, g2, g3


def flag_jacobian(field: Fq, a: Point, chart: int) -> NDArray[np.int64]:
    """4 x 7 Jacobian of (f, g1, g2, g3) in the chart variables"""
    p = field.p
    F = field
    pw = lambda i, k: int(F.pow(a[i], k))  # noqa: E731
    a5_p1 = pw(5, p - 1)
    partials: Dict[Tuple[int, int], int] = {
        (0, 2): pw(3, p * p),
        (0, 3): int(F.neg(pw(2, p * p))),
        (0, 4): int(F.neg(pw(1, p * p))),
        (1, 2): pw(7, p),
        (1, 3): int(F.neg(pw(6, p))),
        # -(p - 1) = 1 in characteristic p; 0^0 = 1
        (1, 5): int(
            F.mul(
                pw(5, p - 2),
                F.sub(
                    F.add(F.mul(pw(1, p), a[8]), F.mul(pw(2, p), a[7])),
                    F.mul(pw(3, p), a[6]),
                ),
            )
        ),
        (1, 7): int(F.neg(F.mul(pw(2, p), a5_p1))),
        (1, 8): int(F.neg(F.mul(pw(1, p), a5_p1))),
        (2, 2): pw(10, p),
        (2, 3): int(F.neg(pw(9, p))),
        (3, 10): pw(2, p),
        (3, 11): pw(1, p),
    }
    return np.array(
        [
            [partials.get((row, j), 0) for j in CHART_VARIABLES[chart]]
            for row in range(4)
        ],
        dtype=np.int64,
    )


def check_sample(field: Fq, a: Point, chart: int) -> Optional[str]:
    """reason why `a` is not a valid sample of `chart`, or None"""
    fixed = {1: {1: 1, 5: 1, 9: 1, 6: 0}, 2: {1: 1, 7: 1, 9: 1, 5: 0, 6: 0}}[chart]
    for i, value in fixed.items():
        if a.get(i) != value:
            return f"chart {chart} requires a{i} = {value}"

    if any(flag_equations(field, a)):
        return "not on F0"

    return None


def _preimage_table(field: Fq, k: int) -> Dict[int, int]:
    """y -> some x with x^(p^k) - x = y"""
    xs = field.elements()
    ys = field.sub(field.frobenius(xs, k), xs)
    table: Dict[int, int] = {}
    for x, y in zip(xs.tolist(), ys.tolist()):
        table.setdefault(y, x)

    return table


def sample_flag_point(
    field: Fq,
    chart: int,
    rng: np.random.Generator,
    tables: Optional[Tuple[Dict[int, int], Dict[int, int]]] = None,
) -> Optional[Point]:
    """a random point of F0 in `chart`, or None if this draw has no completion"""
    F = field
    as1, as2 = tables or (_preimage_table(F, 1), _preimage_table(F, 2))
    a2 = int(F.random(rng))
    if F.in_subfield(a2, 2):
        return None

    a3 = int(F.random(rng))
    # f = 0: a4^(p^2) - a4 = -(a2 a3^(p^2) - a2^(p^2) a3)
    rhs = F.neg(F.sub(F.mul(a2, F.frobenius(a3, 2)), F.mul(F.frobenius(a2, 2), a3)))
    a4 = as2.get(int(rhs))
    if a4 is None:
        return None

    # g2 = g3 = 0 with a9 = 1
    quotient = F.div(F.sub(F.frobenius(a3, 2), a3), F.sub(F.frobenius(a2, 2), a2))
    a10 = int(F.nth_root_p(quotient))
    a11 = int(F.sub(F.frobenius(a3), F.mul(F.frobenius(a2), a10)))
    point: Point = {1: 1, 2: a2, 3: a3, 4: a4, 6: 0, 9: 1, 10: a10, 11: a11}
    if chart == 1:
        a7 = int(F.random(rng))
        # g1 = 0: a8^p - a8 = -(a2 a7^p - a2^p a7)
        rhs1 = F.neg(F.sub(F.mul(a2, F.frobenius(a7)), F.mul(F.frobenius(a2), a7)))
        a8 = as1.get(int(rhs1))
        if a8 is None:
            return None

        point.update({5: 1, 7: a7, 8: a8})
    else:
        # g1 = a8^p + a2 = 0
        point.update({5: 0, 7: 1, 8: int(F.nth_root_p(F.neg(a2)))})

    return point


@dataclass(frozen=True)
class ChartSummary:
    chart: int
    samples: int
    rank4: int
    rejected: int
    """draws without a completion to a point of F0"""
    witness: Optional[Dict[int, int]] = None
    """a sample with rank below 4"""

    @property
    def passed(self) -> bool:
        return self.samples == self.rank4


@dataclass(frozen=True)
class JacobianReport:
    p: int
    field_degree: int
    charts: Tuple[ChartSummary, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.charts)


def jacobian_rank_samples(
    p: int, trials: int = 100, seed: int = 0, field_degree: int = 4
) -> JacobianReport:
    """rank of the Jacobian of (f, g1, g2, g3) at random points of both charts"""
    field = get_field(p, field_degree)
    tables = (_preimage_table(field, 1), _preimage_table(field, 2))
    rng = np.random.default_rng(seed)
    summaries: List[ChartSummary] = []
    for chart in (1, 2):
        rank4 = 0
        rejected = 0
        witness: Optional[Point] = None
        samples = 0
        while samples < trials:
            point = sample_flag_point(field, chart, rng, tables)
            if point is None:
                rejected += 1
                if rejected > 100 * trials:
                    raise RuntimeError(f"chart {chart}: no valid samples over {field}")
                continue

            reason = check_sample(field, point, chart)
            assert reason is None, reason
            samples += 1
            if field.rank(flag_jacobian(field, point, chart)) == 4:
                rank4 += 1
            elif witness is None:
                witness = point
                logger.error("rank deficit at {}", point)

        summaries.append(ChartSummary(chart, samples, rank4, rejected, witness))

    return JacobianReport(p, field_degree, tuple(summaries))
