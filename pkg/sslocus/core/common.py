from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Literal, Tuple, Union

Rational = Union[int, Fraction]

Status = Literal["pass", "fail", "inconclusive", "finding"]
"""status of a single verification item"""

FormKind = Literal["hermitian", "symplectic"]
RewriteOrder = Literal["ascending", "descending", "random"]

Monomial = Tuple[int, int, int]
"""exponents (a, b, c) of l0^a l1^b l2^c"""

Frozen = MappingProxyType
"""read-only view of a mapping"""


class SslocusError(Exception):
    """base class of all errors raised by sslocus.core"""


class GenusError(SslocusError, ValueError):
    """genus out of the supported range or two classes of different genus"""


class BudgetExceededError(SslocusError, RuntimeError):
    """an exhaustive enumeration would exceed the configured budget"""


class InconsistentSystemError(SslocusError, ArithmeticError):
    """a linear system or a claimed identity does not hold"""


class PrecisionError(SslocusError, ArithmeticError):
    """the p-adic working precision does not suffice"""


class ExceptionalClassError(SslocusError, TypeError):
    """the exceptional marker may not enter monomial products"""
