from fractions import Fraction

import pytest

import sslocus.core
from sslocus.core.common import (
    BudgetExceededError,
    ExceptionalClassError,
    GenusError,
    InconsistentSystemError,
    PrecisionError,
    SslocusError,
)
from sslocus.core.tautring import lambda_class


def test_package_imports():
    assert sslocus.core.__version__ == sslocus.core.VERSION


def test_class_terms_are_read_only():
    terms = lambda_class(3, 1).terms
    with pytest.raises(TypeError):
        terms[1] = Fraction(2)  # type: ignore


@pytest.mark.parametrize(
    "error,builtin",
    [
        (GenusError, ValueError),
        (BudgetExceededError, RuntimeError),
        (InconsistentSystemError, ArithmeticError),
        (PrecisionError, ArithmeticError),
        (ExceptionalClassError, TypeError),
    ],
)
def test_error_hierarchy(error: type, builtin: type):
    assert issubclass(error, SslocusError)
    assert issubclass(error, builtin)
