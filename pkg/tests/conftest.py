from __future__ import annotations

import warnings
from typing import Mapping

from pytest import fixture

from sslocus.core import __version__
from sslocus.core.common import Monomial
from sslocus.core.dieudonne import WittContext, get_witt_context
from sslocus.core.exactpoly import RatFn
from sslocus.core.finitefield import Fq, get_field
from sslocus.core.flagcalc import solve_g4

warnings.warn(f"testing sslocus.core {__version__}")


@fixture(scope="session")
def solution_g4() -> Mapping[Monomial, RatFn]:
    return solve_g4()


@fixture(scope="session")
def f16() -> Fq:
    return get_field(2, 4)


# W(F_16) / 2^8
@fixture(scope="session")
def witt_context() -> WittContext:
    return get_witt_context(2, 4, 8)
