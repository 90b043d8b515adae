"""
.. include:: ../../README.md
"""

from ._settings import settings as settings
from ._verification import classes_report as classes_report
from ._verification import solve_report as solve_report
from ._verification import verify_report as verify_report
from .common import BudgetExceededError as BudgetExceededError
from .common import ExceptionalClassError as ExceptionalClassError
from .common import GenusError as GenusError
from .common import InconsistentSystemError as InconsistentSystemError
from .common import PrecisionError as PrecisionError
from .common import SslocusError as SslocusError
from .exactpoly import FactoredPPoly as FactoredPPoly
from .exactpoly import PPoly as PPoly
from .exactpoly import RatFn as RatFn
from .finitefield import Fq as Fq
from .flagcalc import f4 as f4
from .flagcalc import g3_chain as g3_chain
from .flagcalc import solve_g4 as solve_g4
from .report import Report as Report
from .report import ReportItem as ReportItem
from .strata import ss_class as ss_class
from .tautring import TautClass as TautClass
from .utils import VERSION

__version__ = VERSION
