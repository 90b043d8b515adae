import sys
import time
from pathlib import Path
from typing import Callable, Literal, Optional

import fire
from loguru import logger

from sslocus.core import __version__
from sslocus.core._settings import settings
from sslocus.core._verification import (
    Suite,
    classes_report,
    solve_report,
    verify_report,
)
from sslocus.core.common import SslocusError
from sslocus.core.report import Report

ReportFormat = Literal["table", "structured"]


def _emit(
    build: Callable[[], Report],
    format: Optional[ReportFormat],
    output: Optional[Path],
    timing: bool,
    log_level: str,
):
    logger.remove()
    _ = logger.add(sys.stderr, level=log_level.upper())
    start = time.perf_counter()
    try:
        report = build()
    except (SslocusError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(2)

    if timing:
        report.wall_time = time.perf_counter() - start

    if (format or settings.format) == "structured":
        print(report.dump_structured(), end="")
    else:
        print(report.format())

    if output is not None:
        report.save(Path(output))

    sys.exit(report.exit_code)


class Sslocus:
    def classes(
        self,
        g: int,
        p: Optional[int] = None,
        *,
        format: Optional[ReportFormat] = None,
        output: Optional[Path] = None,
        timing: bool = False,
        log_level: str = "WARNING",
    ):
        """cycle classes of the supersingular locus, its component count and EO classes

        Args:
            g: genus, 1 to 4
            p: evaluate at this prime
            format: 'table' or 'structured' (YAML); defaults to SSLOCUS_FORMAT
            output: also write the structured report to this path
            timing: record the wall time
            log_level: loguru level for messages on stderr
        """
        _emit(lambda: classes_report(g, p), format, output, timing, log_level)

    def solve(
        self,
        g: int,
        *,
        format: Optional[ReportFormat] = None,
        output: Optional[Path] = None,
        timing: bool = False,
        log_level: str = "WARNING",
    ):
        """derive f_g(p) from intersection numbers on the flag type variety

        Args:
            g: genus, 3 or 4
            format: 'table' or 'structured' (YAML); defaults to SSLOCUS_FORMAT
            output: also write the structured report to this path
            timing: record the wall time
            log_level: loguru level for messages on stderr
        """
        _emit(lambda: solve_report(g), format, output, timing, log_level)

    def verify(
        self,
        suite: Suite,
        *,
        p: int = 2,
        g: Optional[int] = None,
        m: Optional[int] = None,
        precision: Optional[int] = None,
        trials: Optional[int] = None,
        seed: int = 0,
        budget: Optional[int] = None,
        format: Optional[ReportFormat] = None,
        output: Optional[Path] = None,
        timing: bool = False,
        log_level: str = "WARNING",
    ):
        """run a verification suite

        Args:
            suite: 'counts', 'identities', 'dieudonne' or 'all'
            p: characteristic
            g: (dieudonne) genus, all of 1 to 4 if omitted
            m: (dieudonne) degree of the residue field
            precision: (dieudonne) p-adic precision N, 2g + 4 if omitted
            trials: seeded samples per genus (dieudonne) or chart (counts)
            seed: first seed
            budget: maximal number of enumerated points or subspaces
            format: 'table' or 'structured' (YAML); defaults to SSLOCUS_FORMAT
            output: also write the structured report to this path
            timing: record the wall time
            log_level: loguru level for messages on stderr
        """
        _emit(
            lambda: verify_report(suite, p, g, m, precision, trials, seed, budget),
            format,
            output,
            timing,
            log_level,
        )


Sslocus.__doc__ = f"""
cycle classes and verifications for the supersingular locus of A_g

library versions:
  sslocus.core {__version__}

"""


def main():
    fire.Fire(Sslocus, name="sslocus")


if __name__ == "__main__":
    main()
