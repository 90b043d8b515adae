import traceback
from fractions import Fraction
from typing import Callable, List, Literal, Optional, Sequence

from loguru import logger

from . import dieudonne, finitefield, flagcalc, strata, tautring
from .common import GenusError
from .exactpoly import P, proportionality_v
from .report import Report, ReportItem

Suite = Literal["counts", "identities", "dieudonne", "all"]
SUITES: Sequence[Suite] = ("counts", "identities", "dieudonne", "all")

PROPORTIONALITY_TABLE = {
    0: Fraction(1),
    1: Fraction(1, 24),
    2: Fraction(1, 5760),
    3: Fraction(1, 2903040),
    4: Fraction(1, 1393459200),
}


def _run(report: Report, name: str, check: Callable[[], None]) -> None:
    """run `check`; an exception becomes a failed item"""
    try:
        check()
    except Exception as e:
        logger.error("{} failed: {}", name, e)
        _ = report.add_item(
            ReportItem(
                name=name,
                computed=str(e),
                status="fail",
                traceback=traceback.format_tb(e.__traceback__),
            )
        )


def classes_report(g: int, p: Optional[int] = None) -> Report:
    """cycle classes of the supersingular locus and its relatives in genus g"""
    if not 1 <= g <= 4:
        raise GenusError(f"expected 1 <= g <= 4, got g={g}")

    report = Report(command="classes", parameters=dict(g=g, p=p))

    def add(name: str, value: str, numeric: Optional[Fraction] = None):
        _ = report.add_item(
            ReportItem(
                name=name,
                computed=value if numeric is None else f"{value} = {numeric}",
                status="pass",
            )
        )

    ss = strata.ss_class(g)
    add(f"[S_{g}]", str(ss), None if p is None else ss.evaluate(p))
    n = strata.component_count_N(g)
    add(f"N_{g}", str(n), None if p is None else n.eval(p))
    mass = strata.superspecial_mass(g)
    add("superspecial mass", str(mass), None if p is None else mass.eval(p))
    for f in range(g + 1):
        eo = strata.eo_prank_class(g, f)
        add(f"p-rank <= {f}", str(eo), None if p is None else eo.evaluate(p))

    if g % 2 == 0:
        _ = report.check("mass * correction = N", True, strata.mass_correction_holds(g))

    return report


def _solve_g4(report: Report):
    def degrees():
        solution = flagcalc.solve_g4()
        closed = flagcalc.solved_vector_closed_form()
        for m in flagcalc.UNKNOWNS:
            _ = report.check(f"deg {flagcalc.monomial_name(m)}", closed[m], solution[m])

    def derivation():
        d = flagcalc.f4()
        _ = report.check(
            "f_4",
            strata.ss_class(4).coefficient.expand(),
            d.result.expand(),
            details=[f"{label}: {value}" for label, value in d.steps],
        )

    def combined():
        p = P
        r = p * p - p + 1
        expected = tuple(str(x) for x in (2 * p, 0, 0, 0, -2 * r))
        computed = tuple(str(x) for x in flagcalc.combined_relation())
        _ = report.check("p c3A + (p - 1) c2L", expected, computed)

    def positivity():
        bound = flagcalc.positivity_bound()
        _ = report.check(
            "deg lambda_1^4 as a function of x", True, bound.matches_closed_form
        )
        _ = report.check(
            "solved x exceeds p (p^2+1) (p-1)^2",
            True,
            all(bound.holds_at(p0) for p0 in (2, 3, 5, 7)),
        )

    def lambda1_fourth():
        check = flagcalc.lambda1_fourth_check()
        name = "lambda_1^4 = 8 lambda_3 lambda_1 - 8 lambda_4"
        _ = report.check(name, True, check.holds)

    def crosscheck():
        cc = flagcalc.crosscheck_printed_g4()
        _ = report.add_item(
            ReportItem(
                name=f"{flagcalc.FINAL_COMBINATION} at the solution",
                expected=str(cc.printed_value),
                computed=str(cc.values[flagcalc.FINAL_COMBINATION]),
                status="pass" if cc.final_matches_printed else "finding",
            )
        )
        for pair in cc.pairs:
            _ = report.add_item(
                ReportItem(
                    name=f"{pair.first} - {pair.second}",
                    expected="0",
                    computed=str(pair.difference),
                    status="pass" if pair.agree else "finding",
                    details=[
                        ("in" if pair.in_relation_span else "not in")
                        + " the span of the relations"
                    ],
                )
            )

    for name, check in [
        ("solved degrees", degrees),
        ("f_4", derivation),
        ("combined relation", combined),
        ("positivity", positivity),
        ("lambda_1^4", lambda1_fourth),
        ("crosscheck", crosscheck),
    ]:
        _run(report, name, check)


def _solve_g3(report: Report):
    def chain():
        c = flagcalc.g3_chain()
        p = P
        _ = report.check(
            "lambda_1^2 - 2 lambda_2 is a nonzero multiple of l0^2",
            True,
            bool(c.l0_squared_coefficient),
        )
        _ = report.check(
            "deg lambda_2",
            strata.lambda_degree_on_component(3).expand(),
            c.deg_lambda2.expand(),
        )
        _ = report.check("S^2", -2 * (p + 1), c.section_self_intersection)
        _ = report.check(
            "f_3",
            strata.ss_class(3).coefficient.expand(),
            c.f3.expand(),
            details=[f"{label}: {value}" for label, value in c.derivation.steps],
        )

    _run(report, "g=3 chain", chain)


def solve_report(g: int) -> Report:
    """derivation of f_g for g in (3, 4)"""
    if g not in (3, 4):
        raise GenusError(f"expected g in (3, 4), got g={g}")

    report = Report(command="solve", parameters=dict(g=g))
    if g == 4:
        _solve_g4(report)
    else:
        _solve_g3(report)

    return report


def _counts(report: Report, p: int, trials: int, seed: int, budget: Optional[int]):
    q = p * p

    def fermat():
        _ = report.check(
            "Fermat curve", p**3 + 1, finitefield.count_fermat_curve(p, budget=budget)
        )
        _ = report.check(
            "#F0 (g=3)",
            strata.superspecial_point_counts(3)["F0"].eval(p),
            finitefield.superspecial_fibre_count(p),
        )

    def surfaces():
        f2 = finitefield.count_F2_surface(p, budget=budget)
        _ = report.check("F2", (q + 1) * (q * q + 1), f2)
        f2_reversed = finitefield.count_F2_surface(p, True, budget)
        _ = report.check("F2 reversed", f2, f2_reversed)
        g1 = finitefield.count_G1_surface(p, budget=budget)
        _ = report.check("G1", (q + 1) * (p**3 + 1), g1)
        g1_reversed = finitefield.count_G1_surface(p, True, budget)
        _ = report.check("G1 reversed", g1, g1_reversed)
        for permutation in finitefield.surface_symmetries()[1:]:
            _ = report.check(
                f"F2 under {permutation}",
                f2,
                finitefield.count_F2_surface(p, budget=budget, permutation=permutation),
            )
            _ = report.check(
                f"G1 under {permutation}",
                g1,
                finitefield.count_G1_surface(p, budget=budget, permutation=permutation),
            )

    def isotropic():
        count = finitefield.count_isotropic
        _ = report.check(
            "hermitian isotropic planes",
            (p + 1) * (p**3 + 1),
            count("hermitian", 4, 2, p, budget=budget),
        )
        _ = report.check(
            "hermitian isotropic lines (x -> x^(p^2))",
            (q + 1) * (q * q + 1),
            count("hermitian", 4, 1, p, conjugation_power=2, budget=budget),
        )
        _ = report.check(
            "hermitian isotropic lines (x -> x^p)",
            (q + 1) * (p**3 + 1),
            count("hermitian", 4, 1, p, budget=budget),
        )
        _ = report.check(
            "symplectic isotropic planes",
            (q + 1) * (q * q + 1),
            count("symplectic", 4, 2, p, budget=budget),
        )

    def quadric():
        result = finitefield.count_quadric_Q(p, budget=budget)
        _ = report.check("quadric Q", (q + 1) * (q * q + 1), result.count)
        _ = report.check("quadric Q shape", "smooth", result.shape)

    def fiber_curves():
        field = finitefield.get_field(p, 4)
        on_line = finitefield.analyze_fiber_curve(field, 1, budget=budget)
        _ = report.check(
            "fibre curve, a2 rational: points", p * p**4 + 1, on_line.count
        )
        _ = report.check("fibre curve, a2 rational: lines", p, on_line.lines)
        _ = report.check(
            "fibre curve, a2 rational: singular points",
            (on_line.cusp,),
            on_line.singular_points,
        )
        a2 = next(
            int(x) for x in field.elements() if not field.in_subfield(int(x), 2)
        )
        generic = finitefield.analyze_fiber_curve(field, a2, budget=budget)
        _ = report.check("fibre curve, a2 generic: points", p**4 + 1, generic.count)
        _ = report.check(
            "fibre curve, a2 generic: singular points",
            () if p == 2 else (generic.cusp,),
            generic.singular_points,
        )

    def jacobian():
        result = finitefield.jacobian_rank_samples(p, trials=trials, seed=seed)
        for chart in result.charts:
            _ = report.add_item(
                ReportItem(
                    name=f"Jacobian rank, chart {chart.chart}",
                    expected=f"{chart.samples} x rank 4",
                    computed=f"{chart.rank4} x rank 4",
                    status="pass" if chart.passed else "fail",
                    details=[f"{chart.rejected} draws without completion"]
                    + ([] if chart.witness is None else [f"witness {chart.witness}"]),
                )
            )

    for name, check in [
        ("Fermat curve", fermat),
        ("surfaces", surfaces),
        ("isotropic subspaces", isotropic),
        ("quadric Q", quadric),
        ("fibre curves", fiber_curves),
        ("Jacobian", jacobian),
    ]:
        _run(report, name, check)


def _identities(report: Report):
    def counting():
        for g in (3, 4):
            identities = strata.consistency_identities(g)
            for identity in identities:
                _ = report.check(identity.name, True, identity.holds())

            for e in strata.evaluate_identities(identities):
                if not e.holds:
                    _ = report.check(f"{e.name} at p={e.p}", e.lhs, e.rhs)

        for g in (2, 4):
            _ = report.check(
                f"mass * correction = N_{g}", True, strata.mass_correction_holds(g)
            )

    def ring():
        for g in range(1, 6):
            _ = report.check(f"#basis R_{g}", 2**g, len(tautring.basis(g)))
            _ = report.check(f"R_{g} Gorenstein", True, tautring.is_gorenstein(g))
            _ = report.check(
                f"c(E) c(E^) = 1 in R_{g}", True, tautring.defining_relation_holds(g)
            )

        for g, v in PROPORTIONALITY_TABLE.items():
            _ = report.check(f"v({g})", v, proportionality_v(g))

    _run(report, "counting identities", counting)
    _run(report, "tautological ring", ring)


def _dieudonne(
    report: Report,
    genera: Sequence[int],
    p: int,
    m: Optional[int],
    precision: Optional[int],
    trials: int,
    seed: int,
):
    for g in genera:

        def check(g: int = g):
            records = dieudonne.run_trials(
                g, p, m, precision, trials, seed, generic="free"
            )
            summary = dieudonne.summarize_trials(g, records)
            details = [
                f"{r.index} {r.kind}: criterion {r.criterion}, slopes {r.slopes},"
                + f" eq4 residual {r.eq4.residual_valuation}"
                for r in records
            ]
            _ = report.check(
                f"g={g}: criterion implies slopes 1/2",
                True,
                summary.implication_holds,
                details=details,
            )
            _ = report.check(f"g={g}: structure", 0, summary.structural_failures)
            if summary.inconclusive:
                _ = report.add_item(
                    ReportItem(
                        name=f"g={g}: slopes",
                        expected="0 inconclusive",
                        computed=f"{summary.inconclusive} inconclusive",
                        status="inconclusive",
                    )
                )

            if summary.rejection_rate is not None:
                _ = report.add_item(
                    ReportItem(
                        name=f"g={g}: free draws rejected",
                        expected=">= 9/10",
                        computed=str(summary.rejection_rate),
                        status=(
                            "pass"
                            if summary.rejection_rate >= Fraction(9, 10)
                            else "fail"
                        ),
                    )
                )

        _run(report, f"dieudonne g={g}", check)


def verify_report(
    suite: Suite,
    p: int = 2,
    g: Optional[int] = None,
    m: Optional[int] = None,
    precision: Optional[int] = None,
    trials: Optional[int] = None,
    seed: int = 0,
    budget: Optional[int] = None,
) -> Report:
    """run a verification suite"""
    if suite not in SUITES:
        raise ValueError(f"unknown suite '{suite}', expected one of {SUITES}")

    if g is not None and not 1 <= g <= 4:
        raise GenusError(f"expected 1 <= g <= 4, got g={g}")

    report = Report(
        command=f"verify {suite}",
        parameters=dict(
            p=p, g=g, m=m, precision=precision, trials=trials, seed=seed, budget=budget
        ),
    )
    if suite in ("counts", "all"):
        _counts(report, p, 100 if trials is None else trials, seed, budget)

    if suite in ("identities", "all"):
        _identities(report)

    if suite in ("dieudonne", "all"):
        genera: List[int] = [1, 2, 3, 4] if g is None else [g]
        n = 20 if trials is None else trials
        _dieudonne(report, genera, p, m, precision, n, seed)

    logger.info("verify {}: {}", suite, report.status)
    return report
