import pytest

from sslocus.core._verification import (
    _run,  # pyright: ignore[reportPrivateUsage]
    classes_report,
    solve_report,
    verify_report,
)
from sslocus.core.common import GenusError
from sslocus.core.report import Report


def test_failing_check_is_captured():
    report = Report(command="test")

    def check():
        raise ArithmeticError("boom")

    _run(report, "exploding check", check)
    (item,) = report.items
    assert item.status == "fail"
    assert item.computed == "boom"
    assert item.traceback
    assert report.exit_code == 1


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_classes_report(g: int):
    report = classes_report(g, 3)
    assert report.status == "passed"
    names = [i.name for i in report.items]
    assert names[:3] == [f"[S_{g}]", f"N_{g}", "superspecial mass"]
    assert sum(n.startswith("p-rank") for n in names) == g + 1


def test_classes_report_values():
    report = classes_report(1, 5)
    assert report.items[0].computed == "(p - 1) λ1 = 4"
    with pytest.raises(GenusError):
        _ = classes_report(5)


def test_solve_report_g4():
    report = solve_report(4)
    assert report.status == "passed"
    findings = [i for i in report.items if i.status == "finding"]
    assert len(findings) == 3
    f4 = next(i for i in report.items if i.name == "f_4")
    assert f4.status == "pass"
    assert f4.details


def test_solve_report_g3():
    report = solve_report(3)
    assert report.status == "passed"
    assert all(i.status == "pass" for i in report.items)
    with pytest.raises(GenusError):
        _ = solve_report(2)


def test_verify_identities():
    report = verify_report("identities")
    assert report.status == "passed", report.format()
    assert report.command == "verify identities"


def test_verify_counts():
    report = verify_report("counts", p=2, trials=20)
    assert report.status == "passed", report.format()
    assert any(i.name == "Jacobian rank, chart 2" for i in report.items)


def test_verify_dieudonne():
    report = verify_report("dieudonne", g=3, trials=3, seed=1)
    assert report.status == "passed", report.format()
    rejection = next(i for i in report.items if i.name == "g=3: free draws rejected")
    assert rejection.computed == "1"


def test_verify_arguments():
    with pytest.raises(ValueError):
        _ = verify_report("everything")  # type: ignore

    with pytest.raises(GenusError):
        _ = verify_report("dieudonne", g=5)
