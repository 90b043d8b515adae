from __future__ import annotations

from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field
from ruyaml import YAML

from .common import Status
from .utils import VERSION

_STATUS_ICON: Dict[str, str] = {
    "pass": "✔️",
    "fail": "❌",
    "inconclusive": "❔",
    "finding": "⚠️",
}


class ReportItem(BaseModel):
    """a single named check"""

    name: str
    expected: str = ""
    computed: str = ""
    status: Status
    details: List[str] = Field(default_factory=list)
    traceback: List[str] = Field(default_factory=list)


class Report(BaseModel):
    """the outcome of one command line invocation"""

    schema_version: Literal["1"] = "1"
    version: str = VERSION
    """sslocus.core version"""
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    items: List[ReportItem] = Field(default_factory=list)
    wall_time: Optional[float] = None
    """seconds, only recorded on request"""

    def add_item(self, item: ReportItem) -> ReportItem:
        self.items.append(item)
        return item

    def check(
        self,
        name: str,
        expected: Any,
        computed: Any,
        details: Optional[List[str]] = None,
    ) -> ReportItem:
        """add a pass/fail item comparing `expected` and `computed` with =="""
        return self.add_item(
            ReportItem(
                name=name,
                expected=str(expected),
                computed=str(computed),
                status="pass" if expected == computed else "fail",
                details=details or [],
            )
        )

    @property
    def status(self) -> Literal["passed", "failed"]:
        return "failed" if any(i.status == "fail" for i in self.items) else "passed"

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "passed" else 1

    def format(self) -> str:
        """human readable table"""
        params = ", ".join(f"{k}={v}" for k, v in self.parameters.items())
        lines = [f"sslocus {self.command} ({params}): {self.status}"]
        rows = [("", "check", "expected", "computed")] + [
            (_STATUS_ICON[i.status], i.name, i.expected, i.computed) for i in self.items
        ]
        widths = [max(len(r[c]) for r in rows) for c in range(4)]
        for r in rows:
            lines.append(
                "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
            )

        for i in self.items:
            for d in i.details:
                lines.append(f"  {i.name}: {d}")

            if i.traceback:
                lines.append(f"  {i.name} traceback:")
                lines.extend("    " + t.rstrip() for t in i.traceback)

        if self.wall_time is not None:
            lines.append(f"wall time: {self.wall_time:.3f} s")

        return "\n".join(lines)

    def dump_structured(self) -> str:
        """one YAML document; keys in declaration order"""
        yaml = YAML()
        yaml.default_flow_style = False
        stream = StringIO()
        yaml.dump(self.model_dump(mode="json", exclude_none=True), stream)
        return stream.getvalue()

    def save(self, path: Path):
        path.parent.mkdir(parents=True, exist_ok=True)
        _ = path.write_text(self.dump_structured(), encoding="utf-8")
