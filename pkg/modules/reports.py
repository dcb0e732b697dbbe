"""Reports shared by the CLI commands: one dict, rendered as text or JSON."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

SHOWN_COUNTEREXAMPLES = 5


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    counterexamples: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed,
            "counterexamples": list(self.counterexamples),
        }


@dataclass
class Report:
    command: str
    system: Optional[str] = None
    sections: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)
    elapsed: Optional[float] = None

    def add(self, title: str, content: Any) -> None:
        self.sections[title] = content

    def check(self, name: str, checked: int = 0, counterexamples: Optional[List[str]] = None) -> CheckResult:
        result = CheckResult(name, checked, list(counterexamples or []))
        self.checks.append(result)
        return result

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 2

    def finish(self) -> "Report":
        self.elapsed = round(time.perf_counter() - self.started, 4)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "system": self.system,
            "sections": self.sections,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "elapsed_seconds": self.elapsed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        data = self.to_dict()
        lines = [f"gbds-lab {data['command']}" + (f" ({data['system']})" if data["system"] else "")]
        for title, content in data["sections"].items():
            lines.append("")
            lines.extend(_render_section(title, content))
        if data["checks"]:
            lines.append("")
            table = pd.DataFrame(
                [
                    {
                        "check": c["name"],
                        "checked": c["checked"],
                        "failures": len(c["counterexamples"]),
                        "status": "ok" if c["passed"] else "FAILED",
                    }
                    for c in data["checks"]
                ]
            )
            lines.append(table.to_string(index=False))
            for c in data["checks"]:
                for witness in c["counterexamples"][:SHOWN_COUNTEREXAMPLES]:
                    lines.append(f"  {c['name']}: {witness}")
            failed = sum(1 for c in data["checks"] if not c["passed"])
            lines.append("all checks passed" if not failed else f"{failed} check(s) failed")
        if data["elapsed_seconds"] is not None:
            lines.append(f"elapsed: {data['elapsed_seconds']}s")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_text()


def _render_section(title: str, content: Any) -> List[str]:
    if isinstance(content, list) and content and all(isinstance(row, dict) for row in content):
        return [f"{title}:", pd.DataFrame(content).to_string(index=False)]
    if isinstance(content, list):
        return [f"{title}:"] + [f"  {item}" for item in content] if content else [f"{title}: (none)"]
    if isinstance(content, dict):
        return [f"{title}:"] + [f"  {key}: {value}" for key, value in content.items()]
    return [f"{title}: {content}"]


def export_report_json(report: Report, path: str = "report.json") -> str:
    with open(path, "w", encoding="utf-8") as f:
        f.write(report.to_json())
    return str(Path(path))


__all__ = ["CheckResult", "Report", "export_report_json"]
