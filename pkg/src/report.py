"""
Verification reports: result rows with self-checking pass flags, serialised
as JSON (schema 1), CSV or plain text. Timestamps and wall times are kept in a
separate ``timing`` block so two runs with the same config and seed produce
identical bytes everywhere else.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import pytz

SCHEMA_VERSION = 1
TOOL_VERSION = "1.0.0"

_OPS = {
    ">=": lambda value, bound: value >= bound,
    "<=": lambda value, bound: value <= bound,
}


@dataclass(frozen=True)
class Check:
    """One comparison ``value op bound``; a row passes iff every check holds."""

    name: str
    value: float
    op: str
    bound: float

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unknown comparison {self.op!r}")

    def holds(self) -> bool:
        if math.isnan(self.value) or math.isnan(self.bound):
            return False
        return _OPS[self.op](self.value, self.bound)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "op": self.op, "bound": self.bound, "pass": self.holds()}


@dataclass
class ResultRow:
    suite: str
    name: str
    n: int
    k: int | None = None
    constant: float | None = None
    measured: dict = field(default_factory=dict)
    checks: tuple[Check, ...] = ()
    status: str = "checked"
    note: str = ""
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.holds() for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "constant": self.constant,
            "measured": dict(self.measured),
            "checks": [c.to_dict() for c in self.checks],
            "status": self.status,
            "note": self.note,
            "pass": self.passed,
        }


def recheck_row(data: dict) -> bool:
    """Recompute a serialised row's pass flag from its stored numbers."""
    checks = [Check(c["name"], float(c["value"]), c["op"], float(c["bound"])) for c in data.get("checks", [])]
    return all(c.holds() for c in checks)


def recheck_report(data: dict) -> bool:
    """True iff every stored pass flag (rows and summary) matches its numbers."""
    rows = data.get("rows", [])
    for row in rows:
        if bool(row.get("pass")) != recheck_row(row):
            return False
    overall = all(recheck_row(row) for row in rows)
    return bool(data.get("summary", {}).get("pass")) == overall


@dataclass
class VerificationReport:
    command: str
    config: dict
    rows: list[ResultRow] = field(default_factory=list)
    timezone: str = "UTC"
    started_at: datetime | None = None
    finished_at: datetime | None = None

    def start(self) -> None:
        self.started_at = datetime.now(pytz.timezone(self.timezone))

    def finish(self) -> None:
        self.finished_at = datetime.now(pytz.timezone(self.timezone))

    def add(self, row: ResultRow) -> None:
        self.rows.append(row)

    def extend(self, rows) -> None:
        self.rows.extend(rows)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failed_rows(self) -> list[ResultRow]:
        return [r for r in self.rows if not r.passed]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "config": self.config,
            "rows": [r.to_dict() for r in self.rows],
            "summary": {
                "rows": len(self.rows),
                "failed": len(self.failed_rows),
                "pass": self.passed,
            },
            "timing": {
                "started_at": self.started_at.isoformat() if self.started_at else None,
                "finished_at": self.finished_at.isoformat() if self.finished_at else None,
                "row_wall_times": [round(r.wall_time, 6) for r in self.rows],
            },
        }

    def to_json(self, include_timing: bool = True) -> str:
        data = self.to_dict()
        if not include_timing:
            data.pop("timing")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        return rows_to_csv(
            [
                {
                    "suite": r.suite,
                    "name": r.name,
                    "n": r.n,
                    "k": "" if r.k is None else r.k,
                    "constant": "" if r.constant is None else repr(r.constant),
                    "status": r.status,
                    "pass": r.passed,
                    **{f"measured.{key}": repr(value) for key, value in sorted(r.measured.items())},
                }
                for r in self.rows
            ]
        )

    def to_text(self) -> str:
        lines = [f"dirac-sharp {TOOL_VERSION} :: {self.command}"]
        for r in self.rows:
            flag = "PASS" if r.passed else "FAIL"
            k = "" if r.k is None else f" k={r.k}"
            const = "" if r.constant is None else f" constant={r.constant:.12g}"
            lines.append(f"[{flag}] {r.suite}/{r.name} n={r.n}{k}{const} ({r.status})")
            for c in r.checks:
                mark = "ok" if c.holds() else "VIOLATED"
                lines.append(f"    {c.name}: {c.value:.12g} {c.op} {c.bound:.12g}  {mark}")
            if r.note:
                lines.append(f"    note: {r.note}")
        lines.append(f"{len(self.rows) - len(self.failed_rows)}/{len(self.rows)} rows pass")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")


def rows_to_csv(rows: list[dict]) -> str:
    """RFC 4180 CSV; columns are the union of keys in first-seen order."""
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_output(text: str, out_path: Path | None) -> None:
    """Write to ``out_path`` (parents created) or stdout."""
    if out_path is None:
        print(text, end="")
        return
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
