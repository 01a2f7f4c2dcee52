"""Report values and their markdown, csv and json renderings.

Every cell is a string, so rendering is byte-stable and the json form
round-trips exactly.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

FORMATS = ("md", "csv", "json")


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple
    rows: tuple = ()

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row {r!r} does not match columns {self.columns!r}")
            if not all(isinstance(x, str) for x in r):
                raise TypeError("table cells must be strings")


@dataclass(frozen=True)
class Report:
    op: str
    command: tuple  # ((key, value), ...) echo of the command, values as strings
    tables: tuple  # Table, the first one is the primary result
    provenance: tuple  # ((key, value), ...)
    verdict: Optional[str] = None
    notes: tuple = field(default=())

    @property
    def primary(self) -> Table:
        return self.tables[0]

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "command": [list(kv) for kv in self.command],
            "tables": [{"name": t.name, "columns": list(t.columns), "rows": [list(r) for r in t.rows]}
                       for t in self.tables],
            "provenance": [list(kv) for kv in self.provenance],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            d["op"],
            tuple(tuple(kv) for kv in d["command"]),
            tuple(Table(t["name"], tuple(t["columns"]), tuple(tuple(r) for r in t["rows"])) for t in d["tables"]),
            tuple(tuple(kv) for kv in d["provenance"]),
            d.get("verdict"),
            tuple(d.get("notes", ())),
        )


def _md_cell(s: str) -> str:
    return s.replace("|", "\\|").replace("\n", " ")


def to_markdown(r: Report) -> str:
    out = [f"# pqa {r.op}", ""]
    if r.command:
        out.append("## Command")
        out.append("")
        out.extend(f"- {k}: `{v}`" for k, v in r.command)
        out.append("")
    for t in r.tables:
        out.append(f"## {t.name}")
        out.append("")
        out.append("| " + " | ".join(_md_cell(c) for c in t.columns) + " |")
        out.append("|" + "|".join("---" for _ in t.columns) + "|")
        out.extend("| " + " | ".join(_md_cell(x) for x in row) + " |" for row in t.rows)
        if not t.rows:
            out.append("")
            out.append("(no rows)")
        out.append("")
    if r.verdict is not None:
        out.append(f"**Verdict:** {r.verdict}")
        out.append("")
    if r.notes:
        out.append("## Notes")
        out.append("")
        out.extend(f"- {n}" for n in r.notes)
        out.append("")
    out.append("## Provenance")
    out.append("")
    out.extend(f"- {k}: {v}" for k, v in r.provenance)
    return "\n".join(out) + "\n"


def to_csv(r: Report) -> str:
    """The primary table only; header row first."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(r.primary.columns)
    w.writerows(r.primary.rows)
    return buf.getvalue()


def to_json(r: Report) -> str:
    return json.dumps(r.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_report(r: Report, fmt: str = "md") -> str:
    if fmt in ("md", "markdown"):
        return to_markdown(r)
    if fmt == "csv":
        return to_csv(r)
    if fmt == "json":
        return to_json(r)
    raise ValueError(f"unknown format {fmt!r}; use one of {', '.join(FORMATS)}")


def parse_json_report(text: str) -> Report:
    return Report.from_dict(json.loads(text))
