"""Long-format result rows and lossless CSV/JSON serialization.

One row per (disorder strength, time, observable).  Occupation profiles use
the site-tagged observable names ``occupation[x]``.  Floats are written with
Python's shortest round-trip representation, so emit -> parse -> emit is a
byte-identical fixed point.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import OutputError

CSV_HEADER = ("W", "t", "observable", "value", "std_error", "N")


@dataclass(frozen=True)
class ResultRow:
    disorder_strength: float
    time: int
    observable: str
    value: float
    std_error: float | None
    realizations: int


@dataclass
class ResultTable:
    rows: list[ResultRow]

    def series(
        self, observable: str, disorder_strength: float
    ) -> tuple[list[int], list[float], list[float | None]]:
        """Time-ordered (times, values, std_errors) for one observable."""
        picked = [
            r
            for r in self.rows
            if r.observable == observable and r.disorder_strength == disorder_strength
        ]
        picked.sort(key=lambda r: r.time)
        return (
            [r.time for r in picked],
            [r.value for r in picked],
            [r.std_error for r in picked],
        )

    def value(self, observable: str, disorder_strength: float, time: int) -> ResultRow:
        for r in self.rows:
            if (
                r.observable == observable
                and r.disorder_strength == disorder_strength
                and r.time == time
            ):
                return r
        raise KeyError(f"no row ({disorder_strength}, {time}, {observable})")

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow(
                [
                    repr(float(r.disorder_strength)),
                    r.time,
                    r.observable,
                    repr(float(r.value)),
                    "" if r.std_error is None else repr(float(r.std_error)),
                    r.realizations,
                ]
            )
        return buffer.getvalue()

    def to_json(self) -> str:
        payload = {
            "columns": list(CSV_HEADER),
            "rows": [
                {
                    "W": float(r.disorder_strength),
                    "t": r.time,
                    "observable": r.observable,
                    "value": float(r.value),
                    "std_error": None if r.std_error is None else float(r.std_error),
                    "N": r.realizations,
                }
                for r in self.rows
            ],
        }
        return json.dumps(payload, indent=1) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != list(CSV_HEADER):
            raise OutputError(f"unexpected CSV header {header}")
        rows = [
            ResultRow(
                disorder_strength=float(w),
                time=int(t),
                observable=obs,
                value=float(value),
                std_error=float(err) if err else None,
                realizations=int(n),
            )
            for w, t, obs, value, err, n in reader
        ]
        return cls(rows)

    @classmethod
    def from_json(cls, text: str) -> "ResultTable":
        payload = json.loads(text)
        rows = [
            ResultRow(
                disorder_strength=float(r["W"]),
                time=int(r["t"]),
                observable=r["observable"],
                value=float(r["value"]),
                std_error=None if r["std_error"] is None else float(r["std_error"]),
                realizations=int(r["N"]),
            )
            for r in payload["rows"]
        ]
        return cls(rows)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise OutputError(f"unknown output format {fmt!r}")


def emit(table: ResultTable, fmt: str, path: str | Path) -> Path:
    """Write the table to disk; I/O failures carry the offending path."""
    text = table.render(fmt)
    target = Path(path)
    try:
        target.write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write results to {target}: {exc}") from exc
    return target


def read_table(path: str | Path) -> ResultTable:
    target = Path(path)
    try:
        text = target.read_text()
    except OSError as exc:
        raise OutputError(f"cannot read results from {target}: {exc}") from exc
    if target.suffix == ".json" or text.lstrip().startswith("{"):
        return ResultTable.from_json(text)
    return ResultTable.from_csv(text)
