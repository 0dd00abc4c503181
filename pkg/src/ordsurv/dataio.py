"""CSV ingestion and JSON result reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

from .agreement import GroupedRecord, PairedSample, PairRecord
from .errors import DataError

SCHEMA_VERSION = "1"
SIG_DIGITS = 12


def _read_rows(text: str, required: tuple[str, ...]):
    """Return (line_number, {column: value}) pairs for the non-blank data rows."""
    reader = csv.reader(io.StringIO(text.lstrip("\ufeff")))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("missing header row") from None
    names = [h.strip().lower() for h in header]
    for col in required:
        if col not in names:
            raise DataError(f"missing column {col}")
    index = {name: i for i, name in enumerate(names)}
    rows = []
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(names):
            raise DataError(f"wrong number of fields at line {line}")
        rows.append((line, {name: row[i].strip() for name, i in index.items()}))
    return rows


def _number(value: str, line: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise DataError(f"bad number at line {line}") from None
    if not math.isfinite(x):
        raise DataError(f"bad number at line {line}")
    return x


def parse_paired_csv(text: str, scale=None) -> PairedSample:
    """Parse ``id,a,b`` rows (any column order, header names case-insensitive)."""
    records = []
    seen = set()
    for line, row in _read_rows(text, ("id", "a", "b")):
        rid = row["id"]
        if not rid:
            raise DataError(f"empty id at line {line}")
        if rid in seen:
            raise DataError(f"duplicate id {rid}")
        seen.add(rid)
        records.append(PairRecord(rid, _number(row["a"], line), _number(row["b"], line)))
    return PairedSample(tuple(records), scale)


def parse_grouped_csv(text: str) -> list[GroupedRecord]:
    """Parse ``id,group,score[,event]`` rows; a missing event column means all events."""
    rows = _read_rows(text, ("id", "group", "score"))
    records = []
    seen = set()
    for line, row in rows:
        rid = row["id"]
        if not rid:
            raise DataError(f"empty id at line {line}")
        if rid in seen:
            raise DataError(f"duplicate id {rid}")
        seen.add(rid)
        group = row["group"]
        if not group:
            raise DataError(f"empty group at line {line}")
        score = _number(row["score"], line)
        event = True
        if "event" in row:
            flag = row["event"]
            if flag not in ("0", "1"):
                raise DataError(f"bad event flag at line {line}")
            event = flag == "1"
        records.append(GroupedRecord(rid, group, score, event))
    return records


# -- reports -------------------------------------------------------------------


@dataclass
class ResultReport:
    command: str
    method: dict = field(default_factory=dict)
    dataset: dict = field(default_factory=dict)
    curves: list = field(default_factory=list)
    test: dict | None = None
    permutation: dict | None = None
    crossings: dict | None = None
    calibration: dict | None = None
    notes: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "method": self.method,
            "dataset": self.dataset,
            "curves": self.curves,
            "test": self.test,
            "permutation": self.permutation,
            "crossings": self.crossings,
            "calibration": self.calibration,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ResultReport:
        return cls(**data)


def curve_summary(label, curve) -> dict:
    return {"label": str(label), **curve.to_dict()}


def _normalize(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        x = float(format(value, f".{SIG_DIGITS}g"))
        if x == int(x) and abs(x) < 1e15:
            return int(x)
        return x
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return _normalize(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_report_json(report: ResultReport | dict) -> str:
    """Deterministic JSON: sorted keys, numbers rounded to 12 significant digits."""
    data = report.to_dict() if isinstance(report, ResultReport) else report
    return json.dumps(_normalize(data), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_report_json(text: str) -> ResultReport:
    return ResultReport.from_dict(json.loads(text))


def report_schema() -> dict:
    return json.loads(resources.files("ordsurv").joinpath("report.schema.json").read_text())


def validate_report(report: ResultReport | dict | str) -> None:
    """Raise ``jsonschema.ValidationError`` if the report breaks the schema."""
    import jsonschema

    if isinstance(report, str):
        data = json.loads(report)
    elif isinstance(report, ResultReport):
        data = json.loads(write_report_json(report))
    else:
        data = report
    jsonschema.validate(data, report_schema())
