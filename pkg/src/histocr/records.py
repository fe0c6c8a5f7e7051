"""Line-delimited corpus records: loading, validation and persistence.

One JSON object per line, UTF-8. Input rows carry ``id, newspaper, country,
city, year, text``; processed rows add ``status, text_llm, text_final,
corrections``. Field order is fixed so repeated writes of the same data are
byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import ClassifiedCorrection

STATUS_CLEANED_OUT = "cleaned_out"
STATUS_EXCLUDED_CONTENT_POLICY = "excluded_content_policy"
STATUS_EXCLUDED_LLM_FAILURE = "excluded_llm_failure"
STATUS_CORRECTED = "corrected"
STATUSES = (
    STATUS_CLEANED_OUT,
    STATUS_EXCLUDED_CONTENT_POLICY,
    STATUS_EXCLUDED_LLM_FAILURE,
    STATUS_CORRECTED,
)

YEAR_RANGE = (1800, 1899)


class CorpusError(Exception):
    """Unrecoverable corpus problem (unreadable file, duplicate ids)."""


@dataclass(frozen=True)
class LineDiagnostic:
    line: int
    message: str
    severity: str = "error"  # error = line skipped, warning = accepted but flagged

    def __str__(self) -> str:
        return f"line {self.line}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class CorpusRecord:
    """One newspaper text fragment with provenance metadata."""

    id: str
    newspaper: str = ""
    country: str = ""
    city: str | None = None
    year: int | None = None
    text: str = ""

    @property
    def decade(self) -> int | None:
        if self.year is None:
            return None
        return self.year - self.year % 10

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "newspaper": self.newspaper,
            "country": self.country,
            "city": self.city,
            "year": self.year,
            "text": self.text,
        }


@dataclass
class ProcessedRecord:
    """A corpus record after the pipeline, with exactly one status.

    ``text_final`` is present if and only if the record was corrected; it has
    the OCR errors applied and the surface forms left untouched.
    """

    record: CorpusRecord
    status: str
    text_llm: str | None = None
    text_final: str | None = None
    corrections: list[ClassifiedCorrection] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.text_final is not None) != (self.status == STATUS_CORRECTED):
            raise ValueError("text_final must be present exactly when status is corrected")

    def to_json_dict(self) -> dict:
        out = self.record.to_json_dict()
        out["status"] = self.status
        out["text_llm"] = self.text_llm
        out["text_final"] = self.text_final
        out["corrections"] = [_correction_to_dict(c) for c in self.corrections]
        return out


def _correction_to_dict(c: ClassifiedCorrection) -> dict:
    return {
        "original": c.original,
        "corrected": c.corrected,
        "label": c.label,
        "rule": c.rule,
        "ratio": c.ratio,
        "position": list(c.original_span),
        "corrected_position": list(c.corrected_span),
        "original_raw": c.original_raw,
        "corrected_raw": c.corrected_raw,
        "accent_only": c.accent_only,
        "frequency": c.frequency,
    }


def _correction_from_dict(d: dict) -> ClassifiedCorrection:
    return ClassifiedCorrection(
        original=d["original"],
        corrected=d["corrected"],
        label=d["label"],
        rule=d["rule"],
        ratio=d["ratio"],
        accent_only=d["accent_only"],
        original_span=tuple(d["position"]),
        corrected_span=tuple(d.get("corrected_position", (0, 0))),
        original_raw=d["original_raw"],
        corrected_raw=d["corrected_raw"],
        frequency=d.get("frequency", 1),
    )


@dataclass
class LoadResult:
    records: list  # CorpusRecord or ProcessedRecord
    diagnostics: list[LineDiagnostic]

    @property
    def errors(self) -> list[LineDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


def _parse_corpus_fields(obj: dict) -> CorpusRecord:
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise ValueError("missing or empty 'id'")
    text = obj.get("text")
    if not isinstance(text, str):
        raise ValueError("missing or non-string 'text'")
    if "\x00" in text:
        raise ValueError("text contains NUL characters")
    year = obj.get("year")
    if year is not None and (not isinstance(year, int) or isinstance(year, bool)):
        raise ValueError(f"'year' must be an integer, got {year!r}")
    city = obj.get("city")
    if city is not None and not isinstance(city, str):
        raise ValueError(f"'city' must be a string, got {city!r}")
    return CorpusRecord(
        id=rec_id,
        newspaper=str(obj.get("newspaper") or ""),
        country=str(obj.get("country") or ""),
        city=city,
        year=year,
        text=text,
    )


def load_corpus(path: str | Path) -> LoadResult:
    """Load corpus records in file order.

    Malformed lines are reported with their line number and skipped; records
    with a year outside the target range are accepted with a warning.
    Duplicate ids abort the load (downstream joins would be ambiguous).
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    records: list[CorpusRecord] = []
    diagnostics: list[LineDiagnostic] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("row is not an object")
            record = _parse_corpus_fields(obj)
        except (json.JSONDecodeError, ValueError) as exc:
            diagnostics.append(LineDiagnostic(lineno, str(exc)))
            continue
        if record.id in seen:
            raise CorpusError(
                f"{path}:{lineno}: duplicate id {record.id!r} (first seen on line {seen[record.id]})"
            )
        seen[record.id] = lineno
        if record.year is not None and not YEAR_RANGE[0] <= record.year <= YEAR_RANGE[1]:
            diagnostics.append(
                LineDiagnostic(
                    lineno,
                    f"year {record.year} outside target range {YEAR_RANGE[0]}-{YEAR_RANGE[1]}",
                    severity="warning",
                )
            )
        records.append(record)
    return LoadResult(records, diagnostics)


def load_processed(path: str | Path) -> LoadResult:
    """Load processed records (the pipeline output schema)."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read processed file {path}: {exc}") from exc

    records: list[ProcessedRecord] = []
    diagnostics: list[LineDiagnostic] = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            base = _parse_corpus_fields(obj)
            record = ProcessedRecord(
                record=base,
                status=obj["status"],
                text_llm=obj.get("text_llm"),
                text_final=obj.get("text_final"),
                corrections=[_correction_from_dict(c) for c in obj.get("corrections", [])],
            )
        except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
            diagnostics.append(LineDiagnostic(lineno, str(exc)))
            continue
        records.append(record)
    return LoadResult(records, diagnostics)


def _write_lines(dicts, path: str | Path) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for obj in dicts:
            fh.write(json.dumps(obj, ensure_ascii=False))
            fh.write("\n")


def write_corpus(records: list[CorpusRecord], path: str | Path) -> None:
    """One record per line, stable field order, byte-identical across runs."""
    _write_lines((r.to_json_dict() for r in records), path)


def write_processed(records: list[ProcessedRecord], path: str | Path) -> None:
    """Persist processed records in input order, deterministically."""
    _write_lines((r.to_json_dict() for r in records), path)
