"""Corpus- and run-level statistics over the processed output.

The report is a pure function of the pipeline outputs: identical inputs
produce byte-identical report files. Word counts come from whitespace
tokenization; token counts use the configured tokenizer and are labeled with
its id, since they are not comparable across tokenizers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import HALLUCINATION, OCR_ERROR, SURFACE_FORM
from .cleaning import TOKENIZERS, Tokenizer, word_tokens
from .records import (
    STATUS_CLEANED_OUT,
    STATUS_CORRECTED,
    STATUS_EXCLUDED_CONTENT_POLICY,
    ProcessedRecord,
)

UNKNOWN = "unknown"


@dataclass(frozen=True)
class RunReport:
    rows: int
    words: int
    tokens: int
    tokenizer_id: str
    newspapers: int
    year_range: tuple[int, int] | None
    rows_without_year: int
    total_corrections: int
    surface_forms: int
    non_accent_surface_forms: int
    pct_ocr_error: float
    pct_hallucination: float
    pct_surface_form: float
    pct_content_policy_excluded: float
    country_distribution: dict[str, float] = field(default_factory=dict)
    decade_distribution: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "words": self.words,
            "tokens": self.tokens,
            "tokenizer_id": self.tokenizer_id,
            "newspapers": self.newspapers,
            "year_range": list(self.year_range) if self.year_range else None,
            "rows_without_year": self.rows_without_year,
            "total_corrections": self.total_corrections,
            "surface_forms": self.surface_forms,
            "non_accent_surface_forms": self.non_accent_surface_forms,
            "pct_ocr_error": self.pct_ocr_error,
            "pct_hallucination": self.pct_hallucination,
            "pct_surface_form": self.pct_surface_form,
            "pct_content_policy_excluded": self.pct_content_policy_excluded,
            "country_distribution": self.country_distribution,
            "decade_distribution": {str(k): v for k, v in sorted(self.decade_distribution.items())},
        }


def build_report(
    processed: list[ProcessedRecord],
    tokenizer_id: str = "unicode_words",
    tokenizer: Tokenizer | None = None,
) -> RunReport:
    """Aggregate statistics over processed records.

    Rows that were cleaned out are ignored; the row universe is everything
    that entered the correction stage. Text measures use the final corrected
    text where available, the original otherwise. Records without a year are
    excluded from the decade histogram and counted separately; missing
    countries bucket under "unknown".
    """
    tokenizer = tokenizer or TOKENIZERS.get(tokenizer_id, word_tokens)
    rows = [p for p in processed if p.status != STATUS_CLEANED_OUT]

    words = 0
    tokens = 0
    newspapers: set[str] = set()
    years: list[int] = []
    rows_without_year = 0
    country_counts: dict[str, int] = {}
    decade_counts: dict[int, int] = {}
    label_counts = {OCR_ERROR: 0, HALLUCINATION: 0, SURFACE_FORM: 0}
    surface_pairs: dict[tuple[str, str], bool] = {}
    refused = 0

    for item in rows:
        record = item.record
        text = item.text_final if item.text_final is not None else record.text
        words += len(text.split())
        tokens += len(tokenizer(text))
        if record.newspaper:
            newspapers.add(record.newspaper)
        if record.year is not None:
            years.append(record.year)
            decade = record.decade
            assert decade is not None
            decade_counts[decade] = decade_counts.get(decade, 0) + 1
        else:
            rows_without_year += 1
        country = record.country or UNKNOWN
        country_counts[country] = country_counts.get(country, 0) + 1
        if item.status == STATUS_EXCLUDED_CONTENT_POLICY:
            refused += 1
        for corr in item.corrections:
            label_counts[corr.label] = label_counts.get(corr.label, 0) + 1
            if corr.label == SURFACE_FORM:
                surface_pairs[(corr.original, corr.corrected)] = corr.accent_only

    total_corrections = sum(label_counts.values())

    def pct(n: int, total: int) -> float:
        return 100.0 * n / total if total else 0.0

    country_distribution = {
        country: pct(count, len(rows))
        for country, count in sorted(country_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    }
    return RunReport(
        rows=len(rows),
        words=words,
        tokens=tokens,
        tokenizer_id=tokenizer_id,
        newspapers=len(newspapers),
        year_range=(min(years), max(years)) if years else None,
        rows_without_year=rows_without_year,
        total_corrections=total_corrections,
        surface_forms=len(surface_pairs),
        non_accent_surface_forms=sum(1 for accent in surface_pairs.values() if not accent),
        pct_ocr_error=pct(label_counts[OCR_ERROR], total_corrections),
        pct_hallucination=pct(label_counts[HALLUCINATION], total_corrections),
        pct_surface_form=pct(label_counts[SURFACE_FORM], total_corrections),
        pct_content_policy_excluded=pct(refused, len(rows)),
        country_distribution=country_distribution,
        decade_distribution=decade_counts,
    )


def render_text(report: RunReport) -> str:
    """Human-readable rendering; the JSON form carries the same fields."""
    lines = [
        "corpus report",
        "=============",
        f"rows:                        {report.rows}",
        f"words:                       {report.words}",
        f"tokens ({report.tokenizer_id}): {report.tokens}",
        f"newspapers:                  {report.newspapers}",
    ]
    if report.year_range:
        lines.append(f"years:                       {report.year_range[0]} - {report.year_range[1]}")
    if report.rows_without_year:
        lines.append(f"rows without year:           {report.rows_without_year}")
    lines += [
        f"total corrections:           {report.total_corrections}",
        f"surface forms:               {report.surface_forms}",
        f"non-accent surface forms:    {report.non_accent_surface_forms}",
        f"% OCR error corrections:     {report.pct_ocr_error:.2f}",
        f"% hallucinations detected:   {report.pct_hallucination:.2f}",
        f"% surface form corrections:  {report.pct_surface_form:.2f}",
        f"% content-policy excluded:   {report.pct_content_policy_excluded:.2f}",
        "",
        "country distribution (%):",
    ]
    for country, share in report.country_distribution.items():
        lines.append(f"  {country}: {share:.2f}")
    lines.append("")
    lines.append("decade distribution (rows):")
    for decade in sorted(report.decade_distribution):
        lines.append(f"  {decade}: {report.decade_distribution[decade]}")
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, path: str | Path, fmt: str = "structured") -> None:
    """Write the report as JSON ("structured") or plain text."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "structured":
        path.write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )
    elif fmt == "text":
        path.write_text(render_text(report), encoding="utf-8")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
