"""Corpus cleaning: duplicate/empty removal, non-alphabetic filter, short-row filter.

The filters apply in a fixed order (duplicates/empty, then non-alphabetic,
then short rows) and each partitions its input; the report tracks per-filter
removal counts and percentages against the original row total.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

from .records import CorpusRecord

Tokenizer = Callable[[str], list[str]]

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

REASON_DUPLICATE_OR_EMPTY = "duplicate_or_empty"
REASON_NON_ALPHABETIC = "non_alphabetic"
REASON_TOO_SHORT = "too_short"


def word_tokens(text: str) -> list[str]:
    """Default tokenizer: runs of Unicode letters/digits.

    Stands in for the subword tokenizer used to produce the published token
    counts; anything with the same ``str -> list[str]`` shape can be plugged
    in instead, so reported token counts are labeled with the tokenizer id.
    """
    return _WORD_RE.findall(text)


TOKENIZERS: dict[str, Tokenizer] = {
    "unicode_words": word_tokens,
    "whitespace": str.split,
}


@dataclass(frozen=True)
class CleaningReport:
    total_rows: int
    removed_duplicate_or_empty: int
    removed_non_alpha: int
    removed_short: int
    surviving: int

    def _pct(self, n: int) -> float:
        return 100.0 * n / self.total_rows if self.total_rows else 0.0

    @property
    def pct_duplicate_or_empty(self) -> float:
        return self._pct(self.removed_duplicate_or_empty)

    @property
    def pct_non_alpha(self) -> float:
        return self._pct(self.removed_non_alpha)

    @property
    def pct_short(self) -> float:
        return self._pct(self.removed_short)

    def to_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "removed_duplicate_or_empty": self.removed_duplicate_or_empty,
            "pct_duplicate_or_empty": self.pct_duplicate_or_empty,
            "removed_non_alpha": self.removed_non_alpha,
            "pct_non_alpha": self.pct_non_alpha,
            "removed_short": self.removed_short,
            "pct_short": self.pct_short,
            "surviving": self.surviving,
        }


def filter_duplicates_and_empty(
    records: Sequence[CorpusRecord],
) -> tuple[list[CorpusRecord], list[CorpusRecord]]:
    """Drop empty/whitespace-only texts and exact repeats of earlier texts.

    Duplicate means byte-identical text after trimming leading/trailing
    whitespace; the first occurrence is kept. Decisions are made in input
    order so "first occurrence wins" is deterministic.
    """
    kept: list[CorpusRecord] = []
    removed: list[CorpusRecord] = []
    seen: set[str] = set()
    for record in records:
        trimmed = record.text.strip()
        if not trimmed or trimmed in seen:
            removed.append(record)
            continue
        seen.add(trimmed)
        kept.append(record)
    return kept, removed


def non_alpha_ratio(text: str, count_whitespace: bool = False) -> float:
    """Fraction of characters that are not Unicode letters.

    Whitespace is excluded from the denominator unless ``count_whitespace``;
    an empty denominator yields 0.0.
    """
    chars = text if count_whitespace else [c for c in text if not c.isspace()]
    if not chars:
        return 0.0
    return sum(1 for c in chars if not c.isalpha()) / len(chars)


def filter_non_alphabetic(
    records: Sequence[CorpusRecord],
    max_ratio: float = 0.5,
    count_whitespace: bool = False,
) -> tuple[list[CorpusRecord], list[CorpusRecord]]:
    """Drop records where strictly more than ``max_ratio`` of characters are non-letters.

    Accented letters and ñ count as alphabetic; digits, punctuation and
    symbols do not. A record sitting exactly on the threshold is kept.
    """
    kept: list[CorpusRecord] = []
    removed: list[CorpusRecord] = []
    for record in records:
        if non_alpha_ratio(record.text, count_whitespace) > max_ratio:
            removed.append(record)
        else:
            kept.append(record)
    return kept, removed


def filter_short(
    records: Sequence[CorpusRecord],
    min_tokens: int = 4,
    tokenizer: Tokenizer = word_tokens,
) -> tuple[list[CorpusRecord], list[CorpusRecord]]:
    """Drop records with ``min_tokens`` or fewer tokens."""
    if min_tokens < 0:
        raise ValueError("min_tokens must be >= 0")
    kept: list[CorpusRecord] = []
    removed: list[CorpusRecord] = []
    for record in records:
        if len(tokenizer(record.text)) <= min_tokens:
            removed.append(record)
        else:
            kept.append(record)
    return kept, removed


def clean_corpus(
    records: Sequence[CorpusRecord],
    min_tokens: int = 4,
    max_nonalpha: float = 0.5,
    count_whitespace: bool = False,
    tokenizer: Tokenizer = word_tokens,
) -> tuple[list[CorpusRecord], list[tuple[CorpusRecord, str]], CleaningReport]:
    """Run the three filters in order; return survivors, removals with reasons, report."""
    kept, dup_removed = filter_duplicates_and_empty(records)
    kept, alpha_removed = filter_non_alphabetic(kept, max_nonalpha, count_whitespace)
    kept, short_removed = filter_short(kept, min_tokens, tokenizer)
    removed = (
        [(r, REASON_DUPLICATE_OR_EMPTY) for r in dup_removed]
        + [(r, REASON_NON_ALPHABETIC) for r in alpha_removed]
        + [(r, REASON_TOO_SHORT) for r in short_removed]
    )
    report = CleaningReport(
        total_rows=len(records),
        removed_duplicate_or_empty=len(dup_removed),
        removed_non_alpha=len(alpha_removed),
        removed_short=len(short_removed),
        surviving=len(kept),
    )
    return kept, removed, report
