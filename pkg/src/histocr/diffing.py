"""Word-aligned diffing between an original text and its corrected candidate.

The aligner works on whitespace-separated words (punctuation stays attached
to its word; the classifier strips it later). Contiguous changed regions with
no unchanged word between them surface as a single hunk, so a space-merge
such as "se mana" -> "semana" arrives as one replace hunk with a two-word
original segment.

Character-level similarity uses the Gestalt (Ratcliff-Obershelp) ratio:
recursively take the longest common contiguous block, recurse on both
flanks, and return 2*M / (len(a) + len(b)) where M is the total matched
character count. Ties between equally long blocks are broken toward the
earliest start in the first string, then the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from difflib import SequenceMatcher
from typing import Literal

HunkKind = Literal["replace", "insert", "delete"]


@dataclass(frozen=True)
class ChangeHunk:
    """One aligned difference between the original and corrected word streams.

    ``original_segment``/``corrected_segment`` are the affected words joined
    with single spaces; an insert has an empty original segment and a delete
    an empty corrected segment. Spans are half-open ``[start, end)`` indices
    into the respective word sequences.
    """

    original_segment: str
    corrected_segment: str
    original_span: tuple[int, int]
    corrected_span: tuple[int, int]
    kind: HunkKind

    def __post_init__(self) -> None:
        if self.kind == "insert" and self.original_segment:
            raise ValueError("insert hunk with non-empty original segment")
        if self.kind == "delete" and self.corrected_segment:
            raise ValueError("delete hunk with non-empty corrected segment")


def tokenize_words(text: str) -> list[str]:
    """Split on Unicode whitespace; punctuation stays attached to its word."""
    return text.split()


def diff_words(
    original: list[str],
    corrected: list[str],
    merge_window: int = 0,
) -> list[ChangeHunk]:
    """Align two word sequences and return the changed regions as hunks.

    The alignment is the longest-common-subsequence family matching of
    :class:`difflib.SequenceMatcher` (junk heuristics disabled), which breaks
    ties by preferring the earliest match in the original sequence. Hunks are
    non-overlapping and ordered by original span.

    ``merge_window`` additionally merges hunks separated by at most that many
    unchanged words (0 = only directly adjacent changes merge, which the
    matcher already guarantees).
    """
    matcher = SequenceMatcher(None, original, corrected, autojunk=False)
    hunks: list[ChangeHunk] = []
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        hunks.append(
            ChangeHunk(
                original_segment=" ".join(original[i1:i2]),
                corrected_segment=" ".join(corrected[j1:j2]),
                original_span=(i1, i2),
                corrected_span=(j1, j2),
                kind=tag,  # type: ignore[arg-type]
            )
        )
    if merge_window > 0:
        hunks = _merge_nearby(hunks, original, corrected, merge_window)
    return hunks


def _merge_nearby(
    hunks: list[ChangeHunk],
    original: list[str],
    corrected: list[str],
    window: int,
) -> list[ChangeHunk]:
    merged: list[ChangeHunk] = []
    for hunk in hunks:
        if merged and hunk.original_span[0] - merged[-1].original_span[1] <= window:
            prev = merged.pop()
            i1, i2 = prev.original_span[0], hunk.original_span[1]
            j1, j2 = prev.corrected_span[0], hunk.corrected_span[1]
            seg_o = " ".join(original[i1:i2])
            seg_c = " ".join(corrected[j1:j2])
            kind: HunkKind = "replace"
            if not seg_o:
                kind = "insert"
            elif not seg_c:
                kind = "delete"
            hunk = ChangeHunk(seg_o, seg_c, (i1, i2), (j1, j2), kind)
        merged.append(hunk)
    return merged


def reconstruct_words(original: list[str], hunks: list[ChangeHunk]) -> list[str]:
    """Apply every hunk over the original word sequence.

    Splicing all corrected segments back in reproduces the corrected word
    sequence exactly; this is the reconstruction invariant the diff must
    satisfy for any input pair.
    """
    out: list[str] = []
    cursor = 0
    for hunk in hunks:
        start, end = hunk.original_span
        if start < cursor:
            raise ValueError(f"overlapping hunk at {hunk.original_span}")
        out.extend(original[cursor:start])
        if hunk.corrected_segment:
            out.extend(hunk.corrected_segment.split(" "))
        cursor = end
    out.extend(original[cursor:])
    return out


def similarity_ratio(a: str, b: str) -> float:
    """Gestalt similarity in [0, 1]; 1.0 for two empty strings.

    Equals ``2*M / (len(a) + len(b))`` with M the character total of the
    recursively found longest common blocks.
    """
    if not a and not b:
        return 1.0
    return SequenceMatcher(None, a, b, autojunk=False).ratio()


def format_hunk(hunk: ChangeHunk) -> str:
    """Stable one-line rendering: span, kind, segments."""
    i1, i2 = hunk.original_span
    return f"[{i1},{i2}) {hunk.kind} {hunk.original_segment!r} -> {hunk.corrected_segment!r}"
