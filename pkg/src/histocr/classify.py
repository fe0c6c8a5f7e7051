"""Classification of diff hunks into surface forms, OCR errors and hallucinations.

Every replace hunk runs through a fixed rule cascade; the first matching
stage wins:

1.  insert/delete hunks are hallucinations (additions and deletions by the
    language model are never trusted);
2.  pairs whose normalized forms coincide differ only in punctuation,
    spacing or casing -> OCR error (``punctuation_spacing``);
3.  pairs identical after accent stripping -> surface form (``accent_only``);
4.  word-final enclitic pronoun reordering ("cambiólo" -> "lo cambió")
    -> surface form (``enclitic_lo`` / ``enclitic_se``);
5.  pairs explained by letter-group substitution rules from the rules table
    -> surface form (rule named for the substitution, e.g. ``table_i_y``);
6.  pairs explained by symbol/shape confusions ("6" for "ó", "1" for "i")
    -> OCR error (``ocr_confusion_table``);
7.  single-word pairs of equal character length -> OCR error
    (``equal_length``);
8.  everything else is decided by the Gestalt similarity ratio of the
    accent-stripped forms: at or above the threshold, and with few enough
    corrected words, it's an OCR error, otherwise a hallucination
    (``ratio_threshold``).

Multi-word hunks are decomposed into word-level sub-corrections whenever a
monotone grouping of their content words scores better than classifying the
hunk whole, so "ocasion. En seguida" -> "ocasión. Enseguida" yields one
accent-only surface form plus one OCR error instead of a single blurred
label. Punctuation-only tokens attach to the preceding content word.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .diffing import ChangeHunk, similarity_ratio

SURFACE_FORM = "surface_form"
OCR_ERROR = "ocr_error"
HALLUCINATION = "hallucination"

# acute and grave vowel diacritics only; ñ and ü are distinct letters with
# their own substitution rules and must survive stripping
_ACCENT_MAP = str.maketrans(
    "áéíóúàèìòùÁÉÍÓÚÀÈÌÒÙ",
    "aeiouaeiouAEIOUAEIOU",
)

# maximum words per aligned group when decomposing a multi-word hunk
_MAX_GROUP = 4
# hunks larger than this (content words, original x corrected) skip
# decomposition and classify whole
_MAX_DP_CELLS = 400
# segments longer than any plausible word skip the substitution matcher;
# bounds the backtracking search on degenerate hunks
_MAX_SUBSTITUTION_LEN = 60


def strip_accents(text: str) -> str:
    """Remove acute/grave diacritics from vowels; ñ and ü are preserved."""
    return text.translate(_ACCENT_MAP)


def _strip_edge_punctuation(word: str) -> str:
    start, end = 0, len(word)
    while start < end and unicodedata.category(word[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(word[end - 1]).startswith("P"):
        end -= 1
    return word[start:end]


def normalize_segment(segment: str) -> str:
    """Lowercase and strip leading/trailing punctuation per word.

    Interior punctuation is preserved; words reduced to nothing (pure
    punctuation tokens) are dropped.
    """
    words = [_strip_edge_punctuation(w) for w in segment.lower().split()]
    return " ".join(w for w in words if w)


def normalize_pair(hunk: ChangeHunk) -> tuple[str, str]:
    """Normalized (original, corrected) forms of a replace hunk."""
    return normalize_segment(hunk.original_segment), normalize_segment(hunk.corrected_segment)


@dataclass(frozen=True)
class SubstitutionRule:
    rule_id: str
    historical: str
    modern: str
    direction: str  # two_way | one_way | enclitic
    example: tuple[str, str]
    label: str

    def expansions(self) -> list[tuple[str, str]]:
        """(original-side, corrected-side) pattern pairs this rule allows."""
        pairs = [(self.historical, self.modern)]
        if self.direction == "two_way":
            pairs.append((self.modern, self.historical))
        return [(a, b) for a, b in pairs if a != b]


@dataclass(frozen=True)
class RuleTable:
    """Parsed rules file: surface-form substitutions, enclitics, confusions."""

    surface_rows: tuple[SubstitutionRule, ...]
    confusion_rows: tuple[SubstitutionRule, ...]

    @property
    def substitutions(self) -> tuple[SubstitutionRule, ...]:
        """Letter-group rows usable by the substitution matcher (stage 5)."""
        return tuple(
            r
            for r in self.surface_rows
            if r.direction != "enclitic"
            and strip_accents(r.historical) != strip_accents(r.modern)
        )

    @property
    def enclitic_pronouns(self) -> tuple[str, ...]:
        return tuple(r.historical for r in self.surface_rows if r.direction == "enclitic")

    @property
    def example_rows(self) -> tuple[SubstitutionRule, ...]:
        return self.surface_rows + self.confusion_rows


def load_rules(path: str | Path) -> RuleTable:
    """Load a tab-separated rules file (one rule per line, # comments)."""
    surface: list[SubstitutionRule] = []
    confusion: list[SubstitutionRule] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 7:
            raise ValueError(f"{path}:{lineno}: expected 7 tab-separated fields, got {len(parts)}")
        rule_id, historical, modern, direction, ex_orig, ex_corr, label = parts
        if direction not in ("two_way", "one_way", "enclitic"):
            raise ValueError(f"{path}:{lineno}: unknown direction {direction!r}")
        if label not in (SURFACE_FORM, OCR_ERROR):
            raise ValueError(f"{path}:{lineno}: unknown label {label!r}")
        rule = SubstitutionRule(rule_id, historical, modern, direction, (ex_orig, ex_corr), label)
        (surface if label == SURFACE_FORM else confusion).append(rule)
    return RuleTable(tuple(surface), tuple(confusion))


def default_rules() -> RuleTable:
    """The shipped rules table."""
    with resources.as_file(resources.files("histocr.data") / "rules.tsv") as path:
        return load_rules(path)


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds for the ratio stage and the optional frequency promotion.

    ``ratio_threshold`` must sit between the known hallucination and OCR
    anchor ratios (0.0 vs 0.57-0.76 on the calibration pairs); 0.55 keeps a
    margin below the lowest known genuine OCR correction.
    """

    ratio_threshold: float = 0.55
    max_corrected_words: int = 3
    promote_min_frequency: int | None = None  # None disables promotion
    promotion_window: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 <= self.ratio_threshold <= 1.0:
            raise ValueError("ratio_threshold must be within [0, 1]")
        if self.max_corrected_words < 1:
            raise ValueError("max_corrected_words must be >= 1")


@dataclass
class ClassifiedCorrection:
    """One labeled correction, normalized for grouping, raw for application."""

    original: str
    corrected: str
    label: str
    rule: str
    ratio: float | None
    accent_only: bool
    original_span: tuple[int, int]
    corrected_span: tuple[int, int]
    original_raw: str
    corrected_raw: str
    frequency: int = 1


def _match_substitutions(
    original: str, corrected: str, rules: tuple[SubstitutionRule, ...]
) -> tuple[str, ...] | None:
    """Check whether the rules jointly explain every difference.

    Walks both strings left to right; equal characters advance, otherwise a
    rule pattern pair must consume the mismatch. Backtracks (a rule may start
    on characters that also match literally, as in "vireinato" ->
    "virreinato"). Returns the ids of the rules used, or None.
    """
    if original == corrected:
        return None
    expansions = [(o, c, r.rule_id) for r in rules for o, c in r.expansions()]
    dead: set[tuple[int, int]] = set()

    def walk(i: int, j: int) -> tuple[str, ...] | None:
        if (i, j) in dead:
            return None
        if i == len(original) and j == len(corrected):
            return ()
        if i < len(original) and j < len(corrected) and original[i] == corrected[j]:
            found = walk(i + 1, j + 1)
            if found is not None:
                return found
        for pat_o, pat_c, rule_id in expansions:
            if original.startswith(pat_o, i) and corrected.startswith(pat_c, j):
                found = walk(i + len(pat_o), j + len(pat_c))
                if found is not None:
                    return found if rule_id in found else (rule_id,) + found
        dead.add((i, j))
        return None

    used = walk(0, 0)
    if not used:  # at least one rule must fire
        return None
    return tuple(sorted(set(used)))


def _match_enclitic(original: str, corrected: str, pronouns: tuple[str, ...]) -> str | None:
    """Word-final pronoun moved in front: "acercóse" -> "se acercó"."""
    if " " in original:
        return None
    parts = corrected.split(" ")
    if len(parts) != 2:
        return None
    pronoun, stem = parts
    if pronoun not in pronouns:
        return None
    if not original.endswith(pronoun) or len(original) <= len(pronoun):
        return None
    if strip_accents(original[: -len(pronoun)]) != strip_accents(stem):
        return None
    return f"enclitic_{pronoun}"


def classify_pair(
    original_raw: str,
    corrected_raw: str,
    rules: RuleTable,
    config: ClassifierConfig,
    original_span: tuple[int, int] = (0, 0),
    corrected_span: tuple[int, int] = (0, 0),
) -> ClassifiedCorrection:
    """Run the replace-pair cascade (stages 2-8) on one raw segment pair."""
    norm_o = normalize_segment(original_raw)
    norm_c = normalize_segment(corrected_raw)

    def result(label: str, rule: str, ratio: float | None = None, accent_only: bool = False):
        return ClassifiedCorrection(
            original=norm_o,
            corrected=norm_c,
            label=label,
            rule=rule,
            ratio=ratio,
            accent_only=accent_only,
            original_span=original_span,
            corrected_span=corrected_span,
            original_raw=original_raw,
            corrected_raw=corrected_raw,
        )

    if norm_o == norm_c:
        return result(OCR_ERROR, "punctuation_spacing")

    stripped_o = strip_accents(norm_o)
    stripped_c = strip_accents(norm_c)
    if stripped_o == stripped_c:
        return result(SURFACE_FORM, "accent_only", accent_only=True)

    enclitic = _match_enclitic(norm_o, norm_c, rules.enclitic_pronouns)
    if enclitic is not None:
        return result(SURFACE_FORM, enclitic)

    if len(norm_o) <= _MAX_SUBSTITUTION_LEN and len(norm_c) <= _MAX_SUBSTITUTION_LEN:
        used = _match_substitutions(stripped_o, stripped_c, rules.substitutions)
        if used is not None:
            return result(SURFACE_FORM, "+".join(used))

        confused = _match_substitutions(norm_o, norm_c, rules.confusion_rows)
        if confused is not None:
            return result(OCR_ERROR, "ocr_confusion_table")

    if " " not in norm_o and " " not in norm_c and len(norm_o) == len(norm_c):
        return result(OCR_ERROR, "equal_length")

    ratio = similarity_ratio(stripped_o, stripped_c)
    if ratio >= config.ratio_threshold and len(norm_c.split()) <= config.max_corrected_words:
        return result(OCR_ERROR, "ratio_threshold", ratio=ratio)
    return result(HALLUCINATION, "ratio_threshold", ratio=ratio)


def classify_hunk(
    hunk: ChangeHunk, rules: RuleTable, config: ClassifierConfig
) -> ClassifiedCorrection:
    """Classify one hunk as a unit (no multi-word decomposition)."""
    if hunk.kind in ("insert", "delete"):
        return ClassifiedCorrection(
            original=normalize_segment(hunk.original_segment),
            corrected=normalize_segment(hunk.corrected_segment),
            label=HALLUCINATION,
            rule="insert_delete",
            ratio=None,
            accent_only=False,
            original_span=hunk.original_span,
            corrected_span=hunk.corrected_span,
            original_raw=hunk.original_segment,
            corrected_raw=hunk.corrected_segment,
        )
    return classify_pair(
        hunk.original_segment,
        hunk.corrected_segment,
        rules,
        config,
        hunk.original_span,
        hunk.corrected_span,
    )


def _content_indices(words: list[str]) -> list[int]:
    return [i for i, w in enumerate(words) if normalize_segment(w)]


def _group_key(words: list[str]) -> str:
    return strip_accents(normalize_segment(" ".join(words)))


def _align_groups(
    o_words: list[str], c_words: list[str]
) -> list[tuple[tuple[int, int], tuple[int, int]]] | None:
    """Monotone grouping of the two word lists maximizing similarity.

    Dynamic program over content words (groups of up to a few words per
    side), scored by the Gestalt ratio of the accent-stripped group strings;
    ties prefer more, finer groups. Returns raw-index ranges per group, or
    None when no decomposition is possible. Punctuation-only tokens attach
    to the group of the preceding content word.
    """
    o_core = _content_indices(o_words)
    c_core = _content_indices(c_words)
    n, m = len(o_core), len(c_core)
    if n == 0 or m == 0 or n * m > _MAX_DP_CELLS:
        return None

    # best[(i, j)] = (score, groups, prev_state)
    best: dict[tuple[int, int], tuple[float, int, tuple[int, int] | None]] = {(0, 0): (0.0, 0, None)}
    for i in range(n + 1):
        for j in range(m + 1):
            here = best.get((i, j))
            if here is None:
                continue
            score, groups, _ = here
            for di in range(1, min(_MAX_GROUP, n - i) + 1):
                o_text = _group_key([o_words[k] for k in o_core[i : i + di]])
                for dj in range(1, min(_MAX_GROUP, m - j) + 1):
                    c_text = _group_key([c_words[k] for k in c_core[j : j + dj]])
                    cand = (score + similarity_ratio(o_text, c_text), groups + 1, (i, j))
                    prev = best.get((i + di, j + dj))
                    if prev is None or cand[:2] > prev[:2]:
                        best[(i + di, j + dj)] = cand

    if (n, m) not in best:
        return None
    # walk back through the DP to recover group boundaries in core indices
    bounds: list[tuple[int, int]] = []
    state: tuple[int, int] | None = (n, m)
    while state is not None and state != (0, 0):
        bounds.append(state)
        state = best[state][2]
    bounds.append((0, 0))
    bounds.reverse()
    if len(bounds) <= 2:  # a single group is the whole hunk
        return None

    spans: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for idx in range(len(bounds) - 1):
        ci, cj = bounds[idx]
        ni, nj = bounds[idx + 1]
        o_start = 0 if idx == 0 else o_core[ci]
        o_end = o_core[ni] if ni < n else len(o_words)
        c_start = 0 if idx == 0 else c_core[cj]
        c_end = c_core[nj] if nj < m else len(c_words)
        spans.append(((o_start, o_end), (c_start, c_end)))
    return spans


def classify_hunks(
    hunks: list[ChangeHunk], rules: RuleTable, config: ClassifierConfig
) -> list[ClassifiedCorrection]:
    """Classify all hunks of one record, decomposing multi-word replaces."""
    corrections: list[ClassifiedCorrection] = []
    for hunk in hunks:
        if hunk.kind in ("insert", "delete"):
            corrections.append(classify_hunk(hunk, rules, config))
            continue
        o_words = hunk.original_segment.split(" ")
        c_words = hunk.corrected_segment.split(" ")
        groups = None
        if len(o_words) > 1 or len(c_words) > 1:
            groups = _align_groups(o_words, c_words)
        if groups is None:
            corrections.append(classify_hunk(hunk, rules, config))
            continue
        base_o, base_c = hunk.original_span[0], hunk.corrected_span[0]
        for (o_start, o_end), (c_start, c_end) in groups:
            raw_o = " ".join(o_words[o_start:o_end])
            raw_c = " ".join(c_words[c_start:c_end])
            if raw_o == raw_c:
                continue
            corrections.append(
                classify_pair(
                    raw_o,
                    raw_c,
                    rules,
                    config,
                    (base_o + o_start, base_o + o_end),
                    (base_c + c_start, base_c + c_end),
                )
            )
    return corrections


def aggregate_frequencies(
    corrections: list[ClassifiedCorrection],
) -> list[tuple[tuple[str, str], int]]:
    """Corpus-wide counts per normalized pair, back-filled onto instances.

    Returns the frequency table ordered by (frequency desc, original asc,
    corrected asc); the same order the lexicon uses.
    """
    counts: dict[tuple[str, str], int] = {}
    for corr in corrections:
        key = (corr.original, corr.corrected)
        counts[key] = counts.get(key, 0) + 1
    for corr in corrections:
        corr.frequency = counts[(corr.original, corr.corrected)]
    return sorted(counts.items(), key=lambda item: (-item[1], item[0][0], item[0][1]))


def apply_frequency_promotion(
    corrections: list[ClassifiedCorrection], config: ClassifierConfig
) -> int:
    """Optional post-pass: frequent near-threshold hallucinations become OCR errors.

    Disabled unless ``promote_min_frequency`` is set; the promotion window is
    ratios in [threshold - window, threshold). Returns the number promoted.
    """
    if config.promote_min_frequency is None:
        return 0
    lo = config.ratio_threshold - config.promotion_window
    promoted = 0
    for corr in corrections:
        if (
            corr.label == HALLUCINATION
            and corr.rule == "ratio_threshold"
            and corr.ratio is not None
            and lo <= corr.ratio < config.ratio_threshold
            and corr.frequency >= config.promote_min_frequency
        ):
            corr.label = OCR_ERROR
            corr.rule = "frequency_promotion"
            promoted += 1
    return promoted
