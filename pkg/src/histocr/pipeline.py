"""Stage orchestration: clean -> correct -> classify -> apply -> report.

Each stage reads and writes files under the output directory, so every stage
is resumable and independently testable; model calls are slow and costly, so
re-runs must not repeat them. Composing the stage functions by hand produces
byte-identical artifacts to :func:`run_pipeline`.

Stage artifacts (fixed names inside the output directory):

- ``cleaned.jsonl``         surviving corpus records
- ``removed.jsonl``         records dropped by cleaning (status ``cleaned_out``)
- ``cleaning_report.json``  per-filter removal counts and percentages
- ``corrected.jsonl``       records plus raw model output and outcome
- ``classified.jsonl``      records plus labeled corrections
- ``final.jsonl``           processed records (final text, one status each)
- ``lexicon.tsv``           surface-form lexicon (full)
- ``lexicon_nonaccent.tsv`` surface forms that are not accent-only
- ``report.json`` / ``report.txt``  run statistics
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import client as client_mod
from .applier import apply_corrections, emit_lexicon, write_lexicon
from .classify import (
    ClassifierConfig,
    RuleTable,
    aggregate_frequencies,
    apply_frequency_promotion,
    classify_hunks,
    default_rules,
    load_rules,
)
from .cleaning import TOKENIZERS, clean_corpus
from .client import (
    OUTCOME_OK,
    BackendResult,
    CorrectionBackend,
    HttpChatBackend,
    IdentityBackend,
    MockBackend,
    PromptTemplate,
    RetryPolicy,
    correct_text,
    detect_global_hallucination,
)
from .config import PipelineConfig
from .diffing import diff_words, tokenize_words
from .records import (
    STATUS_CLEANED_OUT,
    STATUS_CORRECTED,
    STATUS_EXCLUDED_CONTENT_POLICY,
    STATUS_EXCLUDED_LLM_FAILURE,
    CorpusRecord,
    LoadResult,
    ProcessedRecord,
    load_corpus,
    load_processed,
    write_corpus,
    write_processed,
    _correction_from_dict,
    _correction_to_dict,
)
from .reporting import build_report, write_report

logger = logging.getLogger(__name__)

OUTCOME_GLOBAL_HALLUCINATION = "global_hallucination"

ARTIFACTS = (
    "cleaned.jsonl",
    "removed.jsonl",
    "cleaning_report.json",
    "corrected.jsonl",
    "classified.jsonl",
    "final.jsonl",
    "lexicon.tsv",
    "lexicon_nonaccent.tsv",
    "report.json",
    "report.txt",
)


def make_backend(config: PipelineConfig) -> CorrectionBackend:
    if config.backend == "identity":
        return IdentityBackend()
    if config.backend == "mock":
        return MockBackend(config.mock_fixtures)
    return HttpChatBackend(
        endpoint=config.endpoint,
        model=config.model,
        api_key=config.api_key,
        temperature=config.temperature,
    )


def classifier_config(config: PipelineConfig) -> ClassifierConfig:
    return ClassifierConfig(
        ratio_threshold=config.ratio_threshold,
        max_corrected_words=config.max_corrected_words,
        promote_min_frequency=config.promote_min_frequency,
    )


def rule_table(config: PipelineConfig) -> RuleTable:
    if config.rules_path:
        return load_rules(config.rules_path)
    return default_rules()


def _write_json(obj: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _write_work(rows: list[dict], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False))
            fh.write("\n")


def _read_work(path: Path) -> list[dict]:
    return [
        json.loads(line)
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def stage_clean(
    config: PipelineConfig,
    input_path: str | Path,
    output_path: str | Path,
    removed_path: str | Path | None = None,
    report_path: str | Path | None = None,
) -> LoadResult:
    """Filter the corpus; write survivors, removed records and the report."""
    result = load_corpus(input_path)
    for diag in result.diagnostics:
        logger.warning("%s: %s", input_path, diag)
    kept, removed, report = clean_corpus(
        result.records,
        min_tokens=config.min_tokens,
        max_nonalpha=config.max_nonalpha,
        count_whitespace=config.count_whitespace,
        tokenizer=TOKENIZERS[config.tokenizer],
    )
    write_corpus(kept, output_path)
    if removed_path is not None:
        write_processed(
            [ProcessedRecord(record=r, status=STATUS_CLEANED_OUT) for r, _reason in removed],
            removed_path,
        )
    if report_path is not None:
        _write_json(report.to_dict(), Path(report_path))
    logger.info(
        "cleaning: %d rows in, %d kept, %d removed",
        report.total_rows,
        report.surviving,
        report.total_rows - report.surviving,
    )
    return result


def stage_correct(
    config: PipelineConfig,
    input_path: str | Path,
    output_path: str | Path,
    backend: CorrectionBackend | None = None,
) -> None:
    """Fetch corrected candidates for every cleaned record.

    Requests may run concurrently up to the configured limit; rows are
    re-sequenced to input order before writing. A whole-text similarity
    check discards responses that rewrote the record wholesale.
    """
    backend = backend or make_backend(config)
    records = load_corpus(input_path).records
    template = PromptTemplate.for_language("spanish")
    policy = RetryPolicy(max_attempts=config.retry_attempts, backoff_base=config.backoff_base)

    def process(record: CorpusRecord) -> BackendResult:
        return correct_text(
            record.text,
            backend,
            retry_policy=policy,
            template=template,
            max_chars=config.max_chars,
        )

    if config.concurrency > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
            results = list(pool.map(process, records))
    else:
        results = [process(r) for r in records]

    rows: list[dict] = []
    outcome_counts: dict[str, int] = {}
    for record, result in zip(records, results):
        outcome = result.outcome
        if outcome == OUTCOME_OK and detect_global_hallucination(
            record.text, result.corrected_text or "", config.hallucination_threshold
        ):
            outcome = OUTCOME_GLOBAL_HALLUCINATION
        outcome_counts[outcome] = outcome_counts.get(outcome, 0) + 1
        row = record.to_json_dict()
        row["llm_outcome"] = outcome
        row["llm_detail"] = result.detail
        row["text_llm"] = result.corrected_text
        rows.append(row)
    _write_work(rows, Path(output_path))
    logger.info("correction outcomes: %s", dict(sorted(outcome_counts.items())))


def stage_classify(
    config: PipelineConfig,
    input_path: str | Path,
    output_path: str | Path,
) -> None:
    """Diff each corrected candidate against its original and label the changes."""
    rules = rule_table(config)
    cls_config = classifier_config(config)
    rows = _read_work(Path(input_path))

    all_corrections = []
    per_row: list[list] = []
    for row in rows:
        if row.get("llm_outcome") != OUTCOME_OK or row.get("text_llm") is None:
            per_row.append([])
            continue
        hunks = diff_words(tokenize_words(row["text"]), tokenize_words(row["text_llm"]))
        corrections = classify_hunks(hunks, rules, cls_config)
        per_row.append(corrections)
        all_corrections.extend(corrections)

    aggregate_frequencies(all_corrections)
    promoted = apply_frequency_promotion(all_corrections, cls_config)
    if promoted:
        logger.info("frequency promotion: %d corrections relabeled", promoted)

    for row, corrections in zip(rows, per_row):
        row["corrections"] = [_correction_to_dict(c) for c in corrections]
    _write_work(rows, Path(output_path))
    logger.info("classified %d corrections across %d rows", len(all_corrections), len(rows))


def stage_apply(
    config: PipelineConfig,
    input_path: str | Path,
    output_path: str | Path,
    lexicon_path: str | Path | None = None,
    lexicon_nonaccent_path: str | Path | None = None,
) -> None:
    """Assemble final texts (OCR errors applied) and emit the lexicon."""
    rows = _read_work(Path(input_path))
    processed: list[ProcessedRecord] = []
    all_corrections = []
    for row in rows:
        record = CorpusRecord(
            id=row["id"],
            newspaper=row.get("newspaper") or "",
            country=row.get("country") or "",
            city=row.get("city"),
            year=row.get("year"),
            text=row["text"],
        )
        outcome = row.get("llm_outcome")
        corrections = [_correction_from_dict(c) for c in row.get("corrections", [])]
        all_corrections.extend(corrections)
        if outcome == OUTCOME_OK:
            final = apply_corrections(record.text, corrections, modernize=config.modernize)
            processed.append(
                ProcessedRecord(
                    record=record,
                    status=STATUS_CORRECTED,
                    text_llm=row.get("text_llm"),
                    text_final=final,
                    corrections=corrections,
                )
            )
        elif outcome == client_mod.OUTCOME_CONTENT_POLICY:
            processed.append(
                ProcessedRecord(record=record, status=STATUS_EXCLUDED_CONTENT_POLICY)
            )
        else:  # transport_error, over_length, global_hallucination
            processed.append(
                ProcessedRecord(
                    record=record,
                    status=STATUS_EXCLUDED_LLM_FAILURE,
                    text_llm=row.get("text_llm"),
                )
            )
    write_processed(processed, output_path)
    full, non_accent = emit_lexicon(all_corrections)
    if lexicon_path is not None:
        write_lexicon(full, lexicon_path)
    if lexicon_nonaccent_path is not None:
        write_lexicon(non_accent, lexicon_nonaccent_path)
    logger.info(
        "applied corrections: %d records, %d surface forms (%d non-accent)",
        len(processed),
        len(full),
        len(non_accent),
    )


def stage_report(
    config: PipelineConfig,
    input_path: str | Path,
    json_path: str | Path | None = None,
    text_path: str | Path | None = None,
) -> None:
    """Compute run statistics over the final processed corpus."""
    processed = load_processed(input_path).records
    report = build_report(processed, tokenizer_id=config.tokenizer)
    if json_path is not None:
        write_report(report, json_path, fmt="structured")
    if text_path is not None:
        write_report(report, text_path, fmt="text")


def run_pipeline(config: PipelineConfig, backend: CorrectionBackend | None = None) -> int:
    """Run all stages; returns the process exit code.

    0 on success, 1 on fatal errors (checked by the CLI before calling), 2
    when strict mode is set and some records were skipped or failed.
    """
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    load_result = stage_clean(
        config,
        config.input,
        out / "cleaned.jsonl",
        removed_path=out / "removed.jsonl",
        report_path=out / "cleaning_report.json",
    )
    stage_correct(config, out / "cleaned.jsonl", out / "corrected.jsonl", backend=backend)
    stage_classify(config, out / "corrected.jsonl", out / "classified.jsonl")
    stage_apply(
        config,
        out / "classified.jsonl",
        out / "final.jsonl",
        lexicon_path=out / "lexicon.tsv",
        lexicon_nonaccent_path=out / "lexicon_nonaccent.tsv",
    )
    stage_report(
        config,
        out / "final.jsonl",
        json_path=out / "report.json",
        text_path=out / "report.txt",
    )

    if config.strict:
        if load_result.errors:
            return 2
        failures = sum(
            1
            for row in _read_work(out / "corrected.jsonl")
            if row.get("llm_outcome") not in (OUTCOME_OK, client_mod.OUTCOME_CONTENT_POLICY)
        )
        if failures:
            return 2
    return 0
