"""Pipeline configuration: file-backed with CLI overrides, validated all at once."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .cleaning import TOKENIZERS

BACKEND_KINDS = ("mock", "identity", "http")


@dataclass(frozen=True)
class PipelineConfig:
    input: str = ""
    output_dir: str = ""
    # backend
    backend: str = "identity"
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "HISTOCR_API_KEY"
    mock_fixtures: str | None = None
    temperature: float = 0.0
    # request handling
    concurrency: int = 4
    retry_attempts: int = 3
    backoff_base: float = 0.5
    max_chars: int = 12000
    hallucination_threshold: float = 0.5
    # cleaning
    min_tokens: int = 4
    max_nonalpha: float = 0.5
    count_whitespace: bool = False
    tokenizer: str = "unicode_words"
    # classification
    rules_path: str | None = None
    ratio_threshold: float = 0.55
    max_corrected_words: int = 3
    promote_min_frequency: int | None = None
    # behavior
    modernize: bool = False
    strict: bool = False

    def validate(self) -> list[str]:
        """Collect every configuration problem instead of failing on the first."""
        errors: list[str] = []
        if not 0.0 <= self.ratio_threshold <= 1.0:
            errors.append(f"ratio_threshold must be in [0, 1], got {self.ratio_threshold}")
        if self.max_corrected_words < 1:
            errors.append(f"max_corrected_words must be >= 1, got {self.max_corrected_words}")
        if not 0.0 <= self.max_nonalpha <= 1.0:
            errors.append(f"max_nonalpha must be in [0, 1], got {self.max_nonalpha}")
        if not 0.0 <= self.hallucination_threshold <= 1.0:
            errors.append(
                f"hallucination_threshold must be in [0, 1], got {self.hallucination_threshold}"
            )
        if self.min_tokens < 0:
            errors.append(f"min_tokens must be >= 0, got {self.min_tokens}")
        if self.concurrency < 1:
            errors.append(f"concurrency must be >= 1, got {self.concurrency}")
        if self.retry_attempts < 1:
            errors.append(f"retry_attempts must be >= 1, got {self.retry_attempts}")
        if self.max_chars < 1:
            errors.append(f"max_chars must be >= 1, got {self.max_chars}")
        if self.backend not in BACKEND_KINDS:
            errors.append(f"backend must be one of {BACKEND_KINDS}, got {self.backend!r}")
        if self.backend == "http":
            if not self.endpoint:
                errors.append("http backend requires an endpoint")
            if not self.model:
                errors.append("http backend requires a model name")
        if self.backend == "mock" and self.mock_fixtures and not Path(self.mock_fixtures).exists():
            errors.append(f"mock fixtures file not found: {self.mock_fixtures}")
        if self.tokenizer not in TOKENIZERS:
            errors.append(f"tokenizer must be one of {sorted(TOKENIZERS)}, got {self.tokenizer!r}")
        if self.rules_path and not Path(self.rules_path).exists():
            errors.append(f"rules file not found: {self.rules_path}")
        return errors

    @property
    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env) or None


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON config file; unknown keys are rejected."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(PipelineConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {', '.join(unknown)}")
    return PipelineConfig(**data)


def with_overrides(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Apply non-None overrides (CLI flags beat file values)."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **changes)
