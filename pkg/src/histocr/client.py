"""Candidate corrections from a language model, over a pluggable backend.

The prompt asks the model to return only the input text with spelling fixed,
leaving grammar and proper names alone; the record text goes between
triple-backtick fences, unescaped (embedded backticks are logged, not
escaped). Backends: a generic HTTP chat-completion client, a deterministic
mock driven by a fixture table, and an identity echo for dry runs. Per-record
processing never raises; every outcome is encoded in the result.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Protocol

import requests

from .diffing import similarity_ratio

logger = logging.getLogger(__name__)

OUTCOME_OK = "ok"
OUTCOME_CONTENT_POLICY = "content_policy_refusal"
OUTCOME_TRANSPORT_ERROR = "transport_error"
OUTCOME_OVER_LENGTH = "over_length"

SPANISH_PROMPT = (
    "Dado el texto del siglo XIX entre ```, retorna únicamente el texto "
    "corrigiendo los errores ortográficos sin cambiar la gramática. "
    "No corrijas la ortografía de nombres:\n\n```\n{text}\n```"
)
ENGLISH_PROMPT = (
    "Given the 19th-century text between ```, return only the text with "
    "spelling errors corrected without changing the grammar. "
    "Do not correct the spelling of names:\n\n```\n{text}\n```"
)

REFUSAL_SENTINEL = "__CONTENT_POLICY_REFUSAL__"
TRANSPORT_ERROR_SENTINEL = "__TRANSPORT_ERROR__"


class ContentPolicyRefusal(Exception):
    """The backend declined to process the text (flagged content)."""


class TransportError(Exception):
    """Transient failure talking to the backend; retryable."""


@dataclass(frozen=True)
class PromptTemplate:
    """A prompt with exactly one {text} placeholder."""

    template_text: str
    language: str = "spanish"

    def __post_init__(self) -> None:
        if self.template_text.count("{text}") != 1:
            raise ValueError("template must contain exactly one {text} placeholder")
        if self.language not in ("spanish", "english"):
            raise ValueError(f"unknown prompt language {self.language!r}")

    @classmethod
    def for_language(cls, language: str) -> "PromptTemplate":
        text = SPANISH_PROMPT if language == "spanish" else ENGLISH_PROMPT
        return cls(text, language)


def render_prompt(template: PromptTemplate, text: str) -> str:
    """Substitute the record text into the template; byte-stable."""
    if not text:
        raise ValueError("cannot render a prompt for empty text")
    if "```" in text:
        logger.warning("record text contains triple backticks; embedded unescaped")
    return template.template_text.replace("{text}", text)


@dataclass(frozen=True)
class BackendResult:
    outcome: str
    corrected_text: str | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if (self.corrected_text is not None) != (self.outcome == OUTCOME_OK):
            raise ValueError("corrected_text must be present exactly when outcome is ok")


class CorrectionBackend(Protocol):
    """Turns a prompt (and the raw record text) into a model response."""

    def complete(self, prompt: str, text: str) -> str: ...


class IdentityBackend:
    """Echoes the record text; used by dry runs and as the mock fallback."""

    def complete(self, prompt: str, text: str) -> str:
        return text


class MockBackend:
    """Deterministic fixture-driven backend for offline runs.

    The fixture file is line-delimited ``{"input_hash": ..., "output": ...}``
    where ``input_hash`` is the SHA-256 hex digest of the record text.
    Sentinel outputs simulate refusals and transport failures; texts without
    a fixture entry are echoed unchanged.
    """

    def __init__(self, fixture_path: str | Path | None = None):
        self.table: dict[str, str] = {}
        if fixture_path is not None:
            for line in Path(fixture_path).read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                obj = json.loads(line)
                self.table[obj["input_hash"]] = obj["output"]

    @staticmethod
    def hash_text(text: str) -> str:
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def complete(self, prompt: str, text: str) -> str:
        output = self.table.get(self.hash_text(text))
        if output is None:
            return text
        if output == REFUSAL_SENTINEL:
            raise ContentPolicyRefusal("fixture marked this text as refused")
        if output == TRANSPORT_ERROR_SENTINEL:
            raise TransportError("fixture marked this text as failing")
        return output


class HttpChatBackend:
    """Generic chat-completion endpoint (OpenAI-style JSON shape)."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        temperature: float = 0.0,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.temperature = temperature
        self.timeout = timeout
        self.session = session or requests.Session()

    def complete(self, prompt: str, text: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            response = self.session.post(
                self.endpoint, json=payload, headers=headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        refusal_markers = ("content_filter", "content_policy", "content policy",
                           "responsibleaipolicy")
        if response.status_code == 400 and any(
            marker in response.text.lower() for marker in refusal_markers
        ):
            raise ContentPolicyRefusal(response.text[:500])
        if response.status_code >= 400:
            raise TransportError(f"HTTP {response.status_code}: {response.text[:500]}")
        try:
            body = response.json()
            choice = body["choices"][0]
            if choice.get("finish_reason") == "content_filter":
                raise ContentPolicyRefusal("finish_reason=content_filter")
            return choice["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise TransportError(f"malformed backend response: {exc}") from exc


@dataclass(frozen=True)
class RetryPolicy:
    """Capped exponential backoff for transient transport errors only."""

    max_attempts: int = 3
    backoff_base: float = 0.5
    backoff_cap: float = 8.0
    sleep: Callable[[float], None] = time.sleep

    def delay(self, attempt: int) -> float:
        return min(self.backoff_base * (2 ** (attempt - 1)), self.backoff_cap)


def strip_fences(response: str) -> str:
    """Remove surrounding triple-backtick fences and outer whitespace only."""
    text = response.strip()
    if text.startswith("```") and text.endswith("```") and len(text) >= 6:
        inner = text[3:-3]
        # drop a language tag on the opening fence line ("```text\n...")
        first_newline = inner.find("\n")
        if first_newline != -1 and inner[:first_newline].strip().isalnum():
            inner = inner[first_newline + 1 :]
        elif first_newline == -1:
            return inner.strip()
        text = inner.strip()
    return text


def correct_text(
    text: str,
    backend: CorrectionBackend,
    retry_policy: RetryPolicy | None = None,
    template: PromptTemplate | None = None,
    max_chars: int | None = None,
) -> BackendResult:
    """Fetch a corrected candidate for one record; never raises on backend trouble.

    Texts over the character budget are flagged ``over_length`` without a
    backend call (the pipeline does not split records into chunks).
    """
    if not text:
        raise ValueError("correct_text requires non-empty text")
    retry_policy = retry_policy or RetryPolicy()
    template = template or PromptTemplate.for_language("spanish")
    if max_chars is not None and len(text) > max_chars:
        return BackendResult(
            OUTCOME_OVER_LENGTH,
            detail=f"text length {len(text)} exceeds budget {max_chars}",
        )
    prompt = render_prompt(template, text)
    last_error = ""
    for attempt in range(1, retry_policy.max_attempts + 1):
        try:
            raw = backend.complete(prompt, text)
        except ContentPolicyRefusal as exc:
            return BackendResult(OUTCOME_CONTENT_POLICY, detail=str(exc))
        except TransportError as exc:
            last_error = str(exc)
            if attempt < retry_policy.max_attempts:
                retry_policy.sleep(retry_policy.delay(attempt))
            continue
        return BackendResult(OUTCOME_OK, corrected_text=strip_fences(raw))
    return BackendResult(
        OUTCOME_TRANSPORT_ERROR,
        detail=f"exhausted {retry_policy.max_attempts} attempts: {last_error}",
    )


def detect_global_hallucination(original: str, corrected: str, threshold: float) -> bool:
    """True when the whole response should be discarded as a rewrite.

    Long inputs sometimes come back entirely re-imagined; a whole-text
    similarity below the threshold signals that.
    """
    return similarity_ratio(original, corrected) < threshold
