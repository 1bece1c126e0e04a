"""Chat-completion backend abstraction.

Two interchangeable backends: an OpenAI-style HTTP backend with retry,
backoff, and an in-flight admission gate, and a scripted mock keyed by
request fingerprints for fully offline, deterministic runs. Both can be
wrapped with a JSONL journal; a journal is replayable as a mock script.
"""

from __future__ import annotations

import base64
import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

import httpx


class BackendError(RuntimeError):
    """Base class for completion failures."""


class AuthError(BackendError):
    """Credentials rejected; never retried."""


class RateLimited(BackendError):
    """Throttled by the endpoint; retried, surfaced after exhaustion."""


class MalformedResponse(BackendError):
    """The endpoint replied with something we cannot interpret."""


@dataclass(frozen=True)
class Decoding:
    temperature: float = 0.2
    max_tokens: int = 2048

    def __post_init__(self):
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class ChatRequest:
    """One chat call: prompts plus optional PNG image attachments."""

    system_prompt: str
    user_prompt: str
    images: tuple[bytes, ...] = ()
    decoding: Decoding = Decoding()

    def __post_init__(self):
        if not self.system_prompt or not self.user_prompt:
            raise ValueError("prompts must be non-empty")


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int = 0
    completion_tokens: int = 0


@dataclass(frozen=True)
class ChatResponse:
    text: str
    usage: TokenUsage = TokenUsage()
    latency_ms: float = 0.0
    attempts: int = 1


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    base_backoff: float = 0.5

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class BackendConfig:
    endpoint: str
    model: str
    api_key_env: str = "ASCIIKIT_API_KEY"
    retry: RetryPolicy = RetryPolicy()
    max_inflight: int = 4

    def __post_init__(self):
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")


def fingerprint_request(request: ChatRequest) -> str:
    """Stable digest over (system, user, image bytes in order).

    Decoding parameters are deliberately excluded so recorded replays
    survive temperature changes.
    """
    h = hashlib.sha256()
    for part in (request.system_prompt.encode(), request.user_prompt.encode()):
        h.update(len(part).to_bytes(8, "big"))
        h.update(part)
    for img in request.images:
        h.update(len(img).to_bytes(8, "big"))
        h.update(img)
    return h.hexdigest()


class ChatBackend(Protocol):
    def complete(self, request: ChatRequest) -> ChatResponse: ...


def complete(request: ChatRequest, backend: "ChatBackend") -> ChatResponse:
    return backend.complete(request)


@dataclass
class MockScript:
    """Fingerprint -> canned response text, with an optional fallback.

    Lookups are total when a fallback is set; identical requests always
    produce identical responses.
    """

    responses: dict[str, str] = field(default_factory=dict)
    fallback: str | None = None

    def add(self, request: ChatRequest, text: str) -> "MockScript":
        self.responses[fingerprint_request(request)] = text
        return self

    def lookup(self, fingerprint: str) -> str:
        if fingerprint in self.responses:
            return self.responses[fingerprint]
        if self.fallback is not None:
            return self.fallback
        raise KeyError(f"no scripted response for {fingerprint} and no fallback")

    @classmethod
    def from_file(cls, path: str | Path) -> "MockScript":
        data = json.loads(Path(path).read_text())
        return cls(responses=dict(data.get("responses", {})), fallback=data.get("fallback"))

    def to_file(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(
                {"responses": self.responses, "fallback": self.fallback},
                indent=2,
                sort_keys=True,
            )
        )

    @classmethod
    def from_journal(cls, path: str | Path, fallback: str | None = None) -> "MockScript":
        """Rebuild a script from a run journal, enabling offline replay."""
        responses = {}
        with open(path) as fh:
            for line in fh:
                entry = json.loads(line)
                responses.setdefault(entry["fingerprint"], entry["response"]["text"])
        return cls(responses=responses, fallback=fallback)


class MockBackend:
    """Deterministic scripted backend; counts calls for test assertions."""

    def __init__(self, script: MockScript):
        self.script = script
        self.calls = 0
        self.seen: list[str] = []

    def complete(self, request: ChatRequest) -> ChatResponse:
        fp = fingerprint_request(request)
        self.calls += 1
        self.seen.append(fp)
        return ChatResponse(text=self.script.lookup(fp))


class HttpBackend:
    """OpenAI-compatible chat-completions client with retry and admission gate.

    Transient failures (429, 5xx, transport errors) are retried with
    exponential backoff up to the configured attempt budget; 401/403 raise
    immediately. ``transport`` and ``sleep`` are injectable for tests.
    """

    def __init__(
        self,
        config: BackendConfig,
        api_key: str | None = None,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        import os

        self.config = config
        self._api_key = api_key if api_key is not None else os.environ.get(config.api_key_env)
        self._client = httpx.Client(transport=transport, timeout=120.0)
        self._gate = threading.BoundedSemaphore(config.max_inflight)
        self._sleep = sleep

    def _payload(self, request: ChatRequest) -> dict:
        if request.images:
            content: object = [{"type": "text", "text": request.user_prompt}] + [
                {
                    "type": "image_url",
                    "image_url": {
                        "url": "data:image/png;base64,"
                        + base64.b64encode(img).decode("ascii")
                    },
                }
                for img in request.images
            ]
        else:
            content = request.user_prompt
        return {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": content},
            ],
            "temperature": request.decoding.temperature,
            "max_tokens": request.decoding.max_tokens,
        }

    def complete(self, request: ChatRequest) -> ChatResponse:
        if not self._api_key:
            raise AuthError(f"no credentials in ${self.config.api_key_env}")
        payload = self._payload(request)
        headers = {"Authorization": f"Bearer {self._api_key}"}
        policy = self.config.retry
        start = time.monotonic()
        last_error: BackendError | None = None
        for attempt in range(1, policy.max_attempts + 1):
            if attempt > 1:
                self._sleep(policy.base_backoff * 2 ** (attempt - 2))
            with self._gate:
                try:
                    resp = self._client.post(self.config.endpoint, json=payload, headers=headers)
                except httpx.TransportError as exc:
                    last_error = BackendError(f"transport failure: {exc}")
                    continue
            if resp.status_code in (401, 403):
                raise AuthError(f"endpoint returned {resp.status_code}")
            if resp.status_code == 429:
                last_error = RateLimited("429 from endpoint")
                continue
            if resp.status_code >= 500:
                last_error = BackendError(f"server error {resp.status_code}")
                continue
            try:
                body = resp.json()
                text = body["choices"][0]["message"]["content"]
                usage = body.get("usage", {})
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise MalformedResponse(f"cannot read completion: {exc}") from exc
            if not isinstance(text, str):
                raise MalformedResponse("completion content is not text")
            return ChatResponse(
                text=text,
                usage=TokenUsage(
                    prompt_tokens=int(usage.get("prompt_tokens", 0)),
                    completion_tokens=int(usage.get("completion_tokens", 0)),
                ),
                latency_ms=(time.monotonic() - start) * 1000.0,
                attempts=attempt,
            )
        assert last_error is not None
        raise last_error


class Journal:
    """Append-only JSONL log of request/response pairs, one object per line."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def record(self, request: ChatRequest, response: ChatResponse) -> None:
        entry = {
            "ts": time.time(),
            "fingerprint": fingerprint_request(request),
            "request": {
                "system": request.system_prompt[:200],
                "user": request.user_prompt[:200],
                "images": len(request.images),
            },
            "response": {
                "text": response.text,
                "latency_ms": response.latency_ms,
                "attempts": response.attempts,
            },
        }
        line = json.dumps(entry, ensure_ascii=False)
        with self._lock:
            with open(self.path, "a") as fh:
                fh.write(line + "\n")


class JournaledBackend:
    """Wrap any backend so every exchange lands in the journal."""

    def __init__(self, inner: ChatBackend, journal: Journal):
        self.inner = inner
        self.journal = journal

    def complete(self, request: ChatRequest) -> ChatResponse:
        response = self.inner.complete(request)
        self.journal.record(request, response)
        return response
