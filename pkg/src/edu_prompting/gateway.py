"""Backends for chat-completion text generation.

Two interchangeable backends: :class:`HttpBackend` talks to a real
chat-completion endpoint, :class:`ScriptedBackend` replays canned responses
for deterministic offline tests. Both count usage behind the same interface.
"""
from __future__ import annotations

import math
import os
import random
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import httpx

API_KEY_ENV = "EDU_API_KEY"


class GatewayError(Exception):
    """Base class for generation backend failures."""


class TransportError(GatewayError):
    """Network-level failure that persisted through retries."""


class AuthError(GatewayError):
    """Credential rejected by the endpoint. Never retried."""


class RateLimited(GatewayError):
    """Endpoint kept throttling after all retries."""


class MalformedResponse(GatewayError):
    """Response body was not usable (bad JSON, missing fields, or an
    exhausted scripted fixture)."""


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def __post_init__(self) -> None:
        if self.role is Role.USER and not self.content:
            raise ValueError("user message content must be non-empty")


@dataclass(frozen=True)
class GenerationRequest:
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: int = 1024
    seed: int | None = None

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("request needs at least one message")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    @property
    def prompt_text(self) -> str:
        return "\n".join(m.content for m in self.messages)


def user_request(
    model_id: str,
    prompt: str,
    *,
    system: str | None = None,
    temperature: float = 0.0,
    max_tokens: int = 1024,
    seed: int | None = None,
) -> GenerationRequest:
    """Build the common one-user-message request shape."""
    messages: list[ChatMessage] = []
    if system:
        messages.append(ChatMessage(Role.SYSTEM, system))
    messages.append(ChatMessage(Role.USER, prompt))
    return GenerationRequest(
        model_id=model_id,
        messages=tuple(messages),
        temperature=temperature,
        max_tokens=max_tokens,
        seed=seed,
    )


@dataclass(frozen=True)
class GenerationResult:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int
    backend_id: str
    usage_estimated: bool = False


@dataclass(frozen=True)
class BackendUsage:
    prompt_tokens: int
    completion_tokens: int
    call_count: int


def estimate_tokens(text: str) -> int:
    """Fallback token count when the backend reports no usage: ceil(chars/4)."""
    return math.ceil(len(text) / 4)


class _UsageCounter:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.prompt_tokens = 0
        self.completion_tokens = 0
        self.call_count = 0

    def count_call(self) -> None:
        with self._lock:
            self.call_count += 1

    def add_tokens(self, prompt: int, completion: int) -> None:
        with self._lock:
            self.prompt_tokens += prompt
            self.completion_tokens += completion

    def snapshot(self) -> BackendUsage:
        with self._lock:
            return BackendUsage(self.prompt_tokens, self.completion_tokens, self.call_count)


class Backend:
    """Common bookkeeping; subclasses implement :meth:`_generate`."""

    backend_id = "backend"

    def __init__(self) -> None:
        self._usage = _UsageCounter()

    def generate(self, request: GenerationRequest) -> GenerationResult:
        # Failed calls still count toward call_count.
        self._usage.count_call()
        result = self._generate(request)
        self._usage.add_tokens(result.prompt_tokens, result.completion_tokens)
        return result

    def _generate(self, request: GenerationRequest) -> GenerationResult:
        raise NotImplementedError

    def usage(self) -> BackendUsage:
        return self._usage.snapshot()


def backend_usage(backend: Backend) -> BackendUsage:
    return backend.usage()


@dataclass(frozen=True)
class KeyedResponse:
    """Fixture entry matched when every substring in `match` appears in the
    prompt text. Keyed entries are reusable, which keeps multi-agent tests
    independent of call order."""

    match: tuple[str, ...]
    response: str


class ScriptedBackend(Backend):
    """Deterministic fixture-driven backend.

    Ordered mode (the default) hands out `responses` one per call and fails
    with :class:`MalformedResponse` once exhausted. Keyed entries, when
    present, are consulted first. Every received request is recorded for
    assertions.
    """

    backend_id = "scripted"

    def __init__(
        self,
        responses: Sequence[str] = (),
        *,
        keyed: Sequence[KeyedResponse] = (),
    ) -> None:
        super().__init__()
        self._lock = threading.Lock()
        self._ordered = list(responses)
        self._keyed = list(keyed)
        self.requests: list[GenerationRequest] = []

    def _generate(self, request: GenerationRequest) -> GenerationResult:
        prompt = request.prompt_text
        with self._lock:
            self.requests.append(request)
            text = None
            for entry in self._keyed:
                if all(part in prompt for part in entry.match):
                    text = entry.response
                    break
            if text is None:
                if not self._ordered:
                    if self._keyed:
                        raise MalformedResponse("no scripted fixture matches prompt")
                    raise MalformedResponse("scripted fixture exhausted")
                text = self._ordered.pop(0)
        return GenerationResult(
            text=text,
            prompt_tokens=estimate_tokens(prompt),
            completion_tokens=estimate_tokens(text),
            latency_ms=0,
            backend_id=self.backend_id,
            usage_estimated=True,
        )


def make_scripted_backend(
    responses: Sequence[str] = (),
    *,
    keyed: Sequence[KeyedResponse] = (),
) -> ScriptedBackend:
    return ScriptedBackend(responses, keyed=keyed)


@dataclass(frozen=True)
class RetryPolicy:
    """Sleep `backoffs[i]` (jittered) before retry i+1; len(backoffs) caps the
    retry count."""

    backoffs: tuple[float, ...] = (0.5, 1.0, 2.0)
    jitter: bool = True

    def delay(self, attempt: int) -> float:
        base = self.backoffs[attempt]
        if not self.jitter:
            return base
        return base * (0.5 + random.random())


class HttpBackend(Backend):
    """Client for the de-facto chat-completion wire format.

    POSTs ``{model, messages, temperature, max_tokens[, seed]}`` and reads
    ``choices[0].message.content`` plus the optional ``usage`` block. The
    credential comes from the ``EDU_API_KEY`` environment variable when not
    passed explicitly.
    """

    backend_id = "http"

    def __init__(
        self,
        endpoint: str,
        *,
        api_key: str | None = None,
        timeout: float = 60.0,
        retry: RetryPolicy = RetryPolicy(),
        client: httpx.Client | None = None,
    ) -> None:
        super().__init__()
        self.endpoint = endpoint
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.retry = retry
        self._client = client or httpx.Client(timeout=timeout)

    def close(self) -> None:
        self._client.close()

    def _post(self, payload: dict) -> httpx.Response:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return self._client.post(self.endpoint, json=payload, headers=headers)

    def _generate(self, request: GenerationRequest) -> GenerationResult:
        payload: dict = {
            "model": request.model_id,
            "messages": [{"role": m.role.value, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.seed is not None:
            payload["seed"] = request.seed

        retries = len(self.retry.backoffs)
        last_error: GatewayError = TransportError("no attempt made")
        started = time.monotonic()
        for attempt in range(retries + 1):
            try:
                response = self._post(payload)
            except httpx.HTTPError as exc:
                last_error = TransportError(f"transport failure: {exc}")
            else:
                if response.status_code in (401, 403):
                    raise AuthError(f"credential rejected (status {response.status_code})")
                if response.status_code == 429:
                    last_error = RateLimited("rate limited (status 429)")
                elif response.status_code >= 500:
                    last_error = TransportError(f"server error (status {response.status_code})")
                else:
                    return self._parse(response, request, started)
            if attempt < retries:
                time.sleep(self.retry.delay(attempt))
        raise last_error

    def _parse(
        self, response: httpx.Response, request: GenerationRequest, started: float
    ) -> GenerationResult:
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unusable response body: {exc}") from exc
        if not isinstance(text, str):
            raise MalformedResponse("choices[0].message.content is not text")
        usage = body.get("usage") or {}
        prompt_tokens = usage.get("prompt_tokens")
        completion_tokens = usage.get("completion_tokens")
        estimated = prompt_tokens is None or completion_tokens is None
        if prompt_tokens is None:
            prompt_tokens = estimate_tokens(request.prompt_text)
        if completion_tokens is None:
            completion_tokens = estimate_tokens(text)
        return GenerationResult(
            text=text,
            prompt_tokens=int(prompt_tokens),
            completion_tokens=int(completion_tokens),
            latency_ms=int((time.monotonic() - started) * 1000),
            backend_id=self.backend_id,
            usage_estimated=estimated,
        )
