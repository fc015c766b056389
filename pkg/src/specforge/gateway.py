"""Chat-completion backends behind one interface: live HTTP and fixture replay.

The live backend speaks the generic chat-completion JSON wire protocol
(message list in, choice list out) against any compatible ``base_url``, so no
provider is hard-coded. The replay backend serves recorded fixtures keyed by
program x variant x sample index, which makes every downstream pipeline step
reproducible and testable offline. ``record_fixture`` turns live responses
into replay fixtures.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Protocol

import requests

from .model import GenerationConfig
from .prompts import BuiltPrompt

DEFAULT_API_KEY_ENV = "SPECFORGE_API_KEY"
DEFAULT_MAX_INFLIGHT = 4


class GatewayError(RuntimeError):
    """Base class for completion failures."""


class MissingCredential(GatewayError):
    def __init__(self, env_name: str):
        super().__init__(f"no API credential: environment variable {env_name} is unset")


class MissingFixture(GatewayError):
    def __init__(self, key: str, path: Path):
        super().__init__(f"no fixture for {key} (looked at {path})")
        self.key = key


class BackendError(GatewayError):
    def __init__(self, status: int | None, message: str):
        super().__init__(f"backend error (status={status}): {message}")
        self.status = status


class EmptyResponse(GatewayError):
    def __init__(self, key: str):
        super().__init__(f"backend returned an empty completion for {key}")


@dataclass(frozen=True)
class CompletionRequest:
    prompt: BuiltPrompt
    config: GenerationConfig
    sample_index: int

    def __post_init__(self) -> None:
        if not 0 <= self.sample_index < self.config.samples_per_program:
            raise ValueError(
                f"sample_index {self.sample_index} outside "
                f"[0, {self.config.samples_per_program})"
            )

    @property
    def key(self) -> str:
        return f"{self.prompt.program_name}/{self.prompt.variant.value}/{self.sample_index}"

    @property
    def digest(self) -> str:
        return request_digest(
            self.prompt.text, self.config.temperature, self.sample_index
        )


def request_digest(prompt_text: str, temperature: float, sample_index: int) -> str:
    """Stable byte-level hash of (prompt text, temperature, sample index)."""
    payload = f"{prompt_text}\x00{temperature!r}\x00{sample_index}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    backend_kind: str  # "live" | "replay"
    backend_detail: str  # model id for live, fixture key for replay
    latency_ms: int
    request_digest: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("completion text must be non-empty")
        if self.latency_ms < 0:
            raise ValueError("latency must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "text": self.text,
            "backend_kind": self.backend_kind,
            "backend_detail": self.backend_detail,
            "latency_ms": self.latency_ms,
            "request_digest": self.request_digest,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CompletionResponse":
        return cls(
            text=d["text"],
            backend_kind=d["backend_kind"],
            backend_detail=d["backend_detail"],
            latency_ms=d["latency_ms"],
            request_digest=d["request_digest"],
        )


class CompletionBackend(Protocol):
    def complete(self, request: CompletionRequest) -> CompletionResponse: ...


def fixture_paths(directory: Path | str, key: str) -> tuple[Path, Path]:
    """(response text path, sidecar metadata path) for a fixture key."""
    base = Path(directory) / key
    return base.with_suffix(".txt"), base.with_suffix(".json")


class ReplayBackend:
    """Deterministic completions from recorded fixture files.

    Fixture layout: ``<dir>/<program>/<variant>/<sample>.txt`` with an
    optional ``.json`` sidecar of request metadata.
    """

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        text_path, _ = fixture_paths(self.directory, request.key)
        if not text_path.is_file():
            raise MissingFixture(request.key, text_path)
        text = text_path.read_text(encoding="utf-8")
        if not text:
            raise EmptyResponse(request.key)
        return CompletionResponse(
            text=text,
            backend_kind="replay",
            backend_detail=request.key,
            latency_ms=0,
            request_digest=request.digest,
        )


class LiveBackend:
    """HTTP chat-completion client with bounded retries.

    Transport failures and 5xx responses are retried with exponential backoff
    (one sleep per retry, ``backoff_s`` long); 4xx responses fail immediately.
    Concurrent use is limited to ``max_inflight`` requests.
    """

    def __init__(
        self,
        base_url: str,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        timeout_s: float = 120.0,
        backoff_s: tuple[float, ...] = (1.0, 2.0, 4.0),
        max_inflight: int = DEFAULT_MAX_INFLIGHT,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.timeout_s = timeout_s
        self.backoff_s = backoff_s
        self._session = session or requests.Session()
        self._gate = threading.Semaphore(max_inflight)

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        api_key = os.environ.get(self.api_key_env, "")
        if not api_key:
            raise MissingCredential(self.api_key_env)
        payload = {
            "model": request.config.model_id,
            "messages": [{"role": "user", "content": request.prompt.text}],
            "temperature": request.config.temperature,
            "max_tokens": request.config.max_output_tokens,
        }
        headers = {
            "Authorization": f"Bearer {api_key}",
            "Content-Type": "application/json",
        }
        url = f"{self.base_url}/chat/completions"

        started = time.perf_counter()
        last_error: tuple[int | None, str] = (None, "no attempt made")
        with self._gate:
            for attempt in range(len(self.backoff_s) + 1):
                if attempt > 0:
                    time.sleep(self.backoff_s[attempt - 1])
                try:
                    http = self._session.post(
                        url, json=payload, headers=headers, timeout=self.timeout_s
                    )
                except requests.RequestException as exc:
                    last_error = (None, f"transport failure: {exc}")
                    continue
                if 400 <= http.status_code < 500:
                    raise BackendError(http.status_code, http.text[:500])
                if http.status_code >= 500:
                    last_error = (http.status_code, http.text[:500])
                    continue
                try:
                    text = http.json()["choices"][0]["message"]["content"]
                except (ValueError, KeyError, IndexError, TypeError) as exc:
                    raise BackendError(
                        http.status_code, f"malformed completion payload: {exc}"
                    ) from exc
                if not text:
                    raise EmptyResponse(request.key)
                latency_ms = int((time.perf_counter() - started) * 1000)
                return CompletionResponse(
                    text=text,
                    backend_kind="live",
                    backend_detail=request.config.model_id,
                    latency_ms=latency_ms,
                    request_digest=request.digest,
                )
        raise BackendError(last_error[0], f"retries exhausted: {last_error[1]}")


def record_fixture(
    request: CompletionRequest,
    response: CompletionResponse,
    directory: Path | str,
    force: bool = False,
) -> Path:
    """Persist a live response so a later replay returns byte-identical text.

    Refuses to overwrite an existing fixture unless ``force``; returns the
    text file path.
    """
    if response.backend_kind != "live":
        raise ValueError("only live responses are recorded as fixtures")
    text_path, meta_path = fixture_paths(directory, request.key)
    if text_path.exists() and not force:
        raise FileExistsError(f"fixture already recorded at {text_path}")
    text_path.parent.mkdir(parents=True, exist_ok=True)
    text_path.write_text(response.text, encoding="utf-8")
    metadata = {
        "program_name": request.prompt.program_name,
        "variant": request.prompt.variant.value,
        "sample_index": request.sample_index,
        "request_digest": response.request_digest,
        "model_id": request.config.model_id,
        "temperature": request.config.temperature,
        "latency_ms": response.latency_ms,
    }
    meta_path.write_text(
        json.dumps(metadata, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return text_path
