"""Single-request dispatch to an OpenAI-compatible chat-completions endpoint.

The request carries the prompt text plus the depiction as a base64 data-URI
image part. Retries cover 429, 5xx, timeouts, and connection drops with
exponential backoff (base 1s, factor 2, +-20% jitter, 60s cap); other 4xx
fail immediately. The raw response text is recorded verbatim.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import requests

from ..errors import HttpStatus, MalformedResponse, RateLimited, RequestTimeout
from ..prompts import PromptRecord
from .config import EndpointConfig

BACKOFF_BASE_S = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.2
BACKOFF_CAP_S = 60.0


@dataclass(frozen=True)
class Transcript:
    prompt_id: str
    request_hash: str
    response: Optional[str]
    error: Optional[str]
    latency_s: float
    attempts: int

    def __post_init__(self):
        if (self.response is None) == (self.error is None):
            raise ValueError("transcript must end in exactly one of response/error")

    def to_json(self) -> str:
        return json.dumps({
            "v": 1,
            "prompt_id": self.prompt_id,
            "request_hash": self.request_hash,
            "response": self.response,
            "error": self.error,
            "latency_s": round(self.latency_s, 6),
            "attempts": self.attempts,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "Transcript":
        data = json.loads(line)
        return cls(
            prompt_id=data["prompt_id"],
            request_hash=data["request_hash"],
            response=data["response"],
            error=data["error"],
            latency_s=data["latency_s"],
            attempts=data["attempts"],
        )


def build_payload(prompt: PromptRecord, cfg: EndpointConfig,
                  image_root: str | Path) -> bytes:
    """Byte-stable request body for (prompt, cfg)."""
    image_bytes = (Path(image_root) / prompt.image_path).read_bytes()
    data_uri = "data:image/png;base64," + base64.b64encode(image_bytes).decode()
    body = {
        "model": cfg.model_name,
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_tokens,
        "messages": [{
            "role": "user",
            "content": [
                {"type": "text", "text": prompt.text},
                {"type": "image_url", "image_url": {"url": data_uri}},
            ],
        }],
    }
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


def backoff_delay(attempt: int, jitter: Callable[[], float] = random.random) -> float:
    """Delay before retry ``attempt`` (1-based): 1s, 2s, 4s... +-20%, 60s cap."""
    base = min(BACKOFF_BASE_S * (BACKOFF_FACTOR ** (attempt - 1)), BACKOFF_CAP_S)
    spread = 1.0 + BACKOFF_JITTER * (2.0 * jitter() - 1.0)
    return min(base * spread, BACKOFF_CAP_S)


def _extract_text(raw: bytes) -> str:
    try:
        data = json.loads(raw.decode())
        return data["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(f"cannot extract completion text: {exc}") from None


def complete(
    prompt: PromptRecord,
    cfg: EndpointConfig,
    image_root: str | Path,
    session: Optional[requests.Session] = None,
    sleeper: Callable[[float], None] = time.sleep,
) -> Transcript:
    payload = build_payload(prompt, cfg, image_root)
    request_hash = hashlib.sha256(payload).hexdigest()
    url = cfg.base_url.rstrip("/") + "/chat/completions"
    headers = {"Content-Type": "application/json"}
    if cfg.api_key_env:
        key = os.environ.get(cfg.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"

    http = session or requests.Session()
    start = time.monotonic()
    attempts = 0
    last_error: Optional[Exception] = None
    while attempts <= cfg.max_retries:
        attempts += 1
        try:
            reply = http.post(url, data=payload, headers=headers, timeout=cfg.timeout)
        except requests.Timeout:
            last_error = RequestTimeout(f"timeout after {cfg.timeout}s")
        except requests.ConnectionError as exc:
            last_error = HttpStatus(0, f"connection failed: {exc}")
        else:
            if reply.status_code == 200:
                try:
                    text = _extract_text(reply.content)
                except MalformedResponse as exc:
                    return Transcript(prompt.prompt_id, request_hash, None, str(exc),
                                      time.monotonic() - start, attempts)
                return Transcript(prompt.prompt_id, request_hash, text, None,
                                  time.monotonic() - start, attempts)
            if reply.status_code == 429:
                last_error = RateLimited(reply.text[:200])
            elif 500 <= reply.status_code < 600:
                last_error = HttpStatus(reply.status_code, reply.text[:200])
            else:
                error = HttpStatus(reply.status_code, reply.text[:200])
                return Transcript(prompt.prompt_id, request_hash, None, str(error),
                                  time.monotonic() - start, attempts)
        if attempts <= cfg.max_retries:
            sleeper(backoff_delay(attempts))
    return Transcript(prompt.prompt_id, request_hash, None, str(last_error),
                      time.monotonic() - start, attempts)
