"""Bounded-concurrency batch dispatch with crash-safe resume.

Completed transcripts append to a checkpoint JSONL as they finish (a single
lock serializes writes); a rerun loads the checkpoint and only dispatches the
remainder, so every prompt id is queried exactly once across interruptions.
Output order always equals input order.
"""

from __future__ import annotations

import hashlib
import threading
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from pathlib import Path
from typing import Callable, Optional

import requests

from ..prompts import PromptRecord
from .config import EndpointConfig
from .transport import Transcript, complete


def load_checkpoint(path: str | Path) -> dict[str, Transcript]:
    path = Path(path)
    done: dict[str, Transcript] = {}
    if not path.exists():
        return done
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            transcript = Transcript.from_json(line)
            done[transcript.prompt_id] = transcript
    return done


def write_transcripts(transcripts: list[Transcript], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for transcript in transcripts:
            fh.write(transcript.to_json() + "\n")


def read_transcripts(path: str | Path) -> list[Transcript]:
    with open(path, encoding="utf-8") as fh:
        return [Transcript.from_json(line) for line in fh if line.strip()]


def stable_digest(transcripts: list[Transcript]) -> str:
    """Content digest excluding volatile fields (latency).

    Used by resume-equivalence checks: an interrupted-and-resumed run must
    produce the same digest as an uninterrupted one.
    """
    hasher = hashlib.sha256()
    for transcript in sorted(transcripts, key=lambda t: t.prompt_id):
        hasher.update(repr((
            transcript.prompt_id,
            transcript.request_hash,
            transcript.response,
            transcript.error,
        )).encode())
    return hasher.hexdigest()


def run_batch(
    prompts: list[PromptRecord],
    cfg: EndpointConfig,
    image_root: str | Path,
    checkpoint_path: str | Path,
    stop_event: Optional[threading.Event] = None,
    progress: Optional[Callable[[Transcript], None]] = None,
) -> list[Transcript]:
    """Dispatch prompts, resuming from the checkpoint; returns input order.

    When ``stop_event`` fires, no further prompts are dispatched; in-flight
    requests finish and are checkpointed, and the partial list is returned.
    """
    if not prompts:
        raise ValueError("prompts must be non-empty")
    seen: set[str] = set()
    for prompt in prompts:
        if prompt.prompt_id in seen:
            raise ValueError(f"duplicate prompt id {prompt.prompt_id}")
        seen.add(prompt.prompt_id)

    checkpoint_path = Path(checkpoint_path)
    done = load_checkpoint(checkpoint_path)
    # errored entries are re-dispatched on resume: only successfully served
    # ids are exactly-once (the checkpoint is an append-only log; the latest
    # entry per id wins)
    pending = [
        p for p in prompts
        if p.prompt_id not in done or done[p.prompt_id].error is not None
    ]

    write_lock = threading.Lock()

    def record(transcript: Transcript):
        with write_lock:
            with open(checkpoint_path, "a", encoding="utf-8") as fh:
                fh.write(transcript.to_json() + "\n")
                fh.flush()
            done[transcript.prompt_id] = transcript
        if progress is not None:
            progress(transcript)

    if pending:
        thread_local = threading.local()

        def worker(prompt: PromptRecord) -> Transcript:
            if not hasattr(thread_local, "session"):
                thread_local.session = requests.Session()
            return complete(prompt, cfg, image_root, session=thread_local.session)

        with ThreadPoolExecutor(max_workers=cfg.concurrency_limit) as pool:
            queue = list(pending)
            in_flight = {}
            while queue or in_flight:
                while (queue and len(in_flight) < cfg.concurrency_limit
                       and not (stop_event and stop_event.is_set())):
                    prompt = queue.pop(0)
                    in_flight[pool.submit(worker, prompt)] = prompt.prompt_id
                if not in_flight:
                    break  # stopped before dispatching anything else
                finished, _ = wait(in_flight, return_when=FIRST_COMPLETED)
                for future in finished:
                    del in_flight[future]
                    record(future.result())
                if stop_event and stop_event.is_set() and not in_flight:
                    break

    return [done[p.prompt_id] for p in prompts if p.prompt_id in done]
