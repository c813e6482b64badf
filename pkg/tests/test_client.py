import random
import threading

import pytest

from molbench.client import (
    EndpointConfig,
    MockServer,
    Transcript,
    backoff_delay,
    build_payload,
    complete,
    load_endpoint_config,
    read_transcripts,
    run_batch,
    stable_digest,
    write_transcripts,
)
from molbench.prompts import PromptRecord


def _prompt(pid, text="SMILES: CCO", image="img.png"):
    return PromptRecord(
        prompt_id=pid, dataset="toy", mode="icl", k=0, representation="SMILES",
        text=text, image_path=image, example_ids=(), target_id=0,
        expected_format="yes_no",
    )


@pytest.fixture
def image_root(tmp_path):
    (tmp_path / "img.png").write_bytes(b"\x89PNG fake image bytes")
    return tmp_path


def _cfg(url, **kw):
    defaults = dict(base_url=url, model_name="mock-model", timeout=5.0,
                    max_retries=2, concurrency_limit=3)
    defaults.update(kw)
    return EndpointConfig(**defaults)


def test_payload_is_byte_stable(image_root):
    cfg = _cfg("http://localhost:1/v1")
    prompt = _prompt("p1")
    assert build_payload(prompt, cfg, image_root) == build_payload(prompt, cfg, image_root)


def test_payload_carries_temperature_and_max_tokens(image_root):
    import json

    cfg = _cfg("http://localhost:1/v1", temperature=0.7, max_tokens=99)
    body = json.loads(build_payload(_prompt("p1"), cfg, image_root))
    assert body["temperature"] == 0.7
    assert body["max_tokens"] == 99
    parts = body["messages"][0]["content"]
    assert parts[0]["type"] == "text"
    assert parts[1]["image_url"]["url"].startswith("data:image/png;base64,")


def test_backoff_schedule():
    assert backoff_delay(1, jitter=lambda: 0.5) == pytest.approx(1.0)
    assert backoff_delay(2, jitter=lambda: 0.5) == pytest.approx(2.0)
    assert backoff_delay(3, jitter=lambda: 0.5) == pytest.approx(4.0)
    assert backoff_delay(1, jitter=lambda: 1.0) == pytest.approx(1.2)
    assert backoff_delay(1, jitter=lambda: 0.0) == pytest.approx(0.8)
    assert backoff_delay(30, jitter=lambda: 0.5) == pytest.approx(60.0)


def test_complete_against_echo_mock(image_root):
    with MockServer({"echo": "scripted string"}) as mock:
        transcript = complete(_prompt("p1"), _cfg(mock.base_url), image_root)
    assert transcript.response == "scripted string"
    assert transcript.error is None
    assert transcript.attempts == 1


def test_429_then_200_two_attempts(image_root):
    with MockServer({"echo": "ok", "status_sequence": [429]}) as mock:
        transcript = complete(_prompt("p1"), _cfg(mock.base_url), image_root,
                              sleeper=lambda s: None)
    assert transcript.response == "ok"
    assert transcript.attempts == 2


def test_unreachable_host_errors_after_retries(image_root):
    cfg = _cfg("http://127.0.0.1:9/v1", max_retries=1, timeout=0.5)
    transcript = complete(_prompt("p1"), cfg, image_root, sleeper=lambda s: None)
    assert transcript.response is None
    assert transcript.error
    assert transcript.attempts == 2


def test_4xx_fails_without_retry(image_root):
    with MockServer({"echo": "x", "status_sequence": [403, 403, 403]}) as mock:
        transcript = complete(_prompt("p1"), _cfg(mock.base_url), image_root,
                              sleeper=lambda s: None)
    assert transcript.error and "403" in transcript.error
    assert transcript.attempts == 1


def test_answers_mode_reads_last_molecule(image_root):
    script = {"answers": {"CCO": "Yes", "CCN": "No"}}
    text = "Example 1:\nSMILES: CCN\nAnswer: No\n\nSMILES: CCO\nAnswer Yes or No."
    with MockServer(script) as mock:
        transcript = complete(_prompt("p1", text=text), _cfg(mock.base_url), image_root)
    assert transcript.response == "Yes"


def test_run_batch_order_and_concurrency(image_root, tmp_path):
    prompts = [_prompt(f"p{i:03d}") for i in range(10)]
    with MockServer({"echo": "ok", "latency_s": 0.05}) as mock:
        transcripts = run_batch(prompts, _cfg(mock.base_url, concurrency_limit=3),
                                image_root, tmp_path / "ckpt.jsonl")
        stats = mock.stats()
    assert [t.prompt_id for t in transcripts] == [p.prompt_id for p in prompts]
    assert stats["requests"] == 10
    assert 1 < stats["max_in_flight"] <= 3


def test_run_batch_single_prompt(image_root, tmp_path):
    with MockServer({"echo": "one"}) as mock:
        transcripts = run_batch([_prompt("solo")], _cfg(mock.base_url),
                                image_root, tmp_path / "c.jsonl")
    assert len(transcripts) == 1
    assert transcripts[0].response == "one"


def test_resume_skips_completed(image_root, tmp_path):
    prompts = [_prompt(f"p{i}") for i in range(10)]
    checkpoint = tmp_path / "ckpt.jsonl"
    stop = threading.Event()
    count = [0]

    def progress(_):
        count[0] += 1
        if count[0] >= 5:
            stop.set()

    with MockServer({"echo": "ok"}) as mock:
        cfg = _cfg(mock.base_url, concurrency_limit=1)
        partial = run_batch(prompts, cfg, image_root, checkpoint, stop_event=stop,
                            progress=progress)
        served_first = mock.stats()["requests"]
        assert len(partial) < 10
    with MockServer({"echo": "ok"}) as mock:
        cfg = _cfg(mock.base_url, concurrency_limit=1)
        full = run_batch(prompts, cfg, image_root, checkpoint)
        assert mock.stats()["requests"] == 10 - served_first
    assert [t.prompt_id for t in full] == [p.prompt_id for p in prompts]


def test_resume_digest_matches_uninterrupted(image_root, tmp_path):
    prompts = [_prompt(f"p{i:02d}") for i in range(20)]
    with MockServer({"echo": "stable"}) as mock:
        cfg = _cfg(mock.base_url, concurrency_limit=2)
        baseline = run_batch(prompts, cfg, image_root, tmp_path / "base.jsonl")
    rng = random.Random(17)
    for trial in range(3):
        checkpoint = tmp_path / f"trial{trial}.jsonl"
        kill_at = rng.randint(1, 19)
        stop = threading.Event()
        seen = [0]

        def progress(_):
            seen[0] += 1
            if seen[0] >= kill_at:
                stop.set()

        with MockServer({"echo": "stable"}) as mock:
            cfg = _cfg(mock.base_url, concurrency_limit=2)
            run_batch(prompts, cfg, image_root, checkpoint, stop_event=stop,
                      progress=progress)
        with MockServer({"echo": "stable"}) as mock:
            cfg = _cfg(mock.base_url, concurrency_limit=2)
            resumed = run_batch(prompts, cfg, image_root, checkpoint)
        assert stable_digest(resumed) == stable_digest(baseline)


def test_transcript_file_round_trip(tmp_path):
    transcripts = [
        Transcript("a", "h1", "yes", None, 0.5, 1),
        Transcript("b", "h2", None, "HTTP 500", 1.0, 3),
    ]
    path = tmp_path / "t.jsonl"
    write_transcripts(transcripts, path)
    assert read_transcripts(path) == transcripts


def test_transcript_exactly_one_terminal_state():
    with pytest.raises(ValueError):
        Transcript("a", "h", "text", "error", 0.1, 1)
    with pytest.raises(ValueError):
        Transcript("a", "h", None, None, 0.1, 1)


def test_endpoint_config_from_toml(tmp_path):
    path = tmp_path / "endpoint.toml"
    path.write_text(
        '[endpoint]\nbase_url = "http://x/v1"\nmodel_name = "m"\n'
        'temperature = 0.3\nconcurrency_limit = 7\napi_key_env = "MY_KEY"\n')
    cfg = load_endpoint_config(path)
    assert cfg.base_url == "http://x/v1"
    assert cfg.temperature == 0.3
    assert cfg.concurrency_limit == 7
    assert cfg.api_key_env == "MY_KEY"


def test_duplicate_prompt_ids_rejected(image_root, tmp_path):
    prompts = [_prompt("same"), _prompt("same")]
    with MockServer({"echo": "x"}) as mock:
        with pytest.raises(ValueError):
            run_batch(prompts, _cfg(mock.base_url), image_root, tmp_path / "c.jsonl")
