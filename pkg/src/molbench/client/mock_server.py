"""Scripted OpenAI-compatible endpoint for hermetic tests.

Speaks exactly the wire format the transport sends. Behavior comes from a
script dict (or TOML file via the CLI): fixed echo text, an answers table
keyed by the target molecule string (with an optional flip set), a status
sequence for failure injection, and artificial latency. GET /stats exposes
request counters and the concurrency high-water mark.
"""

from __future__ import annotations

import json
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

_TARGET_RE = re.compile(r"^(?:SMILES|SELFIES): (.+)$", re.MULTILINE)


class _Server(ThreadingHTTPServer):
    # deep accept backlog so bursty batch clients never see refused connections
    request_queue_size = 128
    daemon_threads = True


class MockState:
    def __init__(self, script: dict):
        self.script = dict(script)
        self.lock = threading.Lock()
        self.requests = 0
        self.in_flight = 0
        self.max_in_flight = 0
        self.status_queue = list(script.get("status_sequence", []))

    def next_status(self) -> int:
        with self.lock:
            if self.status_queue:
                return int(self.status_queue.pop(0))
        return 200

    def enter(self) -> None:
        with self.lock:
            self.requests += 1
            self.in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self.in_flight)

    def leave(self) -> None:
        with self.lock:
            self.in_flight -= 1

    def answer_for(self, prompt_text: str) -> str:
        matches = _TARGET_RE.findall(prompt_text)
        molecule = matches[-1].strip() if matches else ""
        answers = self.script.get("answers", {})
        text = answers.get(molecule, self.script.get("echo", "mock response"))
        if molecule in set(self.script.get("flip", [])):
            text = {"Yes": "No", "No": "Yes"}.get(text, text)
        return text


class _Handler(BaseHTTPRequestHandler):
    state: MockState  # injected by make_server

    def log_message(self, *args):  # quiet
        pass

    def do_GET(self):
        if self.path == "/stats":
            body = json.dumps({
                "requests": self.state.requests,
                "max_in_flight": self.state.max_in_flight,
            }).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self.send_error(404)

    def do_POST(self):
        if not self.path.endswith("/chat/completions"):
            self.send_error(404)
            return
        self.state.enter()
        try:
            latency = float(self.state.script.get("latency_s", 0.0))
            if latency:
                time.sleep(latency)
            status = self.state.next_status()
            if status != 200:
                body = json.dumps({"error": {"message": f"scripted {status}"}}).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
            length = int(self.headers.get("Content-Length", 0))
            request = json.loads(self.rfile.read(length).decode())
            parts = request["messages"][0]["content"]
            prompt_text = next(
                (part["text"] for part in parts if part.get("type") == "text"), "")
            has_image = any(part.get("type") == "image_url" for part in parts)
            if self.state.script.get("require_image", True) and not has_image:
                self.send_error(400, "missing image part")
                return
            answer = self.state.answer_for(prompt_text)
            body = json.dumps({
                "id": "mock-1",
                "model": request.get("model", "mock"),
                "choices": [{
                    "index": 0,
                    "message": {"role": "assistant", "content": answer},
                    "finish_reason": "stop",
                }],
            }).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        finally:
            self.state.leave()


class MockServer:
    """Context manager running the scripted endpoint on a local port."""

    def __init__(self, script: Optional[dict] = None, port: int = 0):
        self.state = MockState(script or {})
        handler = type("Handler", (_Handler,), {"state": self.state})
        self._server = _Server(("127.0.0.1", port), handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}/v1"

    def start(self) -> "MockServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def stats(self) -> dict:
        return {
            "requests": self.state.requests,
            "max_in_flight": self.state.max_in_flight,
        }


def serve_forever(script: dict, host: str, port: int) -> None:
    """Blocking server entry point used by the CLI mock-serve subcommand."""
    state = MockState(script)
    handler = type("Handler", (_Handler,), {"state": state})
    server = _Server((host, port), handler)
    actual_host, actual_port = server.server_address
    print(f"mock endpoint listening on http://{actual_host}:{actual_port}/v1")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
