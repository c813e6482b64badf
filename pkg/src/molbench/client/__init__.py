"""Model endpoint client: transport, batch runner, scripted mock."""

from .batch import (
    load_checkpoint,
    read_transcripts,
    run_batch,
    stable_digest,
    write_transcripts,
)
from .config import EndpointConfig, load_endpoint_config
from .mock_server import MockServer, serve_forever
from .transport import Transcript, backoff_delay, build_payload, complete

__all__ = [
    "EndpointConfig",
    "load_endpoint_config",
    "Transcript",
    "complete",
    "build_payload",
    "backoff_delay",
    "run_batch",
    "load_checkpoint",
    "write_transcripts",
    "read_transcripts",
    "stable_digest",
    "MockServer",
    "serve_forever",
]
