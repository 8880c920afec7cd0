"""Shared fixtures: bundled data paths, a session-scoped pipeline run,
and a scriptable in-process chat-completions endpoint."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from corpuslens.corpus import Corpus, Document
from corpuslens.report import load_config, run_pipeline
from corpuslens.tokenization import tokenize_corpus

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def mini_config_path() -> Path:
    return ROOT / "configs" / "mini.yaml"


@pytest.fixture(scope="session")
def mini_report(mini_config_path):
    """One full pipeline run on the bundled synthetic corpora."""
    return run_pipeline(load_config(mini_config_path))


def corpus_from_texts(texts, name="test", story="s1", source="other") -> Corpus:
    docs = tuple(
        Document(id=f"{name}-{i:03d}", story_id=story, source=source, text=t)
        for i, t in enumerate(texts)
    )
    return Corpus(name=name, documents=docs)


def tokenized(texts, name="test"):
    return tokenize_corpus(corpus_from_texts(texts, name=name))


# --- scriptable chat-completions endpoint ---------------------------------

def ok_payload(text="Der Hund bellt. Lars lacht.", model="mock-model"):
    return {
        "model": model,
        "choices": [{"message": {"content": text}}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 5},
    }


@dataclass
class EndpointState:
    base_url: str
    received: list = field(default_factory=list)
    script: list = field(default_factory=list)  # (status, payload) or payload
    default: tuple = (200, None)  # None -> ok_payload()
    lock: threading.Lock = field(default_factory=threading.Lock)

    def next_action(self, record) -> tuple:
        with self.lock:
            self.received.append(record)
            action = self.script.pop(0) if self.script else self.default
        if not isinstance(action, tuple):
            action = (200, action)
        status, payload = action
        if payload is None:
            payload = ok_payload()
        return status, payload


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        record = {
            "path": self.path,
            "authorization": self.headers.get("Authorization"),
            "body": json.loads(raw),
        }
        status, payload = self.server.state.next_action(record)
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def mock_endpoint():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    state = EndpointState(base_url=f"http://127.0.0.1:{server.server_port}/v1")
    server.state = state
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield state
    finally:
        server.shutdown()
        thread.join(timeout=5)
        server.server_close()
