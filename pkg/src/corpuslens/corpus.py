"""Corpus loading, validation and persistence.

A corpus is a named collection of documents, each being one writer's
(child's or model's) description of one picture story. Corpora are stored
as UTF-8 JSON Lines manifests with one document object per line:

    {"id": str, "story": str, "text": str, "source": str, "meta": {...}}

``meta`` is optional. Loaded corpora are immutable and safe to share
across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

DEFAULT_PROTAGONISTS = frozenset({"Lars", "Lea", "Dodo"})


class Source(str, Enum):
    CHILD = "child"
    LLM_ZS = "llm-zs"
    LLM_FS = "llm-fs"
    OTHER = "other"


@dataclass(frozen=True)
class Document:
    """One text: a single description of a single picture story."""

    id: str
    story_id: str
    source: Source
    text: str
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not self.story_id:
            raise ValueError(f"document {self.id!r}: story_id must be non-empty")
        if not self.text.strip():
            raise ValueError(f"document {self.id!r}: text is empty")
        if not isinstance(self.source, Source):
            object.__setattr__(self, "source", Source(self.source))


@dataclass(frozen=True)
class Corpus:
    name: str
    documents: tuple[Document, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("corpus name must be non-empty")
        object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ValueError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


class StopwordSet:
    """Case-insensitive set of function words.

    German stopword lists are lowercase while sentence-initial function
    words are capitalized, so membership tests fold case.
    """

    def __init__(self, words: Iterable[str]):
        folded = set()
        for w in words:
            if not w:
                raise ValueError("stopword set must not contain empty strings")
            folded.add(w.casefold())
        self._words = frozenset(folded)

    def __contains__(self, word: str) -> bool:
        return word.casefold() in self._words

    def __len__(self):
        return len(self._words)

    def __iter__(self):
        return iter(sorted(self._words))

    def __eq__(self, other):
        return isinstance(other, StopwordSet) and self._words == other._words


def _parse_manifest_line(line: str, lineno: int) -> Document:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {lineno}: malformed JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise ValueError(f"line {lineno}: expected a JSON object")
    missing = {"id", "story", "text", "source"} - obj.keys()
    if missing:
        raise ValueError(f"line {lineno}: missing fields {sorted(missing)}")
    try:
        return Document(
            id=str(obj["id"]),
            story_id=str(obj["story"]),
            source=Source(obj["source"]),
            text=str(obj["text"]),
            meta=dict(obj.get("meta", {})),
        )
    except ValueError as exc:
        raise ValueError(f"line {lineno}: {exc}") from exc


def load_corpus(manifest_path: str | Path, name: str | None = None) -> Corpus:
    """Load a corpus from a JSONL manifest, one document per line.

    Raises ValueError naming the offending line for malformed JSON,
    missing fields, empty text, or duplicate ids.
    """
    path = Path(manifest_path)
    documents = []
    seen_ids = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            doc = _parse_manifest_line(line, lineno)
            if doc.id in seen_ids:
                raise ValueError(
                    f"line {lineno}: duplicate id {doc.id!r} "
                    f"(first seen on line {seen_ids[doc.id]})"
                )
            seen_ids[doc.id] = lineno
            documents.append(doc)
    if not documents:
        raise ValueError(f"{path}: no documents in manifest")
    return Corpus(name=name or path.stem, documents=tuple(documents))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus as a JSONL manifest; inverse of load_corpus."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            obj = {
                "id": doc.id,
                "story": doc.story_id,
                "text": doc.text,
                "source": doc.source.value,
            }
            if doc.meta:
                obj["meta"] = dict(doc.meta)
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_stopwords(path: str | Path) -> StopwordSet:
    """Read a newline-delimited stopword file.

    Blank lines and lines starting with '#' are ignored.
    """
    words = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            words.append(line)
    return StopwordSet(words)


def default_stopwords() -> StopwordSet:
    """The packaged German function-word list (232 entries)."""
    ref = resources.files("corpuslens.data").joinpath("stopwords_de.txt")
    words = []
    for raw in ref.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return StopwordSet(words)
