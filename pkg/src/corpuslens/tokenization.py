"""Sentence segmentation and case-preserving word tokenization.

Deterministic rule-based processing: sentences end after runs of '.', '!'
or '?' (a '.' flanked by digits is a decimal point, not a terminator);
tokens are whitespace-delimited chunks with leading/trailing punctuation
detached as single-character tokens. Case is never altered, so German
noun/verb pairs (Lernen vs. lernen) stay distinct. No character of the
input is dropped: concatenating all token surfaces reproduces the input's
non-whitespace characters in order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .corpus import Corpus, StopwordSet

_TERMINATORS = frozenset(".!?")


@dataclass(frozen=True)
class Token:
    surface: str
    is_word: bool = field(init=False)
    char_length: int = field(init=False)

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        object.__setattr__(
            self, "is_word", any(ch.isalpha() for ch in self.surface)
        )
        object.__setattr__(
            self,
            "char_length",
            sum(1 for ch in self.surface if ch.isalpha() or ch.isdigit()),
        )


@dataclass(frozen=True)
class SentenceTokens:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def n_words(self) -> int:
        return sum(1 for t in self.tokens if t.is_word)


@dataclass(frozen=True)
class TokenizedCorpus:
    """Per-document sentence token streams, document order preserved."""

    name: str
    doc_ids: tuple[str, ...]
    doc_sentences: tuple[tuple[SentenceTokens, ...], ...]

    def __post_init__(self):
        if len(self.doc_ids) != len(self.doc_sentences):
            raise ValueError("doc_ids and doc_sentences length mismatch")

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def sentences(self) -> Iterator[SentenceTokens]:
        for sents in self.doc_sentences:
            yield from sents

    def tokens(self) -> Iterator[Token]:
        for sent in self.sentences():
            yield from sent.tokens

    def word_tokens(self) -> Iterator[Token]:
        return (t for t in self.tokens() if t.is_word)


def _is_decimal_point(text: str, i: int) -> bool:
    # "9.6" stays one number: a dot between digits does not end a sentence
    return (
        text[i] == "."
        and 0 < i < len(text) - 1
        and text[i - 1].isdigit()
        and text[i + 1].isdigit()
    )


def segment_sentences(text: str) -> list[str]:
    """Split text into raw sentence strings.

    A sentence ends after a run of '.', '!' or '?'; trailing text without
    a terminator forms a final sentence. Whitespace-only segments are
    dropped. There is no abbreviation list: a dot always terminates unless
    it sits between two digits.
    """
    sentences = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINATORS and not _is_decimal_point(text, i):
            while i + 1 < n and text[i + 1] in _TERMINATORS:
                i += 1
            segment = text[start : i + 1].strip()
            if segment:
                sentences.append(segment)
            start = i + 1
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _is_core_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit()


def tokenize_sentence(raw: str) -> SentenceTokens:
    """Tokenize one raw sentence.

    Whitespace-delimited chunks; leading and trailing punctuation is
    detached one character at a time; everything internal (hyphens,
    apostrophes, decimal points) stays part of the token.
    """
    tokens: list[Token] = []
    for chunk in raw.split():
        lo, hi = 0, len(chunk)
        while lo < hi and not _is_core_char(chunk[lo]):
            lo += 1
        while hi > lo and not _is_core_char(chunk[hi - 1]):
            hi -= 1
        tokens.extend(Token(ch) for ch in chunk[:lo])
        if lo < hi:
            tokens.append(Token(chunk[lo:hi]))
        tokens.extend(Token(ch) for ch in chunk[hi:])
    return SentenceTokens(tuple(tokens))


def tokenize_document(text: str) -> tuple[SentenceTokens, ...]:
    return tuple(tokenize_sentence(s) for s in segment_sentences(text))


def tokenize_corpus(corpus: Corpus) -> TokenizedCorpus:
    doc_ids = []
    doc_sentences = []
    for doc in corpus.documents:
        doc_ids.append(doc.id)
        doc_sentences.append(tokenize_document(doc.text))
    return TokenizedCorpus(
        name=corpus.name,
        doc_ids=tuple(doc_ids),
        doc_sentences=tuple(doc_sentences),
    )


def filter_stopwords(
    tokens: Iterable[Token],
    stops: StopwordSet | None,
    names: Iterable[str] = (),
) -> list[Token]:
    """Drop non-word tokens, stopwords, and protagonist names.

    Stopwords and names match case-insensitively; corpus tokens keep
    their case.
    """
    folded_names = {n.casefold() for n in names}
    kept = []
    for tok in tokens:
        if not tok.is_word:
            continue
        if stops is not None and tok.surface in stops:
            continue
        if tok.surface.casefold() in folded_names:
            continue
        kept.append(tok)
    return kept
