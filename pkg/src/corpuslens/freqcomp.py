"""Word-frequency tables and log-smoothed Pearson correlations.

Counts are add-one smoothed before the log transform (ln(count + 1),
with count 0 for words absent from a corpus), so no logarithm of zero
ever occurs. The correlation is invariant to the logarithm base, since a
base change is a positive affine map.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .corpus import StopwordSet
from .tokenization import TokenizedCorpus, filter_stopwords

FILTER_MODES = ("words_only", "content_only")


@dataclass(frozen=True)
class FreqTable:
    source: str
    counts: dict[str, int]
    total: int


@dataclass(frozen=True)
class FreqComparison:
    r_all: float
    r_shared: float
    r_no_function_words: float
    n_pairs_all: int
    n_pairs_shared: int
    n_pairs_no_function_words: int


def frequency_table(
    tc: TokenizedCorpus,
    mode: str = "words_only",
    stops: StopwordSet | None = None,
    names: Iterable[str] = (),
) -> FreqTable:
    """Case-sensitive word counts; content_only drops stopwords and names."""
    if mode not in FILTER_MODES:
        raise ValueError(f"unknown filter mode {mode!r}")
    counts = Counter()
    for sent in tc.sentences():
        if mode == "content_only":
            kept = filter_stopwords(sent.tokens, stops, names)
        else:
            kept = [t for t in sent.tokens if t.is_word]
        counts.update(t.surface for t in kept)
    if not counts:
        raise ValueError(f"no words left in corpus {tc.name!r} under {mode}")
    return FreqTable(source=tc.name, counts=dict(counts), total=sum(counts.values()))


def log_smoothed_vectors(
    a: FreqTable, b: FreqTable, vocab_mode: str = "union"
) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Aligned ln(count + 1) vectors over the union or shared vocabulary.

    Words absent from one corpus enter with count 0, so their smoothed
    log frequency is exactly 0.
    """
    if vocab_mode == "union":
        vocab = sorted(a.counts.keys() | b.counts.keys())
    elif vocab_mode == "shared":
        vocab = sorted(a.counts.keys() & b.counts.keys())
        if not vocab:
            raise ValueError("shared vocabulary is empty")
    else:
        raise ValueError(f"unknown vocab mode {vocab_mode!r}")
    x = np.log([a.counts.get(w, 0) + 1 for w in vocab], dtype=float)
    y = np.log([b.counts.get(w, 0) + 1 for w in vocab], dtype=float)
    return vocab, x, y


def pearson_r(x: np.ndarray, y: np.ndarray) -> float:
    """Pearson product-moment correlation of two equal-length vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-d vectors of equal length")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt((dx * dx).sum())
    sy = np.sqrt((dy * dy).sum())
    if sx == 0.0 or sy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    if np.array_equal(x, y):
        # self-correlation is 1 by definition; skip the rounding error
        return 1.0
    return float((dx * dy).sum() / (sx * sy))


def compare_frequencies(
    a: TokenizedCorpus,
    b: TokenizedCorpus,
    stops: StopwordSet | None = None,
    names: Iterable[str] = (),
) -> FreqComparison:
    """The three published correlation variants for a corpus pair.

    r_all: union vocabulary over all words. r_shared: intersection only.
    r_no_function_words: union vocabulary after removing stopwords and
    protagonist names.
    """
    words_a = frequency_table(a, "words_only")
    words_b = frequency_table(b, "words_only")
    content_a = frequency_table(a, "content_only", stops, names)
    content_b = frequency_table(b, "content_only", stops, names)

    _, x_all, y_all = log_smoothed_vectors(words_a, words_b, "union")
    _, x_sh, y_sh = log_smoothed_vectors(words_a, words_b, "shared")
    _, x_nf, y_nf = log_smoothed_vectors(content_a, content_b, "union")

    return FreqComparison(
        r_all=pearson_r(x_all, y_all),
        r_shared=pearson_r(x_sh, y_sh),
        r_no_function_words=pearson_r(x_nf, y_nf),
        n_pairs_all=x_all.size,
        n_pairs_shared=x_sh.size,
        n_pairs_no_function_words=x_nf.size,
    )


def scatter_rows(
    a: FreqTable, b: FreqTable, vocab_mode: str = "union"
) -> list[tuple[str, float, float]]:
    """Per-word (word, log_a, log_b) rows for external scatter plotting."""
    vocab, x, y = log_smoothed_vectors(a, b, vocab_mode)
    return [(w, float(xi), float(yi)) for w, xi, yi in zip(vocab, x, y)]


def write_scatter_tsv(
    rows: list[tuple[str, float, float]], path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("word\tlog_a\tlog_b\n")
        for word, la, lb in rows:
            fh.write(f"{word}\t{la!r}\t{lb!r}\n")
