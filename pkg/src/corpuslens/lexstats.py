"""Word-level descriptive statistics.

Counts, Herdan's log type-token ratio, word/sentence length
distributions, and ranked top-word tables. Token totals include
punctuation tokens; types and length statistics are computed over word
tokens only.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .corpus import StopwordSet
from .tokenization import Token, TokenizedCorpus, filter_stopwords


@dataclass(frozen=True)
class CorpusCounts:
    n_texts: int
    n_tokens: int
    n_types: int
    avg_tokens_per_text: float
    log_ttr: float


@dataclass(frozen=True)
class LengthDistribution:
    histogram: dict[int, int]
    median: float
    outlier_threshold: int  # 0 disables outlier exclusion
    n_outliers_excluded: int


@dataclass(frozen=True)
class SharedTypeStats:
    n_shared: int
    n_union: int
    n_types_a: int
    n_types_b: int
    pct_shared: float  # of the union
    pct_of_a: float
    pct_of_b: float


def herdan_log_ttr(n_types: int, n_tokens: int) -> float:
    """Herdan's lexical richness index ln(types)/ln(tokens).

    Base-independent: any common logarithm base gives the same ratio.
    """
    if n_tokens < 2:
        raise ValueError("log-TTR undefined for fewer than 2 tokens")
    if not 1 <= n_types <= n_tokens:
        raise ValueError("need 1 <= n_types <= n_tokens")
    return math.log(n_types) / math.log(n_tokens)


def corpus_counts(tc: TokenizedCorpus) -> CorpusCounts:
    """Token/type totals and log-TTR for one corpus.

    Tokens are counted including punctuation; types are distinct
    case-sensitive word surfaces.
    """
    if tc.n_docs == 0:
        raise ValueError("empty corpus")
    n_tokens = 0
    types = set()
    for tok in tc.tokens():
        n_tokens += 1
        if tok.is_word:
            types.add(tok.surface)
    if n_tokens < 2:
        raise ValueError("corpus has fewer than 2 tokens")
    if not types:
        raise ValueError("corpus has no word tokens")
    return CorpusCounts(
        n_texts=tc.n_docs,
        n_tokens=n_tokens,
        n_types=len(types),
        avg_tokens_per_text=n_tokens / tc.n_docs,
        log_ttr=herdan_log_ttr(len(types), n_tokens),
    )


def length_distributions(
    tc: TokenizedCorpus, sentence_outlier_cap: int = 100
) -> tuple[LengthDistribution, LengthDistribution]:
    """Word-length (letters) and sentence-length (words) distributions.

    Sentences longer than the cap are excluded from the histogram, as in
    the source plots, but still count toward the median.
    """
    if tc.n_docs == 0:
        raise ValueError("empty corpus")
    word_lengths = [t.char_length for t in tc.word_tokens()]
    sent_lengths = [s.n_words for s in tc.sentences()]
    if not word_lengths:
        raise ValueError("corpus has no word tokens")

    word_dist = LengthDistribution(
        histogram=dict(sorted(Counter(word_lengths).items())),
        median=float(statistics.median(word_lengths)),
        outlier_threshold=0,
        n_outliers_excluded=0,
    )
    kept = [n for n in sent_lengths if n <= sentence_outlier_cap]
    sent_dist = LengthDistribution(
        histogram=dict(sorted(Counter(kept).items())),
        median=float(statistics.median(sent_lengths)),
        outlier_threshold=sentence_outlier_cap,
        n_outliers_excluded=len(sent_lengths) - len(kept),
    )
    return word_dist, sent_dist


def _filtered_word_counts(
    tc: TokenizedCorpus,
    stops: StopwordSet | None,
    names: Iterable[str],
    min_chars: int = 0,
) -> Counter:
    counts = Counter()
    for sent in tc.sentences():
        for tok in filter_stopwords(sent.tokens, stops, names):
            if tok.char_length >= min_chars:
                counts[tok.surface] += 1
    return counts


def top_words(
    tc: TokenizedCorpus,
    n: int,
    min_chars: int = 0,
    stops: StopwordSet | None = None,
    names: Iterable[str] = (),
) -> list[tuple[str, int]]:
    """The n most frequent filtered words, ties broken lexicographically."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = _filtered_word_counts(tc, stops, names, min_chars)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


def shared_top_words(
    a: TokenizedCorpus,
    b: TokenizedCorpus,
    n: int,
    min_chars: int = 0,
    stops: StopwordSet | None = None,
    names: Iterable[str] = (),
) -> list[tuple[str, int, int, int]]:
    """Most frequent words present in both corpora, ranked by total count."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts_a = _filtered_word_counts(a, stops, names, min_chars)
    counts_b = _filtered_word_counts(b, stops, names, min_chars)
    shared = counts_a.keys() & counts_b.keys()
    rows = [(w, counts_a[w], counts_b[w], counts_a[w] + counts_b[w]) for w in shared]
    rows.sort(key=lambda r: (-r[3], r[0]))
    return rows[:n]


def shared_type_stats(
    a: TokenizedCorpus,
    b: TokenizedCorpus,
    stops: StopwordSet | None = None,
    names: Iterable[str] = (),
) -> SharedTypeStats:
    """Type overlap between two corpora.

    pct_shared uses the union of both type sets as denominator; the
    per-corpus percentages are also reported since the published figure
    does not name its denominator.
    """
    types_a = set(_filtered_word_counts(a, stops, names))
    types_b = set(_filtered_word_counts(b, stops, names))
    if not types_a or not types_b:
        raise ValueError("both corpora must contain word types")
    shared = types_a & types_b
    union = types_a | types_b
    return SharedTypeStats(
        n_shared=len(shared),
        n_union=len(union),
        n_types_a=len(types_a),
        n_types_b=len(types_b),
        pct_shared=100.0 * len(shared) / len(union),
        pct_of_a=100.0 * len(shared) / len(types_a),
        pct_of_b=100.0 * len(shared) / len(types_b),
    )
