#!/usr/bin/env python3
"""Pre-registered oracle runs that fix the derived test thresholds.

Two derived quantities in the test suite need empirically fixed thresholds;
this script performs the exact computations the tests mirror and prints the
observed values:

1. twin-corpus second-order correlation: embeddings trained (different
   seeds) on tests/data/twin_a.jsonl and twin_b.jsonl, which were drawn
   from one generator; the frozen test threshold sits safely below the
   value printed here.

2. identical-context cosine: tokens "aaa" and "bbb" (no shared character
   n-grams) placed in identical context distributions over 1,000 sentences;
   the frozen test asserts cosine > 0.7, and this run documents the margin.

Run after regenerating the synthetic corpora. The thresholds frozen into
tests/test_acceptance.py and tests/test_embed.py record these outcomes.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from corpuslens.corpus import Corpus, Document, default_stopwords, load_corpus
from corpuslens.embed import EmbedParams, train_skipgram, word_vector
from corpuslens.semsim import (
    cosine,
    second_order_r,
    shared_vocabulary,
    similarity_profile,
)
from corpuslens.tokenization import tokenize_corpus

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"

TWIN_PARAMS = dict(
    dim=24, window=3, epochs=3, negatives=4, lr0=0.05,
    min_count=2, nmin=3, nmax=5, buckets=4096,
)


def twin_r() -> float:
    tc_a = tokenize_corpus(load_corpus(DATA / "twin_a.jsonl"))
    tc_b = tokenize_corpus(load_corpus(DATA / "twin_b.jsonl"))
    model_a = train_skipgram(tc_a, EmbedParams(**TWIN_PARAMS, seed=1))
    model_b = train_skipgram(tc_b, EmbedParams(**TWIN_PARAMS, seed=2))
    stops = default_stopwords()
    shared = shared_vocabulary(model_a, model_b, stops, ("Dodo", "Lars", "Lea"))
    pa = similarity_profile(model_a, shared, "twin_a")
    pb = similarity_profile(model_b, shared, "twin_b")
    print(f"twin shared vocabulary: {len(shared)} words")
    return second_order_r(pa, pb)


def identical_context_corpus(n_sentences: int = 1000) -> Corpus:
    ctx = ["links", "rechts", "oben", "unten"]
    rng = np.random.default_rng(99)
    docs = []
    for k in range(n_sentences):
        center = "aaa" if k % 2 == 0 else "bbb"
        left = ctx[int(rng.integers(0, 4))]
        right = ctx[int(rng.integers(0, 4))]
        docs.append(
            Document(
                id=f"s{k:04d}", story_id="ctx", source="other",
                text=f"{left} {center} {right}.",
            )
        )
    return Corpus(name="identical-context", documents=tuple(docs))


def identical_context_cosine() -> float:
    tc = tokenize_corpus(identical_context_corpus())
    params = EmbedParams(
        dim=24, window=2, epochs=8, negatives=4, lr0=0.05,
        min_count=1, nmin=3, nmax=4, buckets=2048, seed=5,
    )
    m = train_skipgram(tc, params)
    return cosine(word_vector(m, "aaa"), word_vector(m, "bbb"))


def main() -> None:
    r = twin_r()
    print(f"twin second_order_r = {r:.4f}")
    c = identical_context_cosine()
    print(f"identical-context cosine(aaa, bbb) = {c:.4f}")


if __name__ == "__main__":
    main()
