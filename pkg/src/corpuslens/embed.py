"""Subword skip-gram embeddings with negative sampling, trained from scratch.

The model follows the fastText recipe: every vocabulary word owns one input
row, and additionally pulls in hashed character-n-gram rows from a shared
bucket table, so that out-of-vocabulary words (misspellings included) still
receive vectors. Training is plain skip-gram with negative sampling over the
word tokens of a tokenized corpus.

Determinism contract: a fixed seed in single-threaded mode reproduces the
model bit for bit. All randomness flows through one numpy Generator in a
fixed call order: (1) input-matrix init, (2) per position one window draw,
(3) per (center, context) pair one batch of negative draws plus redraws for
collisions with the context index. Sentences are visited in corpus order
every epoch, without shuffling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import expit

from .tokenization import TokenizedCorpus

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193


class TrainingDivergedError(RuntimeError):
    """Raised when training produces non-finite losses or vectors."""


@dataclass(frozen=True)
class EmbedParams:
    """Hyperparameters for subword skip-gram training.

    Defaults are the published defaults of the embedding method, except
    min_count=1 because the target corpora are small.
    """

    dim: int = 100
    window: int = 5
    epochs: int = 5
    negatives: int = 5
    lr0: float = 0.05
    min_count: int = 1
    nmin: int = 3
    nmax: int = 6
    buckets: int = 2_000_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.negatives < 0:
            raise ValueError("negatives must be >= 0")
        if not (self.lr0 > 0):
            raise ValueError("lr0 must be > 0")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.nmin < 1:
            raise ValueError("nmin must be >= 1")
        if self.nmin > self.nmax:
            raise ValueError("nmin must be <= nmax")
        if self.buckets < 1:
            raise ValueError("buckets must be >= 1")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")


@dataclass(frozen=True)
class Vocab:
    """Dense word-to-index map with per-word counts.

    Index order: count descending, ties broken lexicographically. `total`
    is the number of retained word tokens (sum of counts).
    """

    index: Dict[str, int]
    words: Tuple[str, ...]
    counts: np.ndarray  # int64, len V
    total: int

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index


@dataclass
class EmbeddingModel:
    """Trained embedding state.

    input_vectors has V + buckets rows (vocab rows first, then the n-gram
    bucket table); output_vectors has V rows. Arrays are made read-only
    once training finishes.
    """

    params: EmbedParams
    vocab: Vocab
    input_vectors: np.ndarray  # (V + buckets, dim) float32
    output_vectors: np.ndarray  # (V, dim) float32


def build_vocab(tc: TokenizedCorpus, min_count: int = 1) -> Vocab:
    """Count case-sensitive word types and keep those with count >= min_count."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: Dict[str, int] = {}
    for tok in tc.word_tokens():
        counts[tok.surface] = counts.get(tok.surface, 0) + 1
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    if not kept:
        raise ValueError(
            f"empty vocabulary for corpus {tc.name!r} after min_count={min_count} filtering"
        )
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    words = tuple(w for w, _ in kept)
    arr = np.array([c for _, c in kept], dtype=np.int64)
    return Vocab(
        index={w: i for i, w in enumerate(words)},
        words=words,
        counts=arr,
        total=int(arr.sum()),
    )


def subword_ngrams(word: str, nmin: int, nmax: int) -> List[str]:
    """Character n-grams of the boundary-wrapped word, length-major order.

    The word is wrapped as "<word>"; for each length nmin..nmax all n-grams
    of the wrapped form are emitted left to right. Characters are Unicode
    scalars, not bytes. Repeated n-grams are kept (multiplicity matters for
    vector composition).
    """
    if not word:
        raise ValueError("word must be non-empty")
    if nmin < 1 or nmin > nmax:
        raise ValueError("require 1 <= nmin <= nmax")
    wrapped = f"<{word}>"
    grams: List[str] = []
    for n in range(nmin, nmax + 1):
        for i in range(len(wrapped) - n + 1):
            grams.append(wrapped[i : i + n])
    return grams


def fnv1a_32(data: bytes) -> int:
    """FNV-1a 32-bit hash."""
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFF
    return h


def ngram_bucket(ngram: str, buckets: int) -> int:
    """Stable bucket index: FNV-1a 32-bit over UTF-8 bytes, mod buckets."""
    if buckets < 1:
        raise ValueError("buckets must be >= 1")
    return fnv1a_32(ngram.encode("utf-8")) % buckets


def _sgns_grads(
    u: np.ndarray, vouts: np.ndarray
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Loss and gradients for one skip-gram/negative-sampling example.

    vouts stacks the context output vector (row 0) and the negative output
    vectors (rows 1..). Loss is -ln s(u.v) - sum_neg ln s(-u.v_neg) with s
    the logistic sigmoid, evaluated stably via logaddexp. Returns
    (loss, dL/du, dL/dvouts).
    """
    dots = vouts @ u
    loss = float(np.logaddexp(0.0, -dots[0]) + np.logaddexp(0.0, dots[1:]).sum())
    g = expit(dots)
    g[0] -= 1.0
    gu = g @ vouts
    gouts = np.outer(g, u)
    return loss, gu, gouts


def sgns_step(
    u: np.ndarray, v: np.ndarray, v_negs: np.ndarray, lr: float
) -> float:
    """One in-place gradient-descent step on (u, v, v_negs); returns pre-update loss.

    v_negs is a (k, dim) array, possibly empty. lr=0 evaluates the loss
    without touching the vectors.
    """
    if lr < 0:
        raise ValueError("lr must be >= 0")
    v_negs = np.atleast_2d(v_negs) if v_negs.size else v_negs.reshape(0, u.shape[0])
    vouts = np.concatenate([v.reshape(1, -1), v_negs], axis=0)
    loss, gu, gouts = _sgns_grads(u, vouts)
    if not math.isfinite(loss):
        raise TrainingDivergedError("non-finite loss in sgns_step")
    if lr > 0:
        u -= lr * gu
        v -= lr * gouts[0]
        if len(v_negs):
            v_negs -= lr * gouts[1:]
    return loss


def _negative_table(counts: np.ndarray) -> np.ndarray:
    """Cumulative unigram^(3/4) weights for inverse-CDF negative sampling."""
    w = counts.astype(np.float64) ** 0.75
    return np.cumsum(w)


def _draw_negatives(
    rng: np.random.Generator, cum: np.ndarray, k: int, ctx: int, vsize: int
) -> np.ndarray:
    """Draw k negatives from the cumulative table, redrawing collisions with ctx.

    With a single-word vocabulary exclusion is impossible, so collisions are
    kept in that degenerate case.
    """
    if k == 0:
        return np.empty(0, dtype=np.int64)
    r = rng.random(k) * cum[-1]
    neg = np.searchsorted(cum, r, side="right").astype(np.int64)
    if vsize > 1:
        bad = neg == ctx
        while bad.any():
            r = rng.random(int(bad.sum())) * cum[-1]
            neg[bad] = np.searchsorted(cum, r, side="right")
            bad = neg == ctx
    return neg


def _ngram_rows(word: str, idx: int, vsize: int, params: EmbedParams) -> np.ndarray:
    """Input-matrix row indices composing a vocab word: own row plus bucket rows."""
    rows = [idx]
    for g in subword_ngrams(word, params.nmin, params.nmax):
        rows.append(vsize + ngram_bucket(g, params.buckets))
    return np.array(rows, dtype=np.int64)


def _init_input(rng: np.random.Generator, n_rows: int, dim: int) -> np.ndarray:
    # uniform [-1/dim, 1/dim], drawn float32 to keep big bucket tables cheap
    arr = rng.random((n_rows, dim), dtype=np.float32)
    arr *= np.float32(2.0 / dim)
    arr -= np.float32(1.0 / dim)
    return arr


def train_skipgram(
    tc: TokenizedCorpus, params: EmbedParams, n_workers: int = 1
) -> EmbeddingModel:
    """Train a subword skip-gram model on the corpus's word tokens.

    For every word position a window size is drawn uniformly in
    [1, window]; each in-window (center, context) pair gets `negatives`
    negatives from the unigram^(3/4) table; the gradient w.r.t. the composed
    center vector is applied in full to the word's own row and each of its
    n-gram bucket rows. The learning rate decays linearly with processed
    positions from lr0 towards 0.

    n_workers > 1 enables lock-free parallel updates over sentence shards.
    That mode trades the determinism contract away: concurrent unsynchronized
    writes are permitted and results vary between runs. Keep the default for
    reproducible models.
    """
    if n_workers < 1:
        raise ValueError("n_workers must be >= 1")
    vocab = build_vocab(tc, params.min_count)
    vsize = len(vocab)

    sents: List[np.ndarray] = []
    for sent in tc.sentences():
        ids = [
            vocab.index[t.surface]
            for t in sent.tokens
            if t.is_word and t.surface in vocab.index
        ]
        if ids:
            sents.append(np.array(ids, dtype=np.int64))
    total_positions = sum(len(s) for s in sents) * params.epochs
    if total_positions == 0:
        raise ValueError("no trainable word tokens after vocabulary filtering")

    rng = np.random.default_rng(params.seed)
    inp = _init_input(rng, vsize + params.buckets, params.dim)
    out = np.zeros((vsize, params.dim), dtype=np.float32)
    cum = _negative_table(vocab.counts)
    row_cache = [
        _ngram_rows(w, i, vsize, params) for i, w in enumerate(vocab.words)
    ]

    def run(sent_list: Sequence[np.ndarray], gen: np.random.Generator,
            counter: List[int]) -> None:
        k = params.negatives
        for _epoch in range(params.epochs):
            for sent in sent_list:
                n = len(sent)
                for i in range(n):
                    lr = params.lr0 * (1.0 - counter[0] / total_positions)
                    counter[0] += 1
                    b = int(gen.integers(1, params.window + 1))
                    center = int(sent[i])
                    rows = row_cache[center]
                    lo = 0 if i - b < 0 else i - b
                    hi = n if i + b + 1 > n else i + b + 1
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        ctx = int(sent[j])
                        negs = _draw_negatives(gen, cum, k, ctx, vsize)
                        all_idx = np.empty(k + 1, dtype=np.int64)
                        all_idx[0] = ctx
                        all_idx[1:] = negs
                        u = inp[rows].mean(axis=0)
                        loss, gu, gouts = _sgns_grads(u, out[all_idx])
                        if not math.isfinite(loss):
                            raise TrainingDivergedError(
                                f"non-finite loss while training {tc.name!r}"
                            )
                        np.add.at(out, all_idx, (-lr) * gouts)
                        np.add.at(inp, rows, (-lr) * gu)

    counter = [0]
    if n_workers == 1:
        run(sents, rng, counter)
    else:
        import threading

        shards = [sents[w::n_workers] for w in range(n_workers)]
        threads = [
            threading.Thread(
                target=run,
                args=(shard, np.random.default_rng(params.seed + 1 + w), counter),
            )
            for w, shard in enumerate(shards)
            if shard
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    if not np.isfinite(out).all() or not np.isfinite(inp).all():
        raise TrainingDivergedError(f"non-finite vectors after training {tc.name!r}")
    inp.flags.writeable = False
    out.flags.writeable = False
    return EmbeddingModel(params=params, vocab=vocab, input_vectors=inp,
                          output_vectors=out)


def word_vector(m: EmbeddingModel, word: str) -> np.ndarray:
    """Composed vector: mean of own row (if in vocab) and n-gram bucket rows.

    Out-of-vocabulary words use bucket rows alone; a word producing no rows
    at all (shorter than nmin after wrapping, not in vocab) gets zeros.
    """
    if not word:
        raise ValueError("word must be non-empty")
    p = m.params
    vsize = len(m.vocab)
    rows: List[int] = []
    own = m.vocab.index.get(word)
    if own is not None:
        rows.append(own)
    if len(word) + 2 >= p.nmin:
        for g in subword_ngrams(word, p.nmin, p.nmax):
            rows.append(vsize + ngram_bucket(g, p.buckets))
    if not rows:
        return np.zeros(p.dim, dtype=np.float32)
    return m.input_vectors[np.array(rows, dtype=np.int64)].mean(axis=0)


@dataclass(frozen=True)
class WordVectors:
    """Persisted composed word vectors, as written by save_vectors."""

    words: Tuple[str, ...]
    vectors: np.ndarray  # (V, dim) float64
    index: Dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            object.__setattr__(
                self, "index", {w: i for i, w in enumerate(self.words)}
            )

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.index[word]]


def save_vectors(m: EmbeddingModel, path) -> None:
    """Write composed vectors for every vocab word: header "V dim", then rows."""
    dim = m.params.dim
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(m.vocab)} {dim}\n")
        for w in m.vocab.words:
            vec = word_vector(m, w)
            fh.write(w + " " + " ".join(f"{x:.8e}" for x in vec) + "\n")


def load_vectors(path) -> WordVectors:
    """Read a vector file written by save_vectors."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header {header!r}")
        try:
            n, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ValueError(f"{path}: malformed header {header!r}") from exc
        if n < 1 or dim < 1:
            raise ValueError(f"{path}: header must declare positive counts, got {n} {dim}")
        words: List[str] = []
        mat = np.empty((n, dim), dtype=np.float64)
        for k in range(n):
            line = fh.readline()
            if not line:
                raise ValueError(f"{path}: expected {n} rows, found {k}")
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ValueError(
                    f"{path}: row {k + 1} has {len(parts) - 1} values, expected {dim}"
                )
            words.append(parts[0])
            try:
                mat[k] = [float(x) for x in parts[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}: row {k + 1} has a non-numeric value") from exc
        if fh.readline():
            raise ValueError(f"{path}: more rows than the header declares ({n})")
    if len(set(words)) != len(words):
        raise ValueError(f"{path}: duplicate words in vector file")
    return WordVectors(words=tuple(words), vectors=mat)
