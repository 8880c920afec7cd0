"""Second-order semantic comparison between two embedding spaces.

Independently trained vector spaces cannot be compared vector-by-vector
(each space is arbitrary up to rotation), so the comparison is second
order: within each corpus, cosine similarities are computed for every
unordered pair of shared vocabulary words, and the two similarity profiles
are correlated. A pair-level bootstrap quantifies the stability of that
correlation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .corpus import StopwordSet
from .embed import EmbeddingModel, WordVectors, word_vector
from .freqcomp import pearson_r

Space = Union[EmbeddingModel, WordVectors]

_MAX_RETRIES_PER_REPLICATE = 100


@dataclass(frozen=True)
class SimilarityProfile:
    """Cosine similarities over the canonical pair list of one vector space.

    word_pairs holds all C(n,2) unordered pairs of the (lexicographically
    sorted) shared words, lexicographic within each pair and across pairs.
    sims is aligned with word_pairs, each value in [-1, 1].
    """

    word_pairs: Tuple[Tuple[str, str], ...]
    sims: np.ndarray
    model_id: str

    def __post_init__(self) -> None:
        if len(self.word_pairs) != len(self.sims):
            raise ValueError("sims and word_pairs must be aligned")
        if len(self.sims) and (
            np.min(self.sims) < -1.0 or np.max(self.sims) > 1.0
        ):
            raise ValueError("cosine similarities must lie in [-1, 1]")


@dataclass(frozen=True)
class BootstrapResult:
    """Pair-level bootstrap of the second-order correlation."""

    point_r: float
    replicate_rs: np.ndarray
    ci_low: float
    ci_high: float
    B: int
    seed: int
    n_retries: int

    def __post_init__(self) -> None:
        if len(self.replicate_rs) != self.B:
            raise ValueError("replicate count must equal B")


def _space_words(space: Space) -> Sequence[str]:
    if isinstance(space, EmbeddingModel):
        return space.vocab.words
    return space.words


def _space_count(space: Space, word: str) -> int:
    if isinstance(space, EmbeddingModel):
        return int(space.vocab.counts[space.vocab.index[word]])
    raise ValueError(
        "min_count > 1 requires trained models with counts; "
        "persisted vector files carry none"
    )


def _space_vector(space: Space, word: str) -> np.ndarray:
    if isinstance(space, EmbeddingModel):
        return word_vector(space, word)
    return space.vector(word)


def shared_vocabulary(
    a: Space,
    b: Space,
    stops: Optional[StopwordSet] = None,
    names: Iterable[str] = (),
    min_count: int = 1,
) -> List[str]:
    """Sorted case-sensitive vocabulary intersection, filtered.

    Stopwords and names are removed case-insensitively; min_count applies
    in both spaces (and needs trained models, not bare vector files).
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    name_folds = {n.casefold() for n in names}
    inter = set(_space_words(a)) & set(_space_words(b))
    kept = []
    for w in inter:
        if stops is not None and w in stops:
            continue
        if w.casefold() in name_folds:
            continue
        if min_count > 1 and (
            _space_count(a, w) < min_count or _space_count(b, w) < min_count
        ):
            continue
        kept.append(w)
    if not kept:
        raise ValueError("no shared vocabulary after filtering")
    return sorted(kept)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for a zero-norm vector")
    return float(np.dot(u, v) / (nu * nv))


def canonical_pairs(words: Sequence[str]) -> Tuple[Tuple[str, str], ...]:
    """All unordered pairs of the sorted word list, in canonical order."""
    if len(set(words)) != len(words):
        raise ValueError("duplicate word in shared vocabulary list")
    sw = sorted(words)
    out = []
    for i in range(len(sw)):
        for j in range(i + 1, len(sw)):
            out.append((sw[i], sw[j]))
    return tuple(out)


def similarity_profile(
    m: Space, words: Sequence[str], model_id: str = "model"
) -> SimilarityProfile:
    """Cosine similarity for every unordered pair of `words` in one space.

    Pairs follow the canonical order of canonical_pairs. Construction is
    vectorized over the whole pair set (one normalized Gram matrix), which
    keeps results deterministic regardless of scheduling.
    """
    if len(words) < 2:
        raise ValueError("need at least 2 words for a similarity profile")
    pairs = canonical_pairs(words)
    sw = sorted(words)
    mat = np.stack([np.asarray(_space_vector(m, w), dtype=np.float64) for w in sw])
    norms = np.linalg.norm(mat, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if len(zero):
        raise ValueError(f"zero vector for word {sw[int(zero[0])]!r} in {model_id}")
    mat /= norms[:, None]
    gram = mat @ mat.T
    iu, ju = np.triu_indices(len(sw), k=1)
    sims = np.clip(gram[iu, ju], -1.0, 1.0)
    return SimilarityProfile(word_pairs=pairs, sims=sims, model_id=model_id)


def second_order_r(pa: SimilarityProfile, pb: SimilarityProfile) -> float:
    """Pearson correlation of two aligned similarity profiles."""
    if pa.word_pairs != pb.word_pairs:
        raise ValueError("profiles are over different word-pair lists")
    return pearson_r(pa.sims, pb.sims)


def _one_replicate(
    x: np.ndarray, y: np.ndarray, seed: int, i: int
) -> Tuple[float, int]:
    """Replicate i: resample pair indices with replacement, recompute r.

    Zero-variance resamples are redrawn from the replicate's own generator,
    so serial and parallel schedules produce identical results.
    """
    rng = np.random.default_rng(seed + i)
    n = len(x)
    for attempt in range(_MAX_RETRIES_PER_REPLICATE + 1):
        idx = rng.integers(0, n, size=n)
        xs = x[idx]
        ys = y[idx]
        if np.ptp(xs) > 0.0 and np.ptp(ys) > 0.0:
            return pearson_r(xs, ys), attempt
    raise RuntimeError(
        f"bootstrap replicate {i} degenerate after {_MAX_RETRIES_PER_REPLICATE} retries"
    )


def bootstrap_r(
    pa: SimilarityProfile,
    pb: SimilarityProfile,
    B: int = 1000,
    seed: int = 0,
    parallel: bool = False,
) -> BootstrapResult:
    """Pair-level bootstrap of second_order_r.

    Each replicate draws its own generator from seed + replicate index, so
    the replicate vector is reproducible and identical whether computed
    serially or on a thread pool.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    point = second_order_r(pa, pb)
    x = np.asarray(pa.sims, dtype=np.float64)
    y = np.asarray(pb.sims, dtype=np.float64)

    if parallel:
        with ThreadPoolExecutor() as ex:
            outcomes = list(ex.map(lambda i: _one_replicate(x, y, seed, i), range(B)))
    else:
        outcomes = [_one_replicate(x, y, seed, i) for i in range(B)]

    reps = np.array([r for r, _ in outcomes], dtype=np.float64)
    retries = sum(k for _, k in outcomes)
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return BootstrapResult(
        point_r=point,
        replicate_rs=reps,
        ci_low=float(lo),
        ci_high=float(hi),
        B=B,
        seed=seed,
        n_retries=retries,
    )


def write_profile_tsv(pa: SimilarityProfile, pb: SimilarityProfile, path) -> None:
    """Export aligned profiles as TSV (word1, word2, sim_a, sim_b)."""
    if pa.word_pairs != pb.word_pairs:
        raise ValueError("profiles are over different word-pair lists")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("word1\tword2\tsim_a\tsim_b\n")
        for (w1, w2), sa, sb in zip(pa.word_pairs, pa.sims, pb.sims):
            fh.write(f"{w1}\t{w2}\t{float(sa)!r}\t{float(sb)!r}\n")
