"""Second-order similarity: canonical pairs, profiles, orthogonal invariance,
and the pair-level bootstrap."""

import itertools

import numpy as np
import pytest

from corpuslens.corpus import StopwordSet
from corpuslens.embed import EmbedParams, WordVectors, train_skipgram
from corpuslens.semsim import (
    BootstrapResult,
    bootstrap_r,
    canonical_pairs,
    cosine,
    second_order_r,
    shared_vocabulary,
    similarity_profile,
    write_profile_tsv,
)

from conftest import tokenized

WORDS = ("Ball", "Baum", "Haus", "Hund", "Katze", "Kind", "Sonne", "Tag")


def random_space(seed, words=WORDS, dim=12):
    rng = np.random.default_rng(seed)
    return WordVectors(words=tuple(words), vectors=rng.normal(size=(len(words), dim)))


# --- canonical pair order ----------------------------------------------------

def test_canonical_pairs_match_combinations_of_sorted():
    words = ["Hund", "Ball", "Katze"]
    assert canonical_pairs(words) == tuple(itertools.combinations(sorted(words), 2))


def test_canonical_pairs_independent_of_input_order():
    a = canonical_pairs(["x", "b", "m"])
    b = canonical_pairs(["m", "x", "b"])
    assert a == b == (("b", "m"), ("b", "x"), ("m", "x"))


def test_canonical_pairs_reject_duplicates():
    with pytest.raises(ValueError, match="duplicate"):
        canonical_pairs(["a", "b", "a"])


# --- similarity profiles -----------------------------------------------------

def test_profile_values_match_pairwise_cosine():
    wv = random_space(1)
    prof = similarity_profile(wv, WORDS, "wv")
    for (w1, w2), sim in zip(prof.word_pairs, prof.sims):
        assert sim == pytest.approx(cosine(wv.vector(w1), wv.vector(w2)), abs=1e-12)
    assert np.all(prof.sims >= -1.0) and np.all(prof.sims <= 1.0)


def test_profile_is_order_invariant():
    wv = random_space(2)
    shuffled = list(WORDS)
    np.random.default_rng(0).shuffle(shuffled)
    p1 = similarity_profile(wv, WORDS)
    p2 = similarity_profile(wv, shuffled)
    assert p1.word_pairs == p2.word_pairs
    assert np.array_equal(p1.sims, p2.sims)


def test_profile_rejects_zero_vector():
    vecs = np.ones((3, 4))
    vecs[1] = 0.0
    wv = WordVectors(words=("a", "b", "c"), vectors=vecs)
    with pytest.raises(ValueError, match="'b'"):
        similarity_profile(wv, ["a", "b", "c"])


def test_profile_needs_two_words():
    with pytest.raises(ValueError):
        similarity_profile(random_space(0), ["Ball"])


def test_identical_space_gives_r_exactly_one():
    wv = random_space(3)
    pa = similarity_profile(wv, WORDS, "a")
    pb = similarity_profile(wv, WORDS, "b")
    assert second_order_r(pa, pb) == 1.0


def test_second_order_r_rejects_mismatched_pairs():
    pa = similarity_profile(random_space(1), WORDS[:4])
    pb = similarity_profile(random_space(1), WORDS[2:6])
    with pytest.raises(ValueError, match="pair"):
        second_order_r(pa, pb)


def test_orthogonal_transform_leaves_profile_unchanged():
    wv = random_space(4)
    q, _ = np.linalg.qr(np.random.default_rng(5).normal(size=(12, 12)))
    rotated = WordVectors(words=wv.words, vectors=wv.vectors @ q)
    p1 = similarity_profile(wv, WORDS)
    p2 = similarity_profile(rotated, WORDS)
    assert np.allclose(p1.sims, p2.sims, atol=1e-6)
    assert second_order_r(p1, p2) == pytest.approx(1.0, abs=1e-9)


# --- shared vocabulary -------------------------------------------------------

def test_shared_vocabulary_sorted_intersection_with_filters():
    a = WordVectors(words=("der", "Hund", "Lars", "Ball", "Zelt"),
                    vectors=np.ones((5, 3)))
    b = WordVectors(words=("Hund", "Ball", "der", "Lars", "Haus"),
                    vectors=np.ones((5, 3)))
    stops = StopwordSet(["der"])
    got = shared_vocabulary(a, b, stops, names=("lars",))
    assert got == ["Ball", "Hund"]


def test_shared_vocabulary_min_count_needs_models():
    a = random_space(1)
    b = random_space(2)
    with pytest.raises(ValueError, match="min_count"):
        shared_vocabulary(a, b, min_count=2)


def test_shared_vocabulary_min_count_on_models():
    ta = tokenized(["Hund Hund Katze Ball."], name="a")
    tb = tokenized(["Hund Hund Katze Katze Ball Ball."], name="b")
    params = EmbedParams(dim=8, window=2, epochs=1, negatives=2,
                         min_count=1, nmin=3, nmax=4, buckets=64, seed=0)
    ma = train_skipgram(ta, params)
    mb = train_skipgram(tb, params)
    assert shared_vocabulary(ma, mb) == ["Ball", "Hund", "Katze"]
    assert shared_vocabulary(ma, mb, min_count=2) == ["Hund"]


def test_shared_vocabulary_empty_after_filter_raises():
    a = WordVectors(words=("der",), vectors=np.ones((1, 3)))
    b = WordVectors(words=("der",), vectors=np.ones((1, 3)))
    with pytest.raises(ValueError, match="no shared vocabulary"):
        shared_vocabulary(a, b, StopwordSet(["der"]))


# --- bootstrap ---------------------------------------------------------------

def two_profiles(seed_a=10, seed_b=11):
    pa = similarity_profile(random_space(seed_a), WORDS, "a")
    pb = similarity_profile(random_space(seed_b), WORDS, "b")
    return pa, pb


def test_bootstrap_deterministic_given_seed():
    pa, pb = two_profiles()
    r1 = bootstrap_r(pa, pb, B=100, seed=7)
    r2 = bootstrap_r(pa, pb, B=100, seed=7)
    assert np.array_equal(r1.replicate_rs, r2.replicate_rs)
    assert (r1.ci_low, r1.ci_high) == (r2.ci_low, r2.ci_high)


def test_bootstrap_parallel_equals_serial():
    pa, pb = two_profiles()
    serial = bootstrap_r(pa, pb, B=64, seed=3, parallel=False)
    parallel = bootstrap_r(pa, pb, B=64, seed=3, parallel=True)
    assert np.array_equal(serial.replicate_rs, parallel.replicate_rs)
    assert serial.ci_low == parallel.ci_low
    assert serial.ci_high == parallel.ci_high
    assert serial.n_retries == parallel.n_retries


def test_bootstrap_identity_ci_collapses_to_one():
    wv = random_space(12)
    pa = similarity_profile(wv, WORDS, "a")
    pb = similarity_profile(wv, WORDS, "b")
    res = bootstrap_r(pa, pb, B=100, seed=0)
    assert res.point_r == 1.0
    assert res.ci_low == pytest.approx(1.0, abs=1e-12)
    assert res.ci_high == pytest.approx(1.0, abs=1e-12)


def test_bootstrap_point_inside_replicate_range():
    pa, pb = two_profiles()
    res = bootstrap_r(pa, pb, B=200, seed=5)
    assert res.replicate_rs.min() <= res.point_r <= res.replicate_rs.max()
    assert res.ci_low <= res.ci_high
    assert res.B == 200 and len(res.replicate_rs) == 200


def test_bootstrap_rejects_bad_b():
    pa, pb = two_profiles()
    with pytest.raises(ValueError):
        bootstrap_r(pa, pb, B=0)


def test_bootstrap_result_validates_replicates():
    with pytest.raises(ValueError):
        BootstrapResult(
            point_r=0.5, replicate_rs=np.zeros(3), ci_low=0.0, ci_high=1.0,
            B=4, seed=0, n_retries=0,
        )


def test_profile_tsv_export(tmp_path):
    pa, pb = two_profiles()
    path = tmp_path / "profile.tsv"
    write_profile_tsv(pa, pb, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "word1\tword2\tsim_a\tsim_b"
    assert len(lines) == 1 + len(pa.word_pairs)
    w1, w2, sa, sb = lines[1].split("\t")
    assert (w1, w2) == pa.word_pairs[0]
    assert float(sa) == pa.sims[0]
    assert float(sb) == pb.sims[0]
