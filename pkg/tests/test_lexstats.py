"""Lexical statistics: log-TTR arithmetic, counts, lengths, top-word tables."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpuslens.corpus import StopwordSet
from corpuslens.lexstats import (
    corpus_counts,
    herdan_log_ttr,
    length_distributions,
    shared_top_words,
    shared_type_stats,
    top_words,
)

from conftest import tokenized


# --- Herdan log-TTR ---------------------------------------------------------

def test_log_ttr_published_counts():
    assert herdan_log_ttr(6364, 212505) == pytest.approx(0.714, abs=0.005)
    assert herdan_log_ttr(3855, 363867) == pytest.approx(0.645, abs=0.005)
    assert herdan_log_ttr(2354, 158785) == pytest.approx(0.648, abs=0.005)


def test_log_ttr_known_value():
    assert herdan_log_ttr(100, 10000) == pytest.approx(0.5, abs=1e-15)


def test_log_ttr_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        herdan_log_ttr(1, 1)
    with pytest.raises(ValueError):
        herdan_log_ttr(0, 100)
    with pytest.raises(ValueError):
        herdan_log_ttr(101, 100)


@given(
    st.integers(min_value=2, max_value=10**9),
    st.integers(min_value=1, max_value=10**9),
)
def test_log_ttr_base_invariant(n_tokens, n_types):
    # ln(types)/ln(tokens) == log10(types)/log10(tokens)
    n_types = min(n_types, n_tokens)
    ratio = herdan_log_ttr(n_types, n_tokens)
    via_log10 = math.log10(n_types) / math.log10(n_tokens)
    assert ratio == pytest.approx(via_log10, abs=1e-12)
    assert 0.0 <= ratio <= 1.0


# --- counts and lengths -----------------------------------------------------

def test_corpus_counts_include_punctuation_in_tokens():
    tc = tokenized(["Der Hund bellt. Der Hund!"])
    c = corpus_counts(tc)
    assert c.n_texts == 1
    assert c.n_tokens == 7  # 5 words + 2 terminators
    assert c.n_types == 3  # Der, Hund, bellt
    assert c.avg_tokens_per_text == pytest.approx(7.0)
    assert c.log_ttr == pytest.approx(math.log(3) / math.log(7))


def test_corpus_counts_types_are_case_sensitive():
    tc = tokenized(["Das Lernen hilft. Wir lernen."])
    assert corpus_counts(tc).n_types == 5


def test_length_distributions_basic():
    tc = tokenized(["Ein Hund bellt laut.", "Ja."])
    word_dist, sent_dist = length_distributions(tc)
    assert word_dist.histogram == {2: 1, 3: 1, 4: 2, 5: 1}
    assert word_dist.median == 4.0
    assert sent_dist.histogram == {1: 1, 4: 1}
    assert sent_dist.median == 2.5


def test_sentence_outliers_excluded_from_histogram_not_median():
    long_sent = " ".join(["wort"] * 120) + "."
    tc = tokenized([long_sent, "Ein Satz hier.", "Noch ein Satz da."])
    _, sent_dist = length_distributions(tc, sentence_outlier_cap=100)
    assert 120 not in sent_dist.histogram
    assert sent_dist.n_outliers_excluded == 1
    assert sent_dist.median == 4.0  # median over [120, 3, 4] is 4
    _, uncapped = length_distributions(tc, sentence_outlier_cap=1000)
    assert 120 in uncapped.histogram


# --- top words --------------------------------------------------------------

STOPS = StopwordSet(["der", "die", "das", "und", "ein", "eine"])


def test_top_words_ranked_with_lexicographic_ties():
    tc = tokenized(["Hund Katze Hund Maus Katze Esel."])
    assert top_words(tc, 3) == [("Hund", 2), ("Katze", 2), ("Esel", 1)]


def test_top_words_filters_stops_and_names():
    tc = tokenized(["Der Hund und Lars sehen die Katze."])
    assert top_words(tc, 5, stops=STOPS, names=("Lars",)) == [
        ("Hund", 1),
        ("Katze", 1),
        ("sehen", 1),
    ]


def test_top_words_min_chars():
    tc = tokenized(["Haltestelle Hund Haltestelle Staubsauger."])
    assert top_words(tc, 5, min_chars=11) == [
        ("Haltestelle", 2),
        ("Staubsauger", 1),
    ]


def test_top_words_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        top_words(tokenized(["Ein Satz."]), 0)


def test_shared_top_words_ranked_by_total():
    a = tokenized(["Hund Hund Hund Katze Esel."])
    b = tokenized(["Hund Katze Katze Katze Vogel."])
    rows = shared_top_words(a, b, 5)
    assert rows == [("Hund", 3, 1, 4), ("Katze", 1, 3, 4)]


def test_shared_type_stats_denominators():
    a = tokenized(["Hund Katze Esel."])
    b = tokenized(["Hund Katze Vogel Wal."])
    s = shared_type_stats(a, b)
    assert (s.n_shared, s.n_union, s.n_types_a, s.n_types_b) == (2, 5, 3, 4)
    assert s.pct_shared == pytest.approx(40.0)
    assert s.pct_of_a == pytest.approx(100 * 2 / 3)
    assert s.pct_of_b == pytest.approx(50.0)
