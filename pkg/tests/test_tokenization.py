"""Sentence segmentation and tokenization: worked examples plus invariants."""

from hypothesis import given, settings
from hypothesis import strategies as st

from corpuslens.corpus import StopwordSet
from corpuslens.tokenization import (
    Token,
    filter_stopwords,
    segment_sentences,
    tokenize_corpus,
    tokenize_document,
    tokenize_sentence,
)

from conftest import corpus_from_texts


def surfaces(sent):
    return [t.surface for t in sent.tokens]


# --- segmentation ----------------------------------------------------------

def test_segments_on_terminators():
    assert segment_sentences("Der Hund bellt. Lars lacht!") == [
        "Der Hund bellt.",
        "Lars lacht!",
    ]


def test_terminator_runs_stay_with_one_sentence():
    assert segment_sentences("Was?! Oh... ja") == ["Was?!", "Oh...", "ja"]


def test_decimal_point_does_not_split():
    assert segment_sentences("Ein Kind von 9.6 Jahren malt.") == [
        "Ein Kind von 9.6 Jahren malt."
    ]


def test_trailing_text_without_terminator_is_a_sentence():
    assert segment_sentences("Der Hund bellt. und dann") == [
        "Der Hund bellt.",
        "und dann",
    ]


def test_whitespace_only_segments_dropped():
    assert segment_sentences("  .  ") == ["."]
    assert segment_sentences("   ") == []


# --- tokenization ----------------------------------------------------------

def test_punctuation_detached():
    sent = tokenize_sentence('"Halt!", sagte Lea.')
    assert surfaces(sent) == ['"', "Halt", "!", '"', ",", "sagte", "Lea", "."]


def test_internal_hyphen_and_apostrophe_kept():
    sent = tokenize_sentence("Heute geht's zur E-Mail.")
    assert surfaces(sent) == ["Heute", "geht's", "zur", "E-Mail", "."]


def test_trailing_apostrophe_detached():
    # only internal punctuation is kept; a final apostrophe is trailing
    assert surfaces(tokenize_sentence("Lars' Hund")) == ["Lars", "'", "Hund"]


def test_decimal_number_is_one_token():
    sent = tokenize_sentence("Sie ist 9.6 Jahre alt.")
    assert "9.6" in surfaces(sent)
    tok = next(t for t in sent.tokens if t.surface == "9.6")
    assert not tok.is_word


def test_case_preserved():
    sent = tokenize_sentence("Das Lernen und das lernen.")
    s = surfaces(sent)
    assert "Lernen" in s and "lernen" in s


def test_token_char_length_counts_letters_and_digits():
    assert Token("Lars'").char_length == 4
    assert Token("E-Mail").char_length == 5
    assert Token("9.6").char_length == 2
    assert Token("!").char_length == 0


def test_word_flag():
    assert Token("Hund").is_word
    assert Token("E-Mail").is_word
    assert not Token("!").is_word
    assert not Token("42").is_word


def test_document_word_and_sentence_counts():
    sents = tokenize_document("Der Hund bellt. Lars lacht!")
    assert len(sents) == 2
    assert [s.n_words for s in sents] == [3, 2]


def test_tokenize_corpus_shape():
    tc = tokenize_corpus(corpus_from_texts(["Ein Satz.", "Zwei. Sätze."]))
    assert tc.n_docs == 2
    assert [len(doc) for doc in tc.doc_sentences] == [1, 2]
    assert sum(1 for _ in tc.word_tokens()) == 4


# --- invariants -------------------------------------------------------------

TEXTS = st.text(
    alphabet=st.characters(
        categories=("L", "N", "P", "Zs"), include_characters=" äöüÄÖÜß.!?"
    ),
    min_size=1,
    max_size=200,
)


@given(TEXTS)
@settings(max_examples=200)
def test_no_character_dropped(text):
    # concatenated token surfaces == input minus whitespace, in order
    sents = tokenize_document(text)
    joined = "".join(t.surface for s in sents for t in s.tokens)
    assert joined == "".join(text.split())


@given(TEXTS)
@settings(max_examples=200)
def test_segmentation_is_additive(text):
    # segment surfaces concatenate to the original minus whitespace
    segs = segment_sentences(text)
    assert "".join("".join(seg.split()) for seg in segs) == "".join(text.split())


@given(TEXTS)
@settings(max_examples=200)
def test_every_token_is_substring(text):
    for sent in tokenize_document(text):
        for tok in sent.tokens:
            assert tok.surface in text


def test_filter_stopwords_drops_names_case_insensitively():
    sent = tokenize_sentence("Der Hund von LARS bellt nicht , sagt lea .")
    stops = StopwordSet(["der", "von", "nicht", "sagt"])
    kept = filter_stopwords(sent.tokens, stops, names=("Lars", "Lea"))
    assert [t.surface for t in kept] == ["Hund", "bellt"]


def test_filter_stopwords_without_stopset_keeps_words_only():
    sent = tokenize_sentence("Der Hund bellt !")
    kept = filter_stopwords(sent.tokens, None)
    assert [t.surface for t in kept] == ["Der", "Hund", "bellt"]
