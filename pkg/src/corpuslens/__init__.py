"""Corpus comparison toolkit for child-written vs. LLM-generated German text.

Submodules:
    corpus        manifest loading, document model, stopword sets
    tokenization  sentence segmentation and word tokenization
    lexstats      lexical statistics (type/token counts, Herdan's C, length
                  distributions, shared vocabulary)
    freqcomp      log-frequency correlation between corpora
    postag        CoNLL-U IO, baseline tagger, POS distributions
    embed         subword skip-gram embeddings trained from scratch
    semsim        second-order semantic similarity with bootstrap CIs
    llmgen        prompt construction and chat-completion corpus generation
    report        end-to-end pipeline and report rendering
"""

__version__ = "0.1.0"

from .corpus import Corpus, Document, Source, StopwordSet, load_corpus, save_corpus

__all__ = [
    "__version__",
    "Corpus",
    "Document",
    "Source",
    "StopwordSet",
    "load_corpus",
    "save_corpus",
]
