"""POS distribution comparison over Universal POS tags.

Tagging itself is treated as an input: externally tagged text arrives as
CoNLL-U, and a documented heuristic baseline tagger exists for
self-contained runs. Distributions renormalize over the tags that the
published comparison reports (PUNCT, SYM, X and INTJ excluded, PROPN
folded into NOUN).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .tokenization import TokenizedCorpus

UPOS_TAGS = frozenset(
    {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    }
)

DEFAULT_EXCLUDED = frozenset({"PUNCT", "X", "SYM", "INTJ"})

# ordered so the first matching suffix wins
_SUFFIX_RULES = (
    ("ieren", "VERB"),
    ("lich", "ADJ"),
    ("isch", "ADJ"),
    ("haft", "ADJ"),
    ("sam", "ADJ"),
    ("bar", "ADJ"),
    ("los", "ADJ"),
    ("ig", "ADJ"),
)


@dataclass(frozen=True)
class TaggedCorpus:
    name: str
    sentences: tuple[tuple[tuple[str, str], ...], ...]

    def __post_init__(self):
        for sent in self.sentences:
            for surface, upos in sent:
                if upos not in UPOS_TAGS:
                    raise ValueError(f"unknown UPOS tag {upos!r} for {surface!r}")

    def tag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for sent in self.sentences:
            for _, upos in sent:
                counts[upos] = counts.get(upos, 0) + 1
        return counts


@dataclass(frozen=True)
class PosDistribution:
    percentages: dict[str, float]
    n_tagged_tokens: int

    @property
    def tagset(self) -> frozenset[str]:
        return frozenset(self.percentages)


def load_conllu(path: str | Path, name: str | None = None) -> TaggedCorpus:
    """Parse a CoNLL-U file into (surface, UPOS) sentences.

    Comment lines are skipped; multiword-token ranges (id "1-2") and
    empty nodes (id "1.1") are skipped. Malformed rows and UPOS values
    outside the 17-tag inventory raise with the line number.
    """
    path = Path(path)
    sentences: list[tuple[tuple[str, str], ...]] = []
    current: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                if current:
                    sentences.append(tuple(current))
                    current = []
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ValueError(
                    f"{path.name} line {lineno}: expected 10 columns, got {len(cols)}"
                )
            token_id = cols[0]
            if "-" in token_id or "." in token_id:
                continue
            form, upos = cols[1], cols[3]
            if upos not in UPOS_TAGS:
                raise ValueError(
                    f"{path.name} line {lineno}: unknown UPOS value {upos!r}"
                )
            current.append((form, upos))
    if current:
        sentences.append(tuple(current))
    return TaggedCorpus(name=name or path.stem, sentences=tuple(sentences))


def save_conllu(tg: TaggedCorpus, path: str | Path) -> None:
    """Write the (id, form, upos) column subset; other columns are '_'."""
    with open(path, "w", encoding="utf-8") as fh:
        for sent in tg.sentences:
            for i, (form, upos) in enumerate(sent, start=1):
                cols = [str(i), form, "_", upos, "_", "_", "_", "_", "_", "_"]
                fh.write("\t".join(cols) + "\n")
            fh.write("\n")


def load_lexicon(path: str | Path) -> dict[str, str]:
    """Read a word<TAB>UPOS lexicon; '#' comments and blanks ignored."""
    lexicon: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'word<TAB>UPOS'")
            word, upos = parts
            if upos not in UPOS_TAGS:
                raise ValueError(f"line {lineno}: unknown UPOS value {upos!r}")
            lexicon[word] = upos
    return lexicon


def default_lexicon() -> dict[str, str]:
    """Packaged German closed-class lexicon for the baseline tagger."""
    ref = resources.files("corpuslens.data").joinpath("upos_lexicon_de.txt")
    lexicon: dict[str, str] = {}
    for raw in ref.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            word, upos = line.split("\t")
            lexicon[word] = upos
    return lexicon


def _tag_token(surface: str, is_first: bool, lexicon: Mapping[str, str]) -> str:
    if not any(ch.isalpha() for ch in surface):
        return "NUM" if any(ch.isdigit() for ch in surface) else "PUNCT"
    tag = lexicon.get(surface)
    if tag is None:
        tag = lexicon.get(surface.casefold())
    if tag is not None:
        return tag
    # German nouns are capitalized; sentence-initial position is ambiguous
    if surface[0].isupper() and not is_first:
        return "NOUN"
    lowered = surface.casefold()
    for suffix, sfx_tag in _SUFFIX_RULES:
        if lowered.endswith(suffix) and len(lowered) > len(suffix):
            return sfx_tag
    return "X"


def baseline_tag(tc: TokenizedCorpus, lexicon: Mapping[str, str]) -> TaggedCorpus:
    """Heuristic lexicon-lookup tagger.

    Case-sensitive lookup first, case-folded second; unknown capitalized
    non-sentence-initial words become NOUN, other unknowns fall through
    suffix rules to X. A fallback for runs without external tagger
    output, not a replacement for one.
    """
    if not lexicon:
        raise ValueError("lexicon must be non-empty")
    sentences = []
    for sent in tc.sentences():
        tagged = tuple(
            (tok.surface, _tag_token(tok.surface, i == 0, lexicon))
            for i, tok in enumerate(sent.tokens)
        )
        sentences.append(tagged)
    return TaggedCorpus(name=tc.name, sentences=tuple(sentences))


def pos_distribution(
    tg: TaggedCorpus, exclude: frozenset[str] = DEFAULT_EXCLUDED
) -> PosDistribution:
    """Percentage of each reported tag, PROPN folded into NOUN.

    The output tagset is the full inventory minus exclusions (and minus
    PROPN), every tag present even at 0%, so distributions from different
    corpora are directly comparable.
    """
    unknown = exclude - UPOS_TAGS
    if unknown:
        raise ValueError(f"cannot exclude unknown tags {sorted(unknown)}")
    tagset = sorted(UPOS_TAGS - set(exclude) - {"PROPN"})
    counts = dict.fromkeys(tagset, 0)
    for raw_tag, n in tg.tag_counts().items():
        tag = "NOUN" if raw_tag == "PROPN" else raw_tag
        if tag in counts:
            counts[tag] += n
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no tokens left after tag exclusion")
    return PosDistribution(
        percentages={t: 100.0 * counts[t] / total for t in tagset},
        n_tagged_tokens=total,
    )


def pos_diff(
    a: PosDistribution, b: PosDistribution
) -> list[tuple[str, float, float, float]]:
    """Rows (tag, pct_a, pct_b, pct_b - pct_a), sorted by pct_a descending."""
    if a.tagset != b.tagset:
        raise ValueError("distributions cover different tagsets")
    rows = [
        (tag, a.percentages[tag], b.percentages[tag],
         b.percentages[tag] - a.percentages[tag])
        for tag in a.percentages
    ]
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows
