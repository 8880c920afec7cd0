#!/usr/bin/env python3
"""Regenerate the bundled synthetic corpora under tests/data/.

Five manifests come out of one topic-structured toy generator over
German-like picture-story language:

    mini_child.jsonl   short sentences, spelling variants, noun-heavy
    mini_llm_zs.jsonl  long framed sentences, repetitive vocabulary
    mini_llm_fs.jsonl  medium sentences, moderate vocabulary
    twin_a.jsonl       two corpora drawn from the same child-style
    twin_b.jsonl       generator with different seeds (semantic twins)

plus three tiny valid PNGs used by the prompt-construction tests. All
output is deterministic for the seeds fixed below; re-running the script
reproduces the files byte for byte.
"""

from __future__ import annotations

import struct
import sys
import zlib
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from corpuslens.corpus import Corpus, Document, save_corpus

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

STORIES = {
    "Eis": {
        "nouns": ["Eis", "Eiswagen", "Sonne", "Park", "Kugel"],
        "verbs": ["isst", "kauft", "findet", "holt"],
        "adjs": ["glücklich", "fröhlich"],
    },
    "Bus": {
        "nouns": ["Bus", "Tasche", "Fenster", "Haltestelle", "Fahrer"],
        "verbs": ["fährt", "sieht", "ruft", "steht"],
        "adjs": ["traurig", "erschrocken"],
    },
    "Hund": {
        "nouns": ["Hund", "Ball", "Garten", "Knochen", "Leine"],
        "verbs": ["bellt", "springt", "läuft", "holt"],
        "adjs": ["glücklich", "schnell"],
    },
    "Drachen": {
        "nouns": ["Drachen", "Wind", "Wiese", "Schnur", "Baum"],
        "verbs": ["fliegt", "steigt", "fällt", "zieht"],
        "adjs": ["bunt", "hoch"],
    },
    "Regen": {
        "nouns": ["Regen", "Schirm", "Pfütze", "Wolke", "Stiefel"],
        "verbs": ["fällt", "springt", "läuft", "wartet"],
        "adjs": ["nass", "grau"],
    },
    "Zirkus": {
        "nouns": ["Zirkus", "Clown", "Zelt", "Pferd", "Manege"],
        "verbs": ["lacht", "springt", "tanzt", "sieht"],
        "adjs": ["lustig", "bunt"],
    },
    "Garten": {
        "nouns": ["Garten", "Blume", "Schaufel", "Beet", "Gießkanne"],
        "verbs": ["gräbt", "pflanzt", "gießt", "wächst"],
        "adjs": ["grün", "schön"],
    },
    "Schule": {
        "nouns": ["Schule", "Tafel", "Heft", "Lehrerin", "Pause"],
        "verbs": ["schreibt", "liest", "lernt", "spielt"],
        "adjs": ["fleißig", "laut"],
    },
}

NAMES = ["Lars", "Lea", "Dodo"]
COMMON_NOUNS = ["Mädchen", "Junge", "Mann", "Frau", "Kind"]
DETS = ["der", "die", "das", "ein", "eine"]
ADVS = ["dann", "plötzlich", "wieder", "schnell", "draußen"]

# child spelling variants: drop or double one letter inside the word
def _typo(rng: np.random.Generator, word: str) -> str:
    if len(word) < 4:
        return word
    i = int(rng.integers(1, len(word) - 1))
    if rng.random() < 0.5:
        return word[:i] + word[i] + word[i:]
    return word[:i] + word[i + 1 :]


def _pick(rng, seq):
    return seq[int(rng.integers(0, len(seq)))]


def _sentence(rng: np.random.Generator, story: str, style: str) -> str:
    vocab = STORIES[story]
    name = _pick(rng, NAMES)
    noun = _pick(rng, vocab["nouns"] + COMMON_NOUNS)
    noun2 = _pick(rng, vocab["nouns"])
    verb = _pick(rng, vocab["verbs"])
    verb2 = _pick(rng, vocab["verbs"])
    adj = _pick(rng, vocab["adjs"])
    det = _pick(rng, DETS)
    det2 = _pick(rng, DETS)
    adv = _pick(rng, ADVS)

    if style == "child":
        templates = [
            f"{name} {verb} {det} {noun}.",
            f"{det.capitalize()} {noun} {verb} {adv}.",
            f"Dann {verb} {name} {det} {noun2}.",
            f"{name} und {_pick(rng, NAMES)} sehen {det} {noun}.",
            f"{det.capitalize()} {noun} ist {adj}.",
        ]
        s = _pick(rng, templates)
        if rng.random() < 0.18:
            words = s[:-1].split(" ")
            k = int(rng.integers(0, len(words)))
            words[k] = _typo(rng, words[k])
            s = " ".join(words) + "."
        if rng.random() < 0.1:
            s = s[:-1] + " und " + _sentence(rng, story, "plain")
        return s
    if style == "zs":
        templates = [
            f"Auf dem Bild sehe ich {det} {noun}, {det2} {noun2} und {det} "
            f"{_pick(rng, COMMON_NOUNS)}, und alles wirkt sehr {adj}.",
            f"Das {noun} {verb} {adv}, während {det} {noun2} {verb2} und "
            f"die Kinder {adj} sind.",
            f"Auf dem Bild sehe ich, wie {det} {noun} {verb} und wie {det2} "
            f"{noun2} {adv} {verb2}.",
        ]
        return _pick(rng, templates)
    if style == "fs":
        templates = [
            f"{name} {verb} {det} {noun} und ist {adj}.",
            f"{det.capitalize()} {noun} {verb} {adv}.",
            f"Auf dem Bild {verb} {det} {noun2} {adv}.",
            f"{name} sieht {det} {noun} und {verb2} {adv}.",
        ]
        return _pick(rng, templates)
    # plain: clause used inside child compound sentences
    return f"{det} {noun2} {verb} {adv}."


def make_corpus(name: str, source: str, style: str, seed: int,
                docs_per_story: int, sents_lo: int, sents_hi: int) -> Corpus:
    rng = np.random.default_rng(seed)
    docs = []
    for story in STORIES:
        for i in range(docs_per_story):
            n_sents = int(rng.integers(sents_lo, sents_hi + 1))
            text = " ".join(_sentence(rng, story, style) for _ in range(n_sents))
            docs.append(
                Document(
                    id=f"{name}-{story}-{i:03d}",
                    story_id=story,
                    source=source,
                    text=text,
                )
            )
    return Corpus(name=name, documents=tuple(docs))


def tiny_png(width: int, height: int, rgb: tuple) -> bytes:
    """Minimal valid RGB PNG, deterministic bytes."""

    def chunk(tag: bytes, data: bytes) -> bytes:
        return (
            struct.pack(">I", len(data))
            + tag
            + data
            + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)
        )

    header = b"\x89PNG\r\n\x1a\n"
    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    raw = b"".join(b"\x00" + bytes(rgb) * width for _ in range(height))
    idat = zlib.compress(raw, 9)
    return header + chunk(b"IHDR", ihdr) + chunk(b"IDAT", idat) + chunk(b"IEND", b"")


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    specs = [
        ("mini_child", "child", "child", 11, 8, 2, 5),
        ("mini_llm_zs", "llm-zs", "zs", 12, 8, 3, 6),
        ("mini_llm_fs", "llm-fs", "fs", 13, 8, 2, 4),
        ("twin_a", "other", "child", 21, 12, 2, 5),
        ("twin_b", "other", "child", 22, 12, 2, 5),
    ]
    for name, source, style, seed, nd, lo, hi in specs:
        c = make_corpus(name, source, style, seed, nd, lo, hi)
        path = OUT_DIR / f"{name}.jsonl"
        save_corpus(c, path)
        n_tokens = sum(len(d.text.split()) for d in c)
        print(f"{path}  docs={len(c)}  ~tokens={n_tokens}")

    for story, rgb in [("Eis", (240, 240, 255)), ("Bus", (255, 220, 40)),
                       ("Hund", (160, 110, 60))]:
        path = OUT_DIR / f"img_{story.lower()}.png"
        path.write_bytes(tiny_png(4, 3, rgb))
        print(f"{path}  bytes={path.stat().st_size}")


if __name__ == "__main__":
    main()
