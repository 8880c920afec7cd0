"""End-to-end corpus comparison pipeline and report rendering.

A single declarative YAML config names the corpora (first entry is the
reference corpus), filters, seeds, and which analyses to run; the pipeline
is a fixed DAG: tokenize -> lexical stats -> frequency correlation -> POS
(optional) -> embeddings -> second-order semantics. The resulting report
carries every table and figure data block plus a provenance section
sufficient to re-run the pipeline bit-identically.

Config shape::

    seed: 42
    stopwords: null          # packaged German list when null
    names: [Dodo, Lars, Lea]
    top_n: 10
    long_word_min_chars: 11
    sentence_outlier_cap: 100
    focus: llm-fs            # default: last corpus
    corpora:
      - {name: child, path: child.jsonl}
      - {name: llm-zs, path: llm_zs.jsonl}
      - {name: llm-fs, path: llm_fs.jsonl}
    pos:
      enabled: true
      conllu: {child: child.conllu, llm-fs: fs.conllu}   # optional
    embed: {dim: 100, epochs: 5, buckets: 2000000}
    semsim:
      enabled: true
      bootstrap_b: 1000
      parallel: false
      min_count: 1
      filter_function_words: true

Determinism: reports carry no timestamps, JSON keys are sorted, and the
bootstrap's parallel mode is excluded from provenance because it cannot
change any value (per-replicate seeds make serial and parallel runs equal).
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import yaml

from . import __version__
from .corpus import (
    DEFAULT_PROTAGONISTS,
    StopwordSet,
    default_stopwords,
    load_corpus,
    load_stopwords,
)
from .embed import EmbedParams, train_skipgram
from .freqcomp import compare_frequencies, frequency_table, scatter_rows
from .lexstats import (
    corpus_counts,
    length_distributions,
    shared_top_words,
    shared_type_stats,
    top_words,
)
from .postag import baseline_tag, default_lexicon, load_conllu, pos_diff, pos_distribution
from .semsim import bootstrap_r, second_order_r, shared_vocabulary, similarity_profile
from .tokenization import tokenize_corpus

SCHEMA_VERSION = 1
REPORT_FORMATS = ("markdown", "json", "tsv-bundle")


class PipelineError(RuntimeError):
    """A pipeline stage failed; message names the stage and input."""


@dataclass(frozen=True)
class PosSettings:
    enabled: bool = True
    conllu: Tuple[Tuple[str, str], ...] = ()  # (corpus name, path) pairs


@dataclass(frozen=True)
class SemsimSettings:
    enabled: bool = True
    bootstrap_b: int = 1000
    parallel: bool = False  # execution detail; never part of provenance
    min_count: int = 1
    filter_function_words: bool = True


@dataclass(frozen=True)
class PipelineConfig:
    corpora: Tuple[Tuple[str, str], ...]  # (name, manifest path); first = reference
    seed: int = 0
    stopwords_path: Optional[str] = None
    names: Tuple[str, ...] = tuple(sorted(DEFAULT_PROTAGONISTS))
    focus: Optional[str] = None
    top_n: int = 10
    long_word_min_chars: int = 11
    sentence_outlier_cap: int = 100
    pos: PosSettings = field(default_factory=PosSettings)
    embed: Dict[str, object] = field(default_factory=dict)
    semsim: SemsimSettings = field(default_factory=SemsimSettings)

    @property
    def reference(self) -> str:
        return self.corpora[0][0]

    def resolved_focus(self) -> str:
        return self.focus if self.focus is not None else self.corpora[-1][0]

    def embed_params(self, corpus_index: int) -> EmbedParams:
        return EmbedParams(**self.embed, seed=self.seed + corpus_index)

    def validate(self) -> None:
        """Check everything checkable before any computation starts."""
        if len(self.corpora) < 2:
            raise ValueError("config must name at least 2 corpora")
        names_seen = [n for n, _ in self.corpora]
        if len(set(names_seen)) != len(names_seen):
            raise ValueError("corpus names must be unique")
        for cname, path in self.corpora:
            if not cname:
                raise ValueError("corpus name must be non-empty")
            if not Path(path).is_file():
                raise ValueError(f"corpus {cname!r}: manifest not found: {path}")
        if self.stopwords_path is not None and not Path(self.stopwords_path).is_file():
            raise ValueError(f"stopword file not found: {self.stopwords_path}")
        focus = self.resolved_focus()
        if focus not in names_seen:
            raise ValueError(f"focus corpus {focus!r} not among corpora")
        if focus == self.reference:
            raise ValueError("focus corpus must differ from the reference corpus")
        if self.top_n < 1:
            raise ValueError("top_n must be >= 1")
        if self.long_word_min_chars < 1:
            raise ValueError("long_word_min_chars must be >= 1")
        if self.sentence_outlier_cap < 1:
            raise ValueError("sentence_outlier_cap must be >= 1")
        if self.pos.enabled and self.pos.conllu:
            covered = {n for n, _ in self.pos.conllu}
            if covered != {self.reference, focus}:
                raise ValueError(
                    "pos.conllu must name exactly the reference and focus corpora; "
                    f"got {sorted(covered)}"
                )
            for cname, path in self.pos.conllu:
                if not Path(path).is_file():
                    raise ValueError(f"CoNLL-U file for {cname!r} not found: {path}")
        if "seed" in self.embed:
            raise ValueError(
                "embed section must not set seed; per-corpus seeds derive from the "
                "pipeline seed"
            )
        self.embed_params(0)  # raises on invalid hyperparameters
        if self.semsim.bootstrap_b < 1:
            raise ValueError("semsim.bootstrap_b must be >= 1")
        if self.semsim.min_count < 1:
            raise ValueError("semsim.min_count must be >= 1")


def config_to_dict(cfg: PipelineConfig) -> dict:
    """Provenance form: complete, ordered, without execution-only flags."""
    return {
        "corpora": [[n, str(p)] for n, p in cfg.corpora],
        "seed": cfg.seed,
        "stopwords": cfg.stopwords_path,
        "names": list(cfg.names),
        "focus": cfg.resolved_focus(),
        "top_n": cfg.top_n,
        "long_word_min_chars": cfg.long_word_min_chars,
        "sentence_outlier_cap": cfg.sentence_outlier_cap,
        "pos": {
            "enabled": cfg.pos.enabled,
            "conllu": {n: str(p) for n, p in cfg.pos.conllu} or None,
        },
        "embed": {
            k: getattr(cfg.embed_params(0), k)
            for k in (
                "dim", "window", "epochs", "negatives", "lr0",
                "min_count", "nmin", "nmax", "buckets",
            )
        },
        "semsim": {
            "enabled": cfg.semsim.enabled,
            "bootstrap_b": cfg.semsim.bootstrap_b,
            "min_count": cfg.semsim.min_count,
            "filter_function_words": cfg.semsim.filter_function_words,
        },
    }


def config_from_dict(d: dict) -> PipelineConfig:
    """Inverse of config_to_dict; also accepts raw loaded YAML of that shape."""
    if not isinstance(d, dict):
        raise ValueError("config must be a mapping")
    if "corpora" not in d or not d["corpora"]:
        raise ValueError("config must list corpora")
    corpora = []
    for entry in d["corpora"]:
        if isinstance(entry, dict):
            corpora.append((str(entry["name"]), str(entry["path"])))
        else:
            cname, path = entry
            corpora.append((str(cname), str(path)))
    pos_raw = d.get("pos", {}) or {}
    conllu_raw = pos_raw.get("conllu") or {}
    sem_raw = d.get("semsim", {}) or {}
    return PipelineConfig(
        corpora=tuple(corpora),
        seed=int(d.get("seed", 0)),
        stopwords_path=d.get("stopwords"),
        names=tuple(d.get("names", sorted(DEFAULT_PROTAGONISTS))),
        focus=d.get("focus"),
        top_n=int(d.get("top_n", 10)),
        long_word_min_chars=int(d.get("long_word_min_chars", 11)),
        sentence_outlier_cap=int(d.get("sentence_outlier_cap", 100)),
        pos=PosSettings(
            enabled=bool(pos_raw.get("enabled", True)),
            conllu=tuple(sorted((str(k), str(v)) for k, v in conllu_raw.items())),
        ),
        embed=dict(d.get("embed", {}) or {}),
        semsim=SemsimSettings(
            enabled=bool(sem_raw.get("enabled", True)),
            bootstrap_b=int(sem_raw.get("bootstrap_b", 1000)),
            parallel=bool(sem_raw.get("parallel", False)),
            min_count=int(sem_raw.get("min_count", 1)),
            filter_function_words=bool(sem_raw.get("filter_function_words", True)),
        ),
    )


def load_config(path) -> PipelineConfig:
    """Read a YAML pipeline config; relative paths resolve against the file."""
    p = Path(path)
    with p.open("r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"{p}: config must be a mapping")
    base = p.parent

    def respath(v):
        q = Path(v)
        return str(q if q.is_absolute() else (base / q))

    for entry in raw.get("corpora", []):
        if isinstance(entry, dict) and "path" in entry:
            entry["path"] = respath(entry["path"])
    if raw.get("stopwords"):
        raw["stopwords"] = respath(raw["stopwords"])
    pos_raw = raw.get("pos") or {}
    if pos_raw.get("conllu"):
        pos_raw["conllu"] = {k: respath(v) for k, v in pos_raw["conllu"].items()}
    return config_from_dict(raw)


@dataclass
class AnalysisReport:
    """Every table and figure data block of one pipeline run, JSON-ready."""

    schema_version: int
    provenance: dict
    summaries: Dict[str, dict]
    freq_correlations: List[dict]
    top_words: Dict[str, dict]
    shared_top_words: List[dict]
    shared_types: List[dict]
    freq_scatter: List[dict]
    length_histograms: Dict[str, dict]
    pos: Optional[dict]
    semsim: Optional[dict]

    _FIELDS = (
        "schema_version", "provenance", "summaries", "freq_correlations",
        "top_words", "shared_top_words", "shared_types", "freq_scatter",
        "length_histograms", "pos", "semsim",
    )

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self._FIELDS}

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported report schema_version {d.get('schema_version')!r}"
            )
        missing = [f for f in cls._FIELDS if f not in d]
        if missing:
            raise ValueError(f"report dict missing fields: {missing}")
        return cls(**{f: d[f] for f in cls._FIELDS})


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _load_stops(cfg: PipelineConfig) -> StopwordSet:
    if cfg.stopwords_path is not None:
        return load_stopwords(cfg.stopwords_path)
    return default_stopwords()


def run_pipeline(config) -> AnalysisReport:
    """Execute the full comparison described by the config.

    `config` is a PipelineConfig or a path to a YAML file. Validation runs
    before any data is read; stage failures raise PipelineError naming the
    stage and the offending input.
    """
    cfg = config if isinstance(config, PipelineConfig) else load_config(config)

    def stage(label, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(f"[{label}] {exc}") from exc

    stage("config", cfg.validate)

    input_hashes = {}
    for cname, path in cfg.corpora:
        input_hashes[f"corpus:{cname}"] = stage("hash", _sha256, path)
    for cname, path in cfg.pos.conllu:
        input_hashes[f"conllu:{cname}"] = stage("hash", _sha256, path)
    if cfg.stopwords_path is not None:
        input_hashes["stopwords"] = stage("hash", _sha256, cfg.stopwords_path)

    stops = stage("stopwords", _load_stops, cfg)
    names = cfg.names
    notes: List[str] = [
        "POS distributions fold PROPN into NOUN and exclude PUNCT/X/SYM/INTJ.",
        "shared-type percentages report union-based and per-corpus denominators.",
        "semantic bootstrap resamples word pairs with replacement "
        f"(B={cfg.semsim.bootstrap_b}).",
    ]

    corpora = [
        stage(f"load:{cname}", load_corpus, path, cname)
        for cname, path in cfg.corpora
    ]
    tokenized = [stage(f"tokenize:{c.name}", tokenize_corpus, c) for c in corpora]
    ref_tc = tokenized[0]
    cnames = [c.name for c in corpora]
    focus = cfg.resolved_focus()
    focus_tc = tokenized[cnames.index(focus)]

    summaries: Dict[str, dict] = {}
    length_histograms: Dict[str, dict] = {}
    for tc in tokenized:
        cc = stage(f"lexstats:{tc.name}", corpus_counts, tc)
        wdist, sdist = stage(
            f"lexstats:{tc.name}", length_distributions, tc, cfg.sentence_outlier_cap
        )
        summaries[tc.name] = {
            "n_texts": cc.n_texts,
            "n_tokens": cc.n_tokens,
            "avg_tokens_per_text": cc.avg_tokens_per_text,
            "n_types": cc.n_types,
            "log_ttr": cc.log_ttr,
            "median_word_length": wdist.median,
            "median_sentence_length": sdist.median,
        }
        length_histograms[tc.name] = {
            "word": [[k, v] for k, v in wdist.histogram.items()],
            "sentence": [[k, v] for k, v in sdist.histogram.items()],
            "sentence_outlier_cap": sdist.outlier_threshold,
            "sentence_outliers_excluded": sdist.n_outliers_excluded,
        }

    freq_correlations: List[dict] = []
    freq_scatter: List[dict] = []
    shared_types: List[dict] = []
    shared_tops: List[dict] = []
    for tc in tokenized[1:]:
        comp = stage(
            f"freqcomp:{ref_tc.name}-vs-{tc.name}",
            compare_frequencies, ref_tc, tc, stops, names,
        )
        freq_correlations.append({
            "a": ref_tc.name,
            "b": tc.name,
            "r_all": comp.r_all,
            "r_shared": comp.r_shared,
            "r_no_function_words": comp.r_no_function_words,
            "n_pairs_all": comp.n_pairs_all,
            "n_pairs_shared": comp.n_pairs_shared,
            "n_pairs_no_function_words": comp.n_pairs_no_function_words,
        })
        ta = stage(
            f"freqtable:{ref_tc.name}", frequency_table,
            ref_tc, "content_only", stops, names,
        )
        tb = stage(
            f"freqtable:{tc.name}", frequency_table,
            tc, "content_only", stops, names,
        )
        rows = stage(f"scatter:{ref_tc.name}-vs-{tc.name}", scatter_rows, ta, tb, "union")
        freq_scatter.append({
            "a": ref_tc.name,
            "b": tc.name,
            "rows": [[w, la, lb] for w, la, lb in rows],
        })
        st_all = stage(
            f"sharedtypes:{tc.name}", shared_type_stats, ref_tc, tc, None, ()
        )
        st_content = stage(
            f"sharedtypes:{tc.name}", shared_type_stats, ref_tc, tc, stops, names
        )
        shared_types.append({
            "a": ref_tc.name,
            "b": tc.name,
            "all_types": _shared_block(st_all),
            "content_types": _shared_block(st_content),
        })
        rows = stage(
            f"sharedtop:{tc.name}", shared_top_words,
            ref_tc, tc, cfg.top_n, 0, stops, names,
        )
        shared_tops.append({
            "a": ref_tc.name,
            "b": tc.name,
            "rows": [[w, ca, cb, tot] for w, ca, cb, tot in rows],
        })

    top_blocks: Dict[str, dict] = {}
    for tc in tokenized:
        top_blocks[tc.name] = {
            "top": [
                [w, c] for w, c in stage(
                    f"topwords:{tc.name}", top_words, tc, cfg.top_n, 0, stops, names
                )
            ],
            "long": [
                [w, c] for w, c in stage(
                    f"topwords:{tc.name}", top_words,
                    tc, cfg.top_n, cfg.long_word_min_chars, stops, names,
                )
            ],
        }

    pos_block: Optional[dict] = None
    if cfg.pos.enabled:
        conllu_map = dict(cfg.pos.conllu)
        if conllu_map:
            tag_ref = stage(
                "pos:load", load_conllu, conllu_map[cfg.reference], cfg.reference
            )
            tag_focus = stage("pos:load", load_conllu, conllu_map[focus], focus)
            method = "conllu"
        else:
            lex = stage("pos:lexicon", default_lexicon)
            tag_ref = stage("pos:baseline", baseline_tag, ref_tc, lex)
            tag_focus = stage("pos:baseline", baseline_tag, focus_tc, lex)
            method = "baseline"
            notes.append(
                "POS tags come from the bundled heuristic baseline tagger, "
                "not a trained tagger; treat Table 4 as indicative only."
            )
        da = stage("pos:distribution", pos_distribution, tag_ref)
        db = stage("pos:distribution", pos_distribution, tag_focus)
        rows = stage("pos:diff", pos_diff, da, db)
        pos_block = {
            "a": cfg.reference,
            "b": focus,
            "method": method,
            "rows": [[t, pa, pb, d] for t, pa, pb, d in rows],
            "n_tagged_a": da.n_tagged_tokens,
            "n_tagged_b": db.n_tagged_tokens,
        }

    semsim_block: Optional[dict] = None
    if cfg.semsim.enabled:
        models = [
            stage(f"embed:{tc.name}", train_skipgram, tc, cfg.embed_params(i))
            for i, tc in enumerate(tokenized)
        ]
        sem_stops = stops if cfg.semsim.filter_function_words else None
        sem_names = names if cfg.semsim.filter_function_words else ()
        pairs = []
        for i in range(1, len(models)):
            label = f"{cnames[0]}-vs-{cnames[i]}"
            shared = stage(
                f"semsim:{label}", shared_vocabulary,
                models[0], models[i], sem_stops, sem_names, cfg.semsim.min_count,
            )
            pa = stage(
                f"semsim:{label}", similarity_profile, models[0], shared, cnames[0]
            )
            pb = stage(
                f"semsim:{label}", similarity_profile, models[i], shared, cnames[i]
            )
            point = stage(f"semsim:{label}", second_order_r, pa, pb)
            boot = stage(
                f"bootstrap:{label}", bootstrap_r,
                pa, pb, cfg.semsim.bootstrap_b, cfg.seed, cfg.semsim.parallel,
            )
            pairs.append({
                "a": cnames[0],
                "b": cnames[i],
                "n_shared_words": len(shared),
                "point_r": point,
                "ci_low": boot.ci_low,
                "ci_high": boot.ci_high,
                "B": boot.B,
                "seed": boot.seed,
                "n_retries": boot.n_retries,
                "replicates": [float(r) for r in boot.replicate_rs],
            })
        semsim_block = {
            "settings": {
                "bootstrap_b": cfg.semsim.bootstrap_b,
                "min_count": cfg.semsim.min_count,
                "filter_function_words": cfg.semsim.filter_function_words,
                "unit": "word_pairs",
            },
            "pairs": pairs,
        }

    provenance = {
        "tool": "corpuslens",
        "tool_version": __version__,
        "seed": cfg.seed,
        "resolved_config": config_to_dict(cfg),
        "input_sha256": input_hashes,
        "notes": notes,
    }
    return AnalysisReport(
        schema_version=SCHEMA_VERSION,
        provenance=provenance,
        summaries=summaries,
        freq_correlations=freq_correlations,
        top_words=top_blocks,
        shared_top_words=shared_tops,
        shared_types=shared_types,
        freq_scatter=freq_scatter,
        length_histograms=length_histograms,
        pos=pos_block,
        semsim=semsim_block,
    )


def _shared_block(st) -> dict:
    return {
        "n_shared": st.n_shared,
        "n_union": st.n_union,
        "n_types_a": st.n_types_a,
        "n_types_b": st.n_types_b,
        "pct_shared": st.pct_shared,
        "pct_of_a": st.pct_of_a,
        "pct_of_b": st.pct_of_b,
    }


def render_json(r: AnalysisReport) -> str:
    """Deterministic JSON: sorted keys, stable float repr, no timestamps."""
    return json.dumps(r.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _md_table(header: List[str], rows: List[List[str]]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("| " + " | ".join(["---"] * len(header)) + " |")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def render_markdown(r: AnalysisReport) -> str:
    """Markdown report mirroring the published table layouts.

    Exactly four tables when a POS block is present (summary, top words,
    shared top words, POS diff), three otherwise.
    """
    cnames = list(r.summaries)
    ref = cnames[0]
    out: List[str] = ["# Corpus comparison report", ""]

    # Table 1: summary + frequency correlations
    out += ["## Corpus summary", ""]
    corr_by_b = {row["b"]: row for row in r.freq_correlations}
    rows = []
    spec = [
        ("Total texts", "n_texts", "{:,}"),
        ("Total tokens", "n_tokens", "{:,}"),
        ("Avg. tokens/text", "avg_tokens_per_text", "{:.0f}"),
        ("Total types", "n_types", "{:,}"),
        ("log-TTR", "log_ttr", "{:.2f}"),
        ("Median word length", "median_word_length", "{:.1f}"),
        ("Median sentence length", "median_sentence_length", "{:.1f}"),
    ]
    for label, key, fmt in spec:
        rows.append([label] + [fmt.format(r.summaries[c][key]) for c in cnames])
    for label, key in (
        ("r", "r_all"),
        ("r (shared)", "r_shared"),
        ("r (without FW)", "r_no_function_words"),
    ):
        rows.append(
            [label]
            + [
                "" if c == ref or c not in corr_by_b
                else f"{corr_by_b[c][key]:.2f}"
                for c in cnames
            ]
        )
    out += _md_table(["Measure"] + cnames, rows) + [""]

    # Table 2: top words and long words per corpus
    out += ["## Top words (function words and names excluded)", ""]
    header = []
    for c in cnames:
        header += [c, f"{c} (long)"]
    n_rows = max(
        max(len(r.top_words[c]["top"]), len(r.top_words[c]["long"])) for c in cnames
    )
    rows = []
    for i in range(n_rows):
        row = []
        for c in cnames:
            tops = r.top_words[c]["top"]
            longs = r.top_words[c]["long"]
            row.append(tops[i][0] if i < len(tops) else "")
            row.append(longs[i][0] if i < len(longs) else "")
        rows.append(row)
    out += _md_table(header, rows) + [""]

    # Table 3: shared top words for the focus pair
    focus_pair = r.shared_top_words[-1] if r.shared_top_words else None
    if r.pos is not None:
        for blk in r.shared_top_words:
            if blk["b"] == r.pos["b"]:
                focus_pair = blk
                break
    if focus_pair is not None:
        a, b = focus_pair["a"], focus_pair["b"]
        out += [f"## Top shared words: {a} vs {b}", ""]
        rows = [
            [w, f"{ca:,}", f"{cb:,}", f"{tot:,}"]
            for w, ca, cb, tot in focus_pair["rows"]
        ]
        out += _md_table(["Word", a, b, "Total"], rows) + [""]

    # Table 4: POS comparison
    if r.pos is not None:
        a, b = r.pos["a"], r.pos["b"]
        out += [f"## POS tag comparison: {a} vs {b} (method: {r.pos['method']})", ""]
        rows = [
            [tag, f"{pa:.2f}", f"{pb:.2f}", f"{d:+.2f}"]
            for tag, pa, pb, d in r.pos["rows"]
        ]
        out += _md_table(["POS Tag", f"{a} [%]", f"{b} [%]", "Diff."], rows) + [""]

    if r.semsim is not None:
        out += ["## Second-order semantic similarity", ""]
        for p in r.semsim["pairs"]:
            out.append(
                f"- {p['a']} vs {p['b']}: r = {p['point_r']:.3f} over "
                f"{p['n_shared_words']:,} shared words; bootstrap 95% CI "
                f"[{p['ci_low']:.3f}, {p['ci_high']:.3f}] (B = {p['B']:,})"
            )
        out.append("")

    for st in r.shared_types:
        ct = st["content_types"]
        out.append(
            f"- Shared content types {st['a']} vs {st['b']}: {ct['n_shared']:,} "
            f"({ct['pct_shared']:.2f}% of union, {ct['pct_of_a']:.2f}% of "
            f"{st['a']}, {ct['pct_of_b']:.2f}% of {st['b']})"
        )
    out.append("")

    prov = r.provenance
    out += [
        "## Provenance",
        "",
        f"- tool: {prov['tool']} {prov['tool_version']}",
        f"- seed: {prov['seed']}",
    ]
    for key, digest in sorted(prov["input_sha256"].items()):
        out.append(f"- sha256 {key}: {digest}")
    for note in prov["notes"]:
        out.append(f"- note: {note}")
    out.append("")
    return "\n".join(out)


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", name)


def render_tsv_bundle(r: AnalysisReport, out_dir) -> List[str]:
    """One TSV per table/figure; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[str] = []

    def write(fname: str, header: List[str], rows) -> None:
        path = out / fname
        with path.open("w", encoding="utf-8") as fh:
            fh.write("\t".join(header) + "\n")
            for row in rows:
                fh.write("\t".join(str(x) for x in row) + "\n")
        written.append(str(path))

    cnames = list(r.summaries)
    keys = [
        "n_texts", "n_tokens", "avg_tokens_per_text", "n_types",
        "log_ttr", "median_word_length", "median_sentence_length",
    ]
    write(
        "table1_summary.tsv",
        ["measure"] + cnames,
        [[k] + [repr(r.summaries[c][k]) for c in cnames] for k in keys],
    )
    write(
        "table1_correlations.tsv",
        ["a", "b", "r_all", "r_shared", "r_no_function_words"],
        [
            [row["a"], row["b"], repr(row["r_all"]), repr(row["r_shared"]),
             repr(row["r_no_function_words"])]
            for row in r.freq_correlations
        ],
    )
    top_rows = []
    for c in cnames:
        for kind in ("top", "long"):
            for rank, (w, n) in enumerate(r.top_words[c][kind], start=1):
                top_rows.append([c, kind, rank, w, n])
    write("table2_top_words.tsv", ["corpus", "kind", "rank", "word", "count"], top_rows)
    shared_rows = []
    for blk in r.shared_top_words:
        for w, ca, cb, tot in blk["rows"]:
            shared_rows.append([blk["a"], blk["b"], w, ca, cb, tot])
    write(
        "table3_shared_top_words.tsv",
        ["a", "b", "word", "count_a", "count_b", "total"],
        shared_rows,
    )
    if r.pos is not None:
        write(
            "table4_pos.tsv",
            ["tag", f"pct_{_slug(r.pos['a'])}", f"pct_{_slug(r.pos['b'])}", "diff"],
            [
                [tag, repr(pa), repr(pb), repr(d)]
                for tag, pa, pb, d in r.pos["rows"]
            ],
        )
    for blk in r.freq_scatter:
        write(
            f"fig2_freq_scatter_{_slug(blk['a'])}_vs_{_slug(blk['b'])}.tsv",
            ["word", "log_a", "log_b"],
            [[w, repr(la), repr(lb)] for w, la, lb in blk["rows"]],
        )
    word_rows = []
    sent_rows = []
    for c in cnames:
        hist = r.length_histograms[c]
        word_rows += [[c, k, v] for k, v in hist["word"]]
        sent_rows += [[c, k, v] for k, v in hist["sentence"]]
    write("fig3_word_lengths.tsv", ["corpus", "length", "count"], word_rows)
    write("fig3_sentence_lengths.tsv", ["corpus", "length", "count"], sent_rows)
    if r.semsim is not None:
        for p in r.semsim["pairs"]:
            write(
                f"fig4_bootstrap_{_slug(p['a'])}_vs_{_slug(p['b'])}.tsv",
                ["replicate", "r"],
                [[i, repr(v)] for i, v in enumerate(p["replicates"])],
            )
    return written


def render_report(r: AnalysisReport, fmt: str, out_dir=None):
    """Render to one format: markdown/json return bytes, tsv-bundle writes files."""
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; use one of {REPORT_FORMATS}")
    if fmt == "json":
        return render_json(r).encode("utf-8")
    if fmt == "markdown":
        return render_markdown(r).encode("utf-8")
    if out_dir is None:
        raise ValueError("tsv-bundle needs an output directory")
    return render_tsv_bundle(r, out_dir)
