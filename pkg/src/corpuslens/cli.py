"""Command-line interface.

Subcommands: run (full pipeline from a YAML config), stats, freq, pos,
embed train, semsim, generate. Global flags --seed, --stopwords, --names
and --format are accepted by every subcommand; for `run` they override the
corresponding config entries only when given explicitly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .corpus import (
    DEFAULT_PROTAGONISTS,
    default_stopwords,
    load_corpus,
    load_stopwords,
    save_corpus,
)
from .embed import EmbedParams, load_vectors, save_vectors, train_skipgram
from .freqcomp import compare_frequencies
from .lexstats import corpus_counts, length_distributions
from .llmgen import GenerationError, generate_corpus, load_plan
from .postag import load_conllu, pos_diff, pos_distribution
from .report import PipelineError, load_config, render_report, run_pipeline
from .semsim import bootstrap_r, second_order_r, shared_vocabulary, similarity_profile
from .tokenization import tokenize_corpus


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument(
        "--stopwords", default=None,
        help="stopword list file (default: packaged German list)",
    )
    p.add_argument(
        "--names", default=None,
        help="comma-separated protagonist names to filter "
             "(default: Dodo,Lars,Lea; pass '' for none)",
    )
    p.add_argument(
        "--format", dest="fmt", default=None,
        choices=["json", "markdown", "tsv-bundle"],
        help="output format (default json)",
    )
    return p


def _effective_names(args) -> tuple:
    if args.names is None:
        return tuple(sorted(DEFAULT_PROTAGONISTS))
    parts = [n.strip() for n in args.names.split(",")]
    return tuple(n for n in parts if n)


def _effective_stops(args):
    if args.stopwords is None:
        return default_stopwords()
    return load_stopwords(args.stopwords)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(obj, out: Optional[str]) -> None:
    _emit(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False), out)


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.stopwords is not None:
        overrides["stopwords_path"] = args.stopwords
    if args.names is not None:
        overrides["names"] = _effective_names(args)
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    report = run_pipeline(cfg)
    fmt = args.fmt or "json"
    if fmt == "tsv-bundle":
        if not args.output:
            raise PipelineError("tsv-bundle needs -o <directory>")
        paths = render_report(report, fmt, args.output)
        for p in paths:
            print(p)
        return 0
    payload = render_report(report, fmt).decode("utf-8")
    _emit(payload, args.output)
    return 0


def _cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus)
    tc = tokenize_corpus(corpus)
    cc = corpus_counts(tc)
    wdist, sdist = length_distributions(tc)
    payload = {
        "corpus": corpus.name,
        "n_texts": cc.n_texts,
        "n_tokens": cc.n_tokens,
        "avg_tokens_per_text": cc.avg_tokens_per_text,
        "n_types": cc.n_types,
        "log_ttr": cc.log_ttr,
        "median_word_length": wdist.median,
        "median_sentence_length": sdist.median,
        "sentence_outliers_over_cap": sdist.n_outliers_excluded,
    }
    if (args.fmt or "json") == "markdown":
        lines = ["| Measure | Value |", "| --- | --- |"]
        for k, v in payload.items():
            lines.append(f"| {k} | {v} |")
        _emit("\n".join(lines), args.output)
    else:
        _emit_json(payload, args.output)
    return 0


def _cmd_freq(args) -> int:
    a = tokenize_corpus(load_corpus(args.corpus_a))
    b = tokenize_corpus(load_corpus(args.corpus_b))
    comp = compare_frequencies(a, b, _effective_stops(args), _effective_names(args))
    payload = {
        "a": a.name,
        "b": b.name,
        "r_all": comp.r_all,
        "r_shared": comp.r_shared,
        "r_no_function_words": comp.r_no_function_words,
        "n_pairs_all": comp.n_pairs_all,
        "n_pairs_shared": comp.n_pairs_shared,
        "n_pairs_no_function_words": comp.n_pairs_no_function_words,
    }
    _emit_json(payload, args.output)
    return 0


def _cmd_pos(args) -> int:
    ta = load_conllu(args.conllu_a)
    tb = load_conllu(args.conllu_b)
    da = pos_distribution(ta)
    db = pos_distribution(tb)
    rows = pos_diff(da, db)
    if (args.fmt or "json") == "markdown":
        lines = [
            f"| POS Tag | {ta.name} [%] | {tb.name} [%] | Diff. |",
            "| --- | --- | --- | --- |",
        ]
        for tag, pa, pb, d in rows:
            lines.append(f"| {tag} | {pa:.2f} | {pb:.2f} | {d:+.2f} |")
        _emit("\n".join(lines), args.output)
    else:
        _emit_json(
            {
                "a": ta.name,
                "b": tb.name,
                "n_tagged_a": da.n_tagged_tokens,
                "n_tagged_b": db.n_tagged_tokens,
                "rows": [[tag, pa, pb, d] for tag, pa, pb, d in rows],
            },
            args.output,
        )
    return 0


def _cmd_embed_train(args) -> int:
    corpus = load_corpus(args.corpus)
    tc = tokenize_corpus(corpus)
    params = EmbedParams(
        dim=args.dim,
        window=args.window,
        epochs=args.epochs,
        negatives=args.negatives,
        lr0=args.lr0,
        min_count=args.min_count,
        nmin=args.nmin,
        nmax=args.nmax,
        buckets=args.buckets,
        seed=args.seed if args.seed is not None else 0,
    )
    model = train_skipgram(tc, params)
    save_vectors(model, args.output)
    _emit_json(
        {
            "corpus": corpus.name,
            "vocab_size": len(model.vocab),
            "dim": params.dim,
            "vectors": str(args.output),
        },
        None,
    )
    return 0


def _cmd_semsim(args) -> int:
    va = load_vectors(args.vectors_a)
    vb = load_vectors(args.vectors_b)
    stops = _effective_stops(args)
    names = _effective_names(args)
    if args.no_filter:
        stops, names = None, ()
    shared = shared_vocabulary(va, vb, stops, names)
    pa = similarity_profile(va, shared, str(args.vectors_a))
    pb = similarity_profile(vb, shared, str(args.vectors_b))
    payload = {
        "a": str(args.vectors_a),
        "b": str(args.vectors_b),
        "n_shared_words": len(shared),
        "r": second_order_r(pa, pb),
    }
    if args.bootstrap > 0:
        boot = bootstrap_r(
            pa, pb, args.bootstrap,
            args.seed if args.seed is not None else 0,
            parallel=args.parallel,
        )
        payload.update(
            {
                "ci_low": boot.ci_low,
                "ci_high": boot.ci_high,
                "B": boot.B,
                "n_retries": boot.n_retries,
            }
        )
    _emit_json(payload, args.output)
    return 0


def _cmd_generate(args) -> int:
    plan = load_plan(args.plan)
    if args.seed is not None:
        plan = dataclasses.replace(plan, seed=args.seed)
    corpus = generate_corpus(plan)
    if args.output:
        save_corpus(corpus, args.output)
    _emit_json(
        {
            "source": corpus.name,
            "n_documents": len(corpus),
            "manifest": args.output,
        },
        None,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="corpuslens",
        description="Compare child-written and LLM-generated German corpora.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run the full pipeline")
    p.add_argument("config", help="YAML pipeline config")
    p.add_argument("-o", "--output", default=None, help="output file (or dir for tsv-bundle)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("stats", parents=[common], help="summary statistics of one corpus")
    p.add_argument("corpus", help="corpus manifest (JSONL)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("freq", parents=[common], help="frequency correlations of two corpora")
    p.add_argument("corpus_a")
    p.add_argument("corpus_b")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_freq)

    p = sub.add_parser("pos", parents=[common], help="POS distribution diff of two CoNLL-U files")
    p.add_argument("conllu_a")
    p.add_argument("conllu_b")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_pos)

    p = sub.add_parser("embed", parents=[], help="embedding commands")
    esub = p.add_subparsers(dest="embed_command", required=True)
    pt = esub.add_parser("train", parents=[common], help="train vectors on a corpus")
    pt.add_argument("corpus", help="corpus manifest (JSONL)")
    pt.add_argument("-o", "--output", required=True, help="vector file to write")
    pt.add_argument("--dim", type=int, default=100)
    pt.add_argument("--window", type=int, default=5)
    pt.add_argument("--epochs", type=int, default=5)
    pt.add_argument("--negatives", type=int, default=5)
    pt.add_argument("--lr0", type=float, default=0.05)
    pt.add_argument("--min-count", type=int, default=1)
    pt.add_argument("--nmin", type=int, default=3)
    pt.add_argument("--nmax", type=int, default=6)
    pt.add_argument("--buckets", type=int, default=2_000_000)
    pt.set_defaults(func=_cmd_embed_train)

    p = sub.add_parser("semsim", parents=[common], help="second-order similarity of two vector files")
    p.add_argument("vectors_a")
    p.add_argument("vectors_b")
    p.add_argument("--bootstrap", type=int, default=0, help="bootstrap replicates (0 = off)")
    p.add_argument("--parallel", action="store_true", help="bootstrap on a thread pool")
    p.add_argument("--no-filter", action="store_true",
                   help="keep function words and names in the shared vocabulary")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_semsim)

    p = sub.add_parser("generate", parents=[common], help="generate a corpus from a plan")
    p.add_argument("plan", help="YAML generation plan")
    p.add_argument("-o", "--output", default=None, help="manifest JSONL to write")
    p.set_defaults(func=_cmd_generate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, PipelineError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
