#!/usr/bin/env python3
"""Run the full comparison pipeline on the bundled synthetic corpora.

Produces the JSON report, the markdown report, and the TSV bundle under
out/mini/. Useful as a smoke test and as a worked example of the library
API; the CLI equivalent is:

    corpuslens run configs/mini.yaml --format markdown -o out/mini/report.md
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from corpuslens.report import load_config, render_report, run_pipeline

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    config = load_config(ROOT / "configs" / "mini.yaml")
    out_dir = ROOT / "out" / "mini"
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    report = run_pipeline(config)
    print(f"pipeline finished in {time.perf_counter() - t0:.1f}s")

    (out_dir / "report.json").write_bytes(render_report(report, "json"))
    (out_dir / "report.md").write_bytes(render_report(report, "markdown"))
    paths = render_report(report, "tsv-bundle", out_dir=out_dir / "tables")
    print(f"wrote report.json, report.md, {len(paths)} TSV tables under {out_dir}")

    for name, s in report.summaries.items():
        print(
            f"  {name}: {s['n_texts']} texts, {s['n_tokens']} tokens, "
            f"log-TTR {s['log_ttr']:.3f}"
        )


if __name__ == "__main__":
    main()
