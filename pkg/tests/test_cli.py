"""CLI subcommands end to end, invoked in-process via main(argv)."""

import json

from corpuslens.cli import main

from conftest import DATA, ROOT

CHILD = str(DATA / "mini_child.jsonl")
FS = str(DATA / "mini_llm_fs.jsonl")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stats_json(capsys):
    code, out, err = run_cli(capsys, "stats", CHILD)
    assert code == 0 and err == ""
    payload = json.loads(out)
    assert payload["corpus"] == "mini_child"
    assert payload["n_texts"] == 64
    assert 0 < payload["log_ttr"] < 1


def test_stats_markdown(capsys):
    code, out, _ = run_cli(capsys, "stats", CHILD, "--format", "markdown")
    assert code == 0
    assert out.startswith("| Measure | Value |")


def test_stats_output_file(tmp_path, capsys):
    target = tmp_path / "stats.json"
    code, out, _ = run_cli(capsys, "stats", CHILD, "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["n_texts"] == 64


def test_freq_reports_three_correlations(capsys):
    code, out, _ = run_cli(capsys, "freq", CHILD, FS)
    assert code == 0
    payload = json.loads(out)
    for key in ("r_all", "r_shared", "r_no_function_words"):
        assert -1.0 <= payload[key] <= 1.0
    assert payload["n_pairs_shared"] <= payload["n_pairs_all"]


def test_freq_names_flag_empty_disables_name_filter(capsys):
    _, with_names, _ = run_cli(capsys, "freq", CHILD, FS)
    _, without, _ = run_cli(capsys, "freq", CHILD, FS, "--names", "")
    # protagonist names are high-frequency; including them must change counts
    assert (
        json.loads(without)["n_pairs_no_function_words"]
        > json.loads(with_names)["n_pairs_no_function_words"]
    )


def test_embed_train_then_semsim(tmp_path, capsys):
    va = tmp_path / "a.vec"
    vb = tmp_path / "b.vec"
    common = [
        "--dim", "12", "--window", "2", "--epochs", "1", "--negatives", "2",
        "--min-count", "2", "--nmin", "3", "--nmax", "4", "--buckets", "256",
    ]
    code, out, _ = run_cli(
        capsys, "embed", "train", CHILD, "-o", str(va), "--seed", "1", *common
    )
    assert code == 0
    assert json.loads(out)["dim"] == 12
    code, _, _ = run_cli(
        capsys, "embed", "train", FS, "-o", str(vb), "--seed", "2", *common
    )
    assert code == 0

    code, out, _ = run_cli(
        capsys, "semsim", str(va), str(vb), "--bootstrap", "25", "--seed", "0"
    )
    assert code == 0
    payload = json.loads(out)
    assert -1.0 <= payload["r"] <= 1.0
    assert payload["B"] == 25
    assert payload["ci_low"] <= payload["ci_high"]
    assert payload["n_shared_words"] >= 2


def test_pos_subcommand(tmp_path, capsys):
    conllu = "1\tDer\t_\tDET\t_\t_\t_\t_\t_\t_\n2\tHund\t_\tNOUN\t_\t_\t_\t_\t_\t_\n\n"
    pa = tmp_path / "a.conllu"
    pb = tmp_path / "b.conllu"
    pa.write_text(conllu, encoding="utf-8")
    pb.write_text(conllu, encoding="utf-8")
    code, out, _ = run_cli(capsys, "pos", str(pa), str(pb))
    assert code == 0
    payload = json.loads(out)
    assert payload["n_tagged_a"] == 2
    assert len(payload["rows"]) == 12


def test_run_pipeline_markdown(capsys):
    code, out, _ = run_cli(
        capsys, "run", str(ROOT / "configs" / "mini.yaml"), "--format", "markdown"
    )
    assert code == 0
    assert out.startswith("# Corpus comparison report")


def test_run_tsv_bundle(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "run", str(ROOT / "configs" / "mini.yaml"),
        "--format", "tsv-bundle", "-o", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "table1_summary.tsv").is_file()
    assert str(tmp_path / "table4_pos.tsv") in out


def test_errors_exit_with_code_2(capsys):
    code, out, err = run_cli(capsys, "stats", "/no/such/file.jsonl")
    assert code == 2
    assert err.startswith("error:")
    assert out == ""


def test_generate_missing_credential_fails_cleanly(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    img = DATA / "img_eis.png"
    plan = tmp_path / "plan.yaml"
    plan.write_text(
        f"""
mode: zero_shot
endpoint:
  base_url: http://127.0.0.1:9/v1
  model: m
stories:
  Eis:
    image: {img}
    count: 1
""",
        encoding="utf-8",
    )
    code, _, err = run_cli(capsys, "generate", str(plan))
    assert code == 2
    assert "OPENAI_API_KEY" in err
