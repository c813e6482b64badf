import json
import threading

import pytest

from molbench.cli import EXIT_CONFIG, EXIT_OK, EXIT_USAGE, main
from molbench.client import MockServer

from .datagen import write_source_csv


@pytest.fixture
def curated_dir(tmp_path):
    source = write_source_csv("bbbp", tmp_path / "bbbp.csv", n_rows=30)
    out = tmp_path / "out"
    code = main(["curate", "--dataset", str(source), "--task", "bbbp",
                 "--out", str(out)])
    assert code == EXIT_OK
    return out


def test_unknown_subcommand_exits_usage(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE


def test_missing_required_flag_exits_usage():
    assert main(["curate", "--dataset", "x.csv"]) == EXIT_USAGE


def test_curate_writes_manifest_report_and_run_json(curated_dir):
    assert (curated_dir / "manifest.jsonl").exists()
    assert (curated_dir / "curation_report.json").exists()
    run = json.loads((curated_dir / "run.json").read_text())
    assert run["command"] == "curate"
    assert run["version"]
    assert run["config"]["task"] == "bbbp"


def test_missing_dataset_file_exits_config(tmp_path):
    code = main(["curate", "--dataset", str(tmp_path / "nope.csv"),
                 "--task", "bbbp", "--out", str(tmp_path / "out")])
    assert code == EXIT_CONFIG


def test_json_errors_flag(tmp_path, capsys):
    code = main(["--json-errors", "curate", "--dataset",
                 str(tmp_path / "nope.csv"), "--task", "bbbp",
                 "--out", str(tmp_path / "out")])
    assert code == EXIT_CONFIG
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["error"]


def test_split_prompt_pipeline(curated_dir, tmp_path):
    split_path = tmp_path / "split.json"
    assert main(["split", "--manifest", str(curated_dir / "manifest.jsonl"),
                 "--out", str(split_path), "--ratio", "0.8", "--seed", "42"]) == EXIT_OK
    split_data = json.loads(split_path.read_text())
    assert len(split_data["train_ids"]) == 24
    assert len(split_data["test_ids"]) == 6

    prompts_path = tmp_path / "prompts.jsonl"
    assert main(["prompt", "--manifest", str(curated_dir / "manifest.jsonl"),
                 "--split", str(split_path), "--task", "bbbp",
                 "--mode", "icl", "--k", "2", "--repr", "smiles",
                 "--out", str(prompts_path)]) == EXIT_OK
    lines = prompts_path.read_text().strip().splitlines()
    assert len(lines) == 6
    first = json.loads(lines[0])
    assert first["k"] == 2
    assert len(first["example_ids"]) == 2


def test_idempotent_outputs(curated_dir, tmp_path):
    split_a = tmp_path / "a.json"
    split_b = tmp_path / "b.json"
    for out in (split_a, split_b):
        main(["split", "--manifest", str(curated_dir / "manifest.jsonl"),
              "--out", str(out)])
    assert split_a.read_bytes() == split_b.read_bytes()


def test_mine_pairs_cli(curated_dir, tmp_path):
    out = tmp_path / "pairs.jsonl"
    assert main(["mine-pairs", "--manifest", str(curated_dir / "manifest.jsonl"),
                 "--strategy", "aug", "--seed", "5", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 30
    entry = json.loads(lines[0])
    assert entry["strategy"] == "Aug"
    assert len(entry["transforms"]) == 2


def test_run_cli_field_overrides(curated_dir, tmp_path):
    split_path = tmp_path / "split.json"
    main(["split", "--manifest", str(curated_dir / "manifest.jsonl"),
          "--out", str(split_path)])
    prompts_path = tmp_path / "prompts.jsonl"
    main(["prompt", "--manifest", str(curated_dir / "manifest.jsonl"),
          "--split", str(split_path), "--task", "bbbp", "--mode", "zero-shot",
          "--out", str(prompts_path)])
    # render the handful of test images the run needs
    from molbench.chem import parse_smiles
    from molbench.datasets import read_manifest
    from molbench.depict import depict_png

    for record in read_manifest(curated_dir / "manifest.jsonl"):
        target = curated_dir / "images" / record.image_path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(depict_png(parse_smiles(record.canonical), 64, 64))

    endpoint = tmp_path / "endpoint.toml"
    with MockServer({"echo": "Yes"}) as mock:
        endpoint.write_text(
            f'base_url = "{mock.base_url}"\nmodel_name = "from-toml"\n')
        out = tmp_path / "transcripts.jsonl"
        assert main(["run", "--prompts", str(prompts_path),
                     "--endpoint", str(endpoint),
                     "--images", str(curated_dir / "images"),
                     "--out", str(out),
                     "--temperature", "0.7", "--model", "override-model",
                     "--workers", "2"]) == EXIT_OK
    run_meta = json.loads((tmp_path / "transcripts.jsonl.run.json").read_text())
    assert run_meta["config"]["endpoint"]["temperature"] == 0.7
    assert run_meta["config"]["endpoint"]["model_name"] == "override-model"
    assert run_meta["config"]["endpoint"]["concurrency_limit"] == 2
    assert run_meta["config"]["failures"] == 0


def test_report_cli(tmp_path):
    from molbench.evalmetrics import MetricReport

    paths = []
    for model, acc in (("m1", 0.8), ("m2", 0.6)):
        report = MetricReport(dataset="bace", model=model, mode="icl",
                              task_kind="classification", n_total=10, n_scored=10,
                              n_unparsed=0, parse_failure_rate=0.0,
                              accuracy=acc, f1=acc - 0.1)
        path = tmp_path / f"{model}.json"
        report.save(path)
        paths.append(str(path))
    out = tmp_path / "table.md"
    assert main(["report", "--reports", *paths, "--family", "classification",
                 "--rank", "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert "0.80(0.70)" in text
    assert "Average rank" in text
