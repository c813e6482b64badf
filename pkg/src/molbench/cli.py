"""The molbench command line: curate, split, prompt, run, eval, mine-pairs,
report, and a scripted mock endpoint for hermetic end-to-end runs.

Exit codes: 0 success, 1 usage, 2 configuration (missing/invalid inputs),
3 runtime failure. With --json-errors a machine-readable error object goes
to stderr instead of prose. Every subcommand writes a run.json next to its
output capturing the resolved configuration and package version.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import subprocess
import sys
from pathlib import Path

from . import __version__
from .errors import MolbenchError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _version_string() -> str:
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
        if described.returncode == 0 and described.stdout.strip():
            return f"{__version__}+{described.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _write_run_json(target: Path, command: str, config: dict) -> None:
    payload = {
        "command": command,
        "version": _version_string(),
        "config": config,
    }
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="molbench",
                     description="Multimodal molecular property benchmark harness")
    parser.add_argument("--json-errors", action="store_true",
                        help="emit machine-readable errors on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curate", help="ingest + curate a dataset CSV")
    p.add_argument("--dataset", required=True, help="source CSV/TSV path")
    p.add_argument("--task", required=True, help="builtin task name or TOML spec")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--images", action=argparse.BooleanOptionalAction, default=False,
                   help="render depiction PNGs (slow; default off)")
    p.add_argument("--sample", type=int, default=None,
                   help="cap the number of ingested rows (desk-scale runs)")

    p = sub.add_parser("split", help="deterministic train/test split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="split manifest JSON path")
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("prompt", help="assemble prompts for the test split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--mode", required=True, choices=["zero-shot", "icl", "cot"])
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--repr", dest="representation", default="smiles",
                   choices=["smiles", "selfies"])
    p.add_argument("--out", required=True, help="prompts JSONL path")

    p = sub.add_parser("run", help="dispatch prompts to an endpoint")
    p.add_argument("--prompts", required=True)
    p.add_argument("--endpoint", required=True, help="endpoint TOML")
    p.add_argument("--images", required=True, help="image root directory")
    p.add_argument("--out", required=True, help="transcripts JSONL path")
    p.add_argument("--checkpoint", default=None,
                   help="checkpoint path (default <out>.ckpt)")
    # every endpoint field is overridable from the command line
    p.add_argument("--workers", type=int, default=None,
                   help="override the endpoint concurrency limit")
    p.add_argument("--base-url", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--api-key-env", default=None)
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--max-tokens", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--max-retries", type=int, default=None)

    p = sub.add_parser("eval", help="score transcripts against gold labels")
    p.add_argument("--prompts", required=True)
    p.add_argument("--transcripts", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--model", required=True, help="model name for the report")
    p.add_argument("--out", required=True, help="metric report JSON path")

    p = sub.add_parser("mine-pairs", help="export contrastive positive pairs")
    p.add_argument("--manifest", required=True)
    p.add_argument("--strategy", required=True, choices=["aug", "t-aug"])
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--threshold", type=float, default=0.85)
    p.add_argument("--per-anchor", type=int, default=3)
    p.add_argument("--out", required=True, help="pair manifest JSONL path")

    p = sub.add_parser("report", help="aggregate metric reports into tables")
    p.add_argument("--reports", required=True, nargs="+",
                   help="metric report JSON files")
    p.add_argument("--family", required=True,
                   choices=["classification", "regression", "description"])
    p.add_argument("--format", default="markdown",
                   choices=["markdown", "csv", "json"])
    p.add_argument("--rank", action="store_true", help="append the rank table")
    p.add_argument("--out", required=True)

    p = sub.add_parser("mock-serve", help="run the scripted mock endpoint")
    p.add_argument("--script", default=None, help="TOML behavior script")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8379)

    return parser


# --- subcommand bodies --------------------------------------------------------


def _cmd_curate(args) -> int:
    from .datasets import curate, ingest_csv, load_task_spec, write_manifest, write_report

    task = load_task_spec(args.task)
    records, ingest_report = ingest_csv(args.dataset, task)
    if args.sample is not None:
        records = records[: args.sample]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curated, report = curate(records, task, image_dir=out / "images",
                             render_images=args.images)
    write_manifest(curated, out / "manifest.jsonl")
    write_report(report, out / "curation_report.json")
    _write_run_json(out / "run.json", "curate", {
        "dataset": str(args.dataset), "task": task.name, "images": args.images,
        "sample": args.sample,
        "ingested": dataclasses.asdict(ingest_report),
    })
    print(f"curated {report.kept}/{report.ingested} records -> {out}/manifest.jsonl")
    return EXIT_OK


def _cmd_split(args) -> int:
    from .datasets import SplitConfig, read_manifest, split, write_split_manifest

    records = read_manifest(args.manifest)
    cfg = SplitConfig(args.ratio, args.seed)
    train, test = split(records, cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_split_manifest([r.id for r in train], [r.id for r in test], cfg, out)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "split", {
        "manifest": str(args.manifest), "ratio": cfg.ratio, "seed": cfg.seed,
        "train": len(train), "test": len(test),
    })
    print(f"split {len(records)} records -> {len(train)} train / {len(test)} test")
    return EXIT_OK


def _cmd_prompt(args) -> int:
    from .datasets import load_task_spec, read_manifest, read_split_manifest
    from .prompts import (
        COT,
        ICL,
        SELFIES_REPR,
        SMILES_REPR,
        ZERO_SHOT,
        PromptMode,
        build_prompts,
        write_prompts,
    )

    task = load_task_spec(args.task)
    records = read_manifest(args.manifest)
    split_manifest = read_split_manifest(args.split)
    by_id = {record.id: record for record in records}
    train = [by_id[i] for i in split_manifest["train_ids"]]
    test = [by_id[i] for i in split_manifest["test_ids"]]
    mode_kind = {"zero-shot": ZERO_SHOT, "icl": ICL, "cot": COT}[args.mode]
    mode = PromptMode(mode_kind, 0 if mode_kind == ZERO_SHOT else args.k)
    representation = SMILES_REPR if args.representation == "smiles" else SELFIES_REPR
    prompts = build_prompts(test, task, mode, representation, train)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_prompts(prompts, out)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "prompt", {
        "manifest": str(args.manifest), "split": str(args.split),
        "task": task.name, "mode": args.mode, "k": mode.k,
        "representation": representation, "count": len(prompts),
    })
    print(f"wrote {len(prompts)} prompts -> {out}")
    return EXIT_OK


def _cmd_run(args) -> int:
    import dataclasses as dc

    from .client import load_endpoint_config, run_batch, write_transcripts
    from .prompts import read_prompts

    prompts = read_prompts(args.prompts)
    cfg = load_endpoint_config(args.endpoint)
    overrides = {
        "concurrency_limit": args.workers,
        "base_url": args.base_url,
        "model_name": args.model,
        "api_key_env": args.api_key_env,
        "temperature": args.temperature,
        "max_tokens": args.max_tokens,
        "timeout": args.timeout,
        "max_retries": args.max_retries,
    }
    overrides = {name: value for name, value in overrides.items() if value is not None}
    if overrides:
        cfg = dc.replace(cfg, **overrides)
    checkpoint = Path(args.checkpoint) if args.checkpoint else Path(args.out + ".ckpt")
    transcripts = run_batch(prompts, cfg, args.images, checkpoint)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_transcripts(transcripts, out)
    failures = sum(1 for t in transcripts if t.error is not None)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "run", {
        "prompts": str(args.prompts), "endpoint": dc.asdict(cfg),
        "checkpoint": str(checkpoint), "completed": len(transcripts),
        "failures": failures,
    })
    print(f"ran {len(transcripts)} prompts ({failures} failures) -> {out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    from .client import read_transcripts
    from .datasets import load_task_spec, read_manifest
    from .evalmetrics import evaluate_cell
    from .prompts import read_prompts

    task = load_task_spec(args.task)
    prompts = read_prompts(args.prompts)
    transcripts = read_transcripts(args.transcripts)
    gold = {record.id: record for record in read_manifest(args.manifest)}
    report = evaluate_cell(prompts, transcripts, gold, task, args.model)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    report.save(out)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "eval", {
        "prompts": str(args.prompts), "transcripts": str(args.transcripts),
        "manifest": str(args.manifest), "task": task.name, "model": args.model,
    })
    summary = {k: v for k, v in report.to_dict().items()
               if k in ("accuracy", "f1", "mae", "rmse", "meteor")}
    print(f"evaluated {report.n_total} answers {summary} -> {out}")
    return EXIT_OK


def _cmd_mine_pairs(args) -> int:
    from .contrastive import AUG, T_AUG, build_pair_manifest
    from .datasets import read_manifest

    records = read_manifest(args.manifest)
    strategy = AUG if args.strategy == "aug" else T_AUG
    manifest = build_pair_manifest(records, strategy, args.seed,
                                   threshold=args.threshold,
                                   positives_per_anchor=args.per_anchor)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest.save(out)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "mine-pairs", {
        "manifest": str(args.manifest), "strategy": strategy, "seed": args.seed,
        "threshold": args.threshold, "per_anchor": args.per_anchor,
        "pairs": len(manifest.entries), "skipped": len(manifest.skipped),
    })
    print(f"mined {len(manifest.entries)} pairs "
          f"({len(manifest.skipped)} anchors skipped) -> {out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .reporting import ResultsGrid, grid_to_csv, rank_models, render_table

    grid = ResultsGrid.from_report_files(args.reports)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        _, csv_text, warnings = render_table(grid, args.family)
        out.write_text(csv_text)
    elif args.format == "json":
        out.write_text(grid_to_csv(grid))
    else:
        markdown, _, warnings = render_table(grid, args.family)
        if args.rank and len(grid.models()) >= 2:
            markdown += "\nAverage rank (1 = best):\n\n"
            markdown += rank_models(grid).to_markdown()
        out.write_text(markdown)
    if args.format != "json":
        for warning in warnings:
            print(f"warning: {warning}", file=sys.stderr)
    _write_run_json(out.with_suffix(out.suffix + ".run.json"), "report", {
        "reports": [str(r) for r in args.reports], "family": args.family,
        "format": args.format,
    })
    print(f"wrote {args.format} table -> {out}")
    return EXIT_OK


def _cmd_mock_serve(args) -> int:
    import sys as _sys

    from .client import serve_forever

    script = {}
    if args.script:
        if _sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        with open(args.script, "rb") as fh:
            script = tomllib.load(fh)
    serve_forever(script, args.host, args.port)
    return EXIT_OK


_COMMANDS = {
    "curate": _cmd_curate,
    "split": _cmd_split,
    "prompt": _cmd_prompt,
    "run": _cmd_run,
    "eval": _cmd_eval,
    "mine-pairs": _cmd_mine_pairs,
    "report": _cmd_report,
    "mock-serve": _cmd_mock_serve,
}

_CONFIG_ERRORS = (FileNotFoundError, KeyError)


def main(argv=None) -> int:
    parser = build_parser()
    json_errors = False
    try:
        args = parser.parse_args(argv)
        json_errors = args.json_errors
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        _emit_error(json_errors, "usage", str(exc))
        if not json_errors:
            parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except MolbenchError as exc:
        from .errors import (
            EmptyFile,
            MissingColumn,
            MissingTemplate,
            TooFewRecords,
        )

        config_like = isinstance(exc, (EmptyFile, MissingColumn, MissingTemplate,
                                       TooFewRecords))
        _emit_error(json_errors, type(exc).__name__, str(exc))
        return EXIT_CONFIG if config_like else EXIT_RUNTIME
    except _CONFIG_ERRORS as exc:
        _emit_error(json_errors, type(exc).__name__, str(exc))
        return EXIT_CONFIG
    except ValueError as exc:
        _emit_error(json_errors, "ValueError", str(exc))
        return EXIT_RUNTIME


def _emit_error(as_json: bool, kind: str, message: str) -> None:
    if as_json:
        print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    else:
        print(f"molbench: error: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
