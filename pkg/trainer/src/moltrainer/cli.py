"""moltrainer command line: run one LoRA adaptation job."""

from __future__ import annotations

import argparse
import sys

from .job import TrainJob, load_job
from .train import train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moltrainer")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("train", help="run a training job")
    p.add_argument("--job", default=None, help="job TOML (defaults apply otherwise)")
    p.add_argument("--manifest", required=True, help="dataset manifest JSONL")
    p.add_argument("--images", required=True, help="depiction image root")
    p.add_argument("--split", required=True, help="split manifest JSON")
    p.add_argument("--pairs", default=None, help="positive-pair manifest JSONL")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = load_job(args.job) if args.job else TrainJob()
    result = train(job, args.manifest, args.images, args.split, args.out,
                   pairs_path=args.pairs)
    first_epoch = result.epoch_losses[0]
    print(f"trained on {result.n_train} samples; "
          f"epoch-1 loss {first_epoch[0]:.4f} -> {first_epoch[-1]:.4f}; "
          f"{result.n_predictions} predictions; "
          f"saved-batch contrastive loss {result.saved_batch_ntxent:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
