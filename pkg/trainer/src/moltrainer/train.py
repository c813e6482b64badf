"""The training loop and its exports.

One run produces: an adapter checkpoint (trainable parameters only),
predictions in the benchmark's transcript JSONL schema, an embedding export
(id -> unit-norm vector plus the pair structure of one saved batch), and a
metrics log including the trainer-side NT-Xent value on that saved batch.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

import torch

from .data import Sample, load_image, load_pair_views, read_manifest, read_pairs, read_split
from .job import TrainJob
from .model import StubEncoder, build_model
from .ntxent import ntxent


@dataclass
class TrainResult:
    epoch_losses: list[list[float]] = field(default_factory=list)  # full-set loss per step
    saved_batch_ntxent: float = 0.0
    n_train: int = 0
    n_predictions: int = 0


def _full_task_loss(model, images, labels, criterion) -> float:
    was_training = model.training
    model.eval()
    with torch.no_grad():
        value = float(criterion(model.predict_logit(images), labels))
    if was_training:
        model.train()
    return value


def train(
    job: TrainJob,
    manifest_path: str | Path,
    images_root: str | Path,
    split_path: str | Path,
    out_dir: str | Path,
    pairs_path: str | Path | None = None,
) -> TrainResult:
    torch.manual_seed(job.seed)
    rng = random.Random(job.seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    samples = {s.mol_id: s for s in read_manifest(manifest_path)}
    train_ids, test_ids = read_split(split_path)
    train_ids = [i for i in train_ids if i in samples]
    test_ids = [i for i in test_ids if i in samples]
    rng.shuffle(train_ids)
    keep = max(2, int(len(train_ids) * job.data_fraction + 0.5))
    train_ids = sorted(train_ids[:keep])

    classification = all(samples[i].label in (0.0, 1.0) for i in train_ids)
    criterion = (torch.nn.BCEWithLogitsLoss() if classification
                 else torch.nn.MSELoss())

    model = build_model(job)
    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.SGD(trainable, lr=job.learning_rate)

    train_images = torch.stack([load_image(images_root, samples[i].image_path)
                                for i in train_ids])
    train_labels = torch.tensor([samples[i].label for i in train_ids])

    pair_views = []
    if pairs_path is not None and job.contrastive_weight > 0:
        for pair in read_pairs(pairs_path):
            if pair.anchor_id in samples:
                pair_views.append(load_pair_views(images_root, pair))

    result = TrainResult(n_train=len(train_ids))
    batch = max(2, job.batch_size)
    model.train()
    for _ in range(job.epochs):
        step_losses = [_full_task_loss(model, train_images, train_labels, criterion)]
        order = list(range(len(train_ids)))
        rng.shuffle(order)  # mixed-class batches; seeded, so runs reproduce
        for start in range(0, len(order), batch):
            chunk = order[start : start + batch]
            if len(chunk) < 2:  # degenerate remainder: skip
                continue
            optimizer.zero_grad()
            logits = model.predict_logit(train_images[chunk])
            loss = criterion(logits, train_labels[chunk])
            if pair_views and job.contrastive_weight > 0:
                take = min(len(pair_views), batch)
                chosen = [pair_views[rng.randrange(len(pair_views))] for _ in range(take)]
                left = model.embed(torch.stack([a for a, _ in chosen]))
                right = model.embed(torch.stack([b for _, b in chosen]))
                loss = loss + job.contrastive_weight * ntxent(left, right, job.temperature)
            loss.backward()
            optimizer.step()
            step_losses.append(_full_task_loss(model, train_images, train_labels, criterion))
        result.epoch_losses.append(step_losses)

    # --- exports ---------------------------------------------------------

    torch.save(model.trainable_state_dict(), out / "adapter.pt")

    predictions = []
    with torch.no_grad():
        for mol_id in test_ids:
            sample = samples[mol_id]
            image = load_image(images_root, sample.image_path).unsqueeze(0)
            logit = float(model.predict_logit(image))
            if classification:
                response = "Yes" if logit >= 0.0 else "No"
            else:
                response = f"{logit:.6g}"
            payload = json.dumps({
                "model": job.base_model, "target_id": mol_id,
                "smiles": sample.smiles,
            }, sort_keys=True).encode()
            predictions.append({
                "v": 1,
                "prompt_id": f"trainer:{mol_id}",
                "request_hash": hashlib.sha256(payload).hexdigest(),
                "response": response,
                "error": None,
                "latency_s": 0.0,
                "attempts": 1,
            })
    with open(out / "predictions.jsonl", "w", encoding="utf-8") as fh:
        for row in predictions:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    result.n_predictions = len(predictions)

    # saved-batch embedding export for the cross-implementation loss check
    export_ids = train_ids[: max(2, min(8, len(train_ids)))]
    with torch.no_grad():
        left = model.embed(torch.stack(
            [load_image(images_root, samples[i].image_path) for i in export_ids]))
        # second view: horizontal flip of each anchor
        from PIL import Image, ImageOps

        from .data import _to_tensor
        flipped = []
        for i in export_ids:
            image = Image.open(Path(images_root) / samples[i].image_path).convert("L")
            flipped.append(_to_tensor(ImageOps.mirror(image)))
        right = model.embed(torch.stack(flipped))
        saved_loss = float(ntxent(left, right, job.temperature))
    result.saved_batch_ntxent = saved_loss

    with open(out / "embeddings.jsonl", "w", encoding="utf-8") as fh:
        for position, mol_id in enumerate(export_ids):
            fh.write(json.dumps({
                "v": 1, "id": f"anchor:{mol_id}", "pair": f"view:{mol_id}",
                "vector": [round(float(x), 8) for x in left[position]],
            }, sort_keys=True) + "\n")
            fh.write(json.dumps({
                "v": 1, "id": f"view:{mol_id}", "pair": f"anchor:{mol_id}",
                "vector": [round(float(x), 8) for x in right[position]],
            }, sort_keys=True) + "\n")

    (out / "metrics.json").write_text(json.dumps({
        "v": 1,
        "n_train": result.n_train,
        "n_predictions": result.n_predictions,
        "task": "classification" if classification else "regression",
        "epoch_losses": result.epoch_losses,
        "saved_batch_ntxent": saved_loss,
        "temperature": job.temperature,
        "contrastive_weight": job.contrastive_weight,
        "seconds": round(time.monotonic(), 3),
    }, sort_keys=True, indent=2) + "\n")
    return result
