"""Stub vision encoder with LoRA adapters.

Stands in for an open VLM's vision tower at desk scale: two frozen linear
stages with trainable low-rank adapters in parallel, a trainable projection
head producing unit-norm contrastive embeddings, and a trainable task head.
The contract (manifests in, predictions/embeddings out) is what matters;
the architecture is deliberately tiny.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import IMAGE_SIZE


class LoRALinear(nn.Module):
    """Frozen base weight plus trainable rank-decomposition update."""

    def __init__(self, in_features: int, out_features: int, rank: int,
                 alpha: float, dropout: float):
        super().__init__()
        self.base = nn.Linear(in_features, out_features)
        self.base.weight.requires_grad_(False)
        self.base.bias.requires_grad_(False)
        self.lora_a = nn.Parameter(torch.randn(rank, in_features) * 0.02)
        self.lora_b = nn.Parameter(torch.zeros(out_features, rank))
        self.scaling = alpha / rank
        self.dropout = nn.Dropout(dropout)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        update = self.dropout(x) @ self.lora_a.T @ self.lora_b.T
        return self.base(x) + update * self.scaling


class StubEncoder(nn.Module):
    def __init__(self, rank: int, alpha: float, dropout: float,
                 hidden: int = 64, feature_dim: int = 32, embed_dim: int = 16):
        super().__init__()
        self.stage1 = LoRALinear(IMAGE_SIZE * IMAGE_SIZE, hidden, rank, alpha, dropout)
        self.stage2 = LoRALinear(hidden, feature_dim, rank, alpha, dropout)
        self.activation = nn.Tanh()
        self.projection = nn.Linear(feature_dim, embed_dim)
        self.task_head = nn.Linear(feature_dim, 1)

    def features(self, x: torch.Tensor) -> torch.Tensor:
        return self.activation(self.stage2(self.activation(self.stage1(x))))

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        """Unit-norm contrastive embeddings."""
        raw = self.projection(self.features(x))
        return nn.functional.normalize(raw, dim=-1)

    def predict_logit(self, x: torch.Tensor) -> torch.Tensor:
        return self.task_head(self.features(x)).squeeze(-1)

    def trainable_state_dict(self) -> dict:
        return {name: tensor for name, tensor in self.state_dict().items()
                if not name.endswith("base.weight") and not name.endswith("base.bias")}


def build_model(job) -> StubEncoder:
    torch.manual_seed(job.seed)
    model = StubEncoder(job.lora_rank, job.lora_alpha, job.lora_dropout)
    # honor the explicit frozen list: anything beyond the base weights
    for name, parameter in model.named_parameters():
        for frozen_name in job.frozen:
            mapped = frozen_name.replace("encoder.base", "base")
            if mapped in name and "lora" not in name:
                parameter.requires_grad_(False)
    return model
