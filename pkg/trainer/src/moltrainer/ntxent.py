"""Trainer-side NT-Xent (torch), independently implemented.

The benchmark side recomputes the same quantity from exported embeddings;
agreement within 1e-4 is the load-bearing cross-implementation check.
"""

from __future__ import annotations

import torch


def ntxent(left: torch.Tensor, right: torch.Tensor, tau: float) -> torch.Tensor:
    """Loss over N positive pairs (left[i], right[i]), all unit-norm rows."""
    n = left.shape[0]
    z = torch.cat([left, right], dim=0)          # (2N, d)
    sims = (z @ z.T) / tau                        # cosine: rows are unit-norm
    eye = torch.eye(2 * n, dtype=torch.bool, device=z.device)
    sims = sims.masked_fill(eye, float("-inf"))  # exclude self-comparison
    positives = torch.cat([
        torch.arange(n, 2 * n, device=z.device),
        torch.arange(0, n, device=z.device),
    ])
    log_prob = sims - torch.logsumexp(sims, dim=1, keepdim=True)
    return -log_prob[torch.arange(2 * n, device=z.device), positives].mean()
