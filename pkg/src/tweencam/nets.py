"""Shared neural building blocks: encoders, positions, decoder wrapper.

All sequence models here follow the same recipe: per-stream two-layer MLP
encoders lift raw features to the embed dim, sinusoidal positions are added,
and a transformer decoder cross-attends a query stream against the fused
music-dance memory. Output heads are linear; pose-valued heads squash the
distance channel through softplus and the fov channel into (0, 180).
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn
import torch.nn.functional as F


class FeatureEncoder(nn.Module):
    """Two-layer MLP lifting a raw feature stream to the embedding width."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.net = nn.Sequential(
            nn.Linear(in_dim, out_dim),
            nn.GELU(),
            nn.Linear(out_dim, out_dim),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x)


def sinusoidal_positions(n: int, dim: int, dtype=torch.float32) -> torch.Tensor:
    """Classic fixed sin/cos position table of shape (n, dim); dim must be even."""
    if dim % 2 != 0:
        raise ValueError(f"embedding dim must be even, got {dim}")
    pos = torch.arange(n, dtype=torch.float64).unsqueeze(1)
    freqs = torch.exp(torch.arange(0, dim, 2, dtype=torch.float64) * (-math.log(10000.0) / dim))
    table = torch.zeros(n, dim, dtype=torch.float64)
    table[:, 0::2] = torch.sin(pos * freqs)
    table[:, 1::2] = torch.cos(pos * freqs)
    return table.to(dtype)


class ContextDecoder(nn.Module):
    """Transformer decoder over a query stream with music-dance memory.

    Both streams get sinusoidal positions so the decoder can tell history
    slots from future slots; attention itself is unmasked (the inputs, not
    the attention pattern, hide the targets).
    """

    def __init__(self, dim: int, n_layers: int, n_heads: int, dropout: float):
        super().__init__()
        layer = nn.TransformerDecoderLayer(
            d_model=dim,
            nhead=n_heads,
            dim_feedforward=4 * dim,
            dropout=dropout,
            activation="gelu",
            batch_first=True,
            norm_first=True,
        )
        self.decoder = nn.TransformerDecoder(layer, num_layers=n_layers)
        self.dim = dim

    def forward(self, query: torch.Tensor, memory: torch.Tensor) -> torch.Tensor:
        pq = sinusoidal_positions(query.shape[1], self.dim, dtype=query.dtype).to(query.device)
        pm = sinusoidal_positions(memory.shape[1], self.dim, dtype=memory.dtype).to(memory.device)
        return self.decoder(query + pq, memory + pm)


def decode_pose_channels(raw: torch.Tensor) -> torch.Tensor:
    """Map a raw 8-channel head output to a valid camera pose vector.

    rp and rot pass through; dist = softplus (>= 0); fov = 180 * sigmoid,
    so fov stays strictly inside (0, 180).
    """
    if raw.shape[-1] != 8:
        raise ValueError(f"pose head must emit 8 channels, got {raw.shape[-1]}")
    dist = F.softplus(raw[..., 6:7])
    fov = 180.0 * torch.sigmoid(raw[..., 7:8])
    return torch.cat([raw[..., :6], dist, fov], dim=-1)
