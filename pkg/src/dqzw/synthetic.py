"""Deterministic synthetic carriers and watermarks.

Stand-ins for scanned medical images: a dark field with a smooth elliptical
body, a few brighter structures, and mild texture.
"""

from __future__ import annotations

import numpy as np


def carrier(size: int = 64, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size] / max(size - 1, 1)
    cx, cy = rng.uniform(0.4, 0.6, 2)
    rx, ry = rng.uniform(0.3, 0.45, 2)
    body = ((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2
    img = np.where(body < 1.0, 90.0 + 60.0 * (1.0 - body), 8.0)
    for _ in range(int(rng.integers(3, 7))):
        bx, by = rng.uniform(0.25, 0.75, 2)
        br = rng.uniform(0.03, 0.12)
        blob = np.exp(-(((x - bx) ** 2 + (y - by) ** 2) / (2 * br**2)))
        img = img + rng.uniform(-60, 90) * blob
    img = img + rng.normal(0.0, 4.0, img.shape)
    tint = rng.uniform(0.85, 1.0, 3)
    rgb = np.clip(img[:, :, None] * tint[None, None, :], 0, 255)
    return np.rint(rgb).astype(np.uint8)


def watermark(size: int = 64, seed: int = 0) -> np.ndarray:
    """Blocky coloured identity mark (roughly half the bits set per channel)."""
    rng = np.random.default_rng(10_000 + seed)
    cells = max(size // 8, 1)
    grid = rng.integers(0, 2, size=(cells, cells, 3)) * 255
    img = np.kron(grid, np.ones((size // cells + 1, size // cells + 1, 1)))[:size, :size]
    y, x = np.mgrid[0:size, 0:size]
    ring = np.abs(np.hypot(x - size / 2, y - size / 2) - size / 3) < max(size / 32, 1)
    img[ring] = [255, 255, 255]
    return img.astype(np.uint8)
