"""PSNR, SSIM, BER and NC between an original and a recovered watermark."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroImage

MAX_PIXEL = 255.0
C1 = (0.01 * MAX_PIXEL) ** 2
C2 = (0.03 * MAX_PIXEL) ** 2


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"image shapes {a.shape} and {b.shape} differ")
    return a, b


def psnr(F, Ft) -> float:
    F, Ft = _pair(F, Ft)
    err = float(np.sum((F - Ft) ** 2))
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(F.size * MAX_PIXEL**2 / err)


def ssim(F, Ft) -> float:
    """Global-statistics SSIM per channel, averaged over channels."""
    F, Ft = _pair(F, Ft)
    if F.ndim == 2:
        F, Ft = F[:, :, None], Ft[:, :, None]
    vals = []
    for ch in range(F.shape[2]):
        x = F[:, :, ch].ravel()
        y = Ft[:, :, ch].ravel()
        mx, my = x.mean(), y.mean()
        vx = np.mean((x - mx) ** 2)
        vy = np.mean((y - my) ** 2)
        cov = np.mean((x - mx) * (y - my))
        vals.append(((2 * mx * my + C1) * (2 * cov + C2)) / ((mx**2 + my**2 + C1) * (vx + vy + C2)))
    return float(np.mean(vals))


def ber(F, Ft, threshold: int = 128) -> float:
    """Fraction of pixel-channels whose binarized value differs."""
    F, Ft = _pair(F, Ft)
    if F.size == 0:
        return 0.0
    return float(np.count_nonzero((F >= threshold) != (Ft >= threshold)) / F.size)


def nc(G, Gt) -> float:
    G, Gt = _pair(G, Gt)
    ng = float(np.sum(G * G))
    nt = float(np.sum(Gt * Gt))
    if ng == 0.0 or nt == 0.0:
        raise ZeroImage("normalized correlation is undefined for an all-zero image")
    if np.array_equal(G, Gt):
        return 1.0
    return float(np.sum(G * Gt)) / math.sqrt(ng * nt)


@dataclass
class MetricsReport:
    psnr: float
    ssim: float
    ber: float
    nc: float
    authentic: bool

    def to_dict(self) -> dict:
        return {
            "psnr": "inf" if math.isinf(self.psnr) else self.psnr,
            "ssim": self.ssim,
            "ber": self.ber,
            "nc": self.nc,
            "authentic": self.authentic,
        }


def score(reference, recovered, ber_threshold: float = 0.0, bit_threshold: int = 128) -> MetricsReport:
    """All four metrics plus the verdict ``ber <= ber_threshold``."""
    b = ber(reference, recovered, bit_threshold)
    try:
        c = nc(reference, recovered)
    except ZeroImage:
        # identical all-black images still count as a perfect match
        c = 1.0 if np.array_equal(reference, recovered) else 0.0
    return MetricsReport(
        psnr=psnr(reference, recovered),
        ssim=ssim(reference, recovered),
        ber=b,
        nc=c,
        authentic=b <= ber_threshold,
    )
