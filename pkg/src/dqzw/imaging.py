"""Image I/O, spectral feature extraction, and the dual-quaternion image model.

Images are ``uint8`` arrays of shape ``(H, W, 3)``.  Feature images are
``float64`` arrays of the same shape.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .dual import DualQuaternionMatrix
from .errors import BadParameters, DimensionMismatch
from .quaternion import QuaternionMatrix


def as_rgb(img) -> np.ndarray:
    """Coerce to an ``(H, W, 3)`` uint8 array; grayscale is replicated."""
    arr = np.asarray(img)
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    elif arr.ndim == 3 and arr.shape[2] == 4:
        arr = arr[:, :, :3]
    elif arr.ndim == 3 and arr.shape[2] == 1:
        arr = np.repeat(arr, 3, axis=2)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionMismatch(f"cannot interpret array of shape {arr.shape} as an RGB image")
    if arr.dtype != np.uint8:
        if np.issubdtype(arr.dtype, np.floating) and np.any(~np.isfinite(arr)):
            raise BadParameters("image contains non-finite values")
        if arr.min(initial=0) < 0 or arr.max(initial=0) > 255:
            raise BadParameters("pixel values must lie in [0, 255]")
        arr = np.rint(arr).astype(np.uint8)
    return np.ascontiguousarray(arr)


def load_image(path) -> np.ndarray:
    with Image.open(Path(path)) as im:
        if im.mode not in ("RGB", "L"):
            im = im.convert("RGB")
        return as_rgb(np.array(im))


def save_image(img, path) -> None:
    Image.fromarray(as_rgb(img), mode="RGB").save(Path(path), format="PNG")


def resize(img, height: int, width: int | None = None) -> np.ndarray:
    """Bicubic resize to ``(height, width)``; a no-op when already that size."""
    width = height if width is None else width
    img = as_rgb(img)
    if img.shape[:2] == (height, width):
        return img.copy()
    out = Image.fromarray(img, mode="RGB").resize((width, height), Image.BICUBIC)
    return np.array(out)


# ---------------------------------------------------------------------------
# frequency-domain feature

@dataclass(frozen=True)
class FeatureParams:
    transform: str = "log_magnitude"
    center_shift: bool = True
    floor: float = 1.0
    ceil: float = 255.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureParams":
        return cls(
            transform=str(d.get("transform", "log_magnitude")),
            center_shift=bool(d.get("center_shift", True)),
            floor=float(d.get("floor", 1.0)),
            ceil=float(d.get("ceil", 255.0)),
        )


def spectrum(channel: np.ndarray) -> np.ndarray:
    """Unnormalized 2-D DFT of one channel."""
    return np.fft.fft2(np.asarray(channel, dtype=np.float64))


def fft_feature(img, params: FeatureParams = FeatureParams()) -> np.ndarray:
    """Per-channel spectral feature, min-max scaled to ``[floor, ceil]``.

    The default is ``log(1 + |F|)`` of the centred 2-D DFT.  The floor keeps
    every entry away from zero.
    """
    img = as_rgb(img)
    out = np.empty(img.shape, dtype=np.float64)
    for ch in range(3):
        F = spectrum(img[:, :, ch])
        if params.transform == "log_magnitude":
            v = np.log1p(np.abs(F))
        elif params.transform == "magnitude":
            v = np.abs(F)
        else:
            raise BadParameters(f"unknown feature transform {params.transform!r}")
        if params.center_shift:
            v = np.fft.fftshift(v)
        lo, hi = v.min(), v.max()
        if hi > lo:
            v = params.floor + (v - lo) * ((params.ceil - params.floor) / (hi - lo))
        else:
            v = np.full_like(v, params.floor)
        out[:, :, ch] = v
    return out


# ---------------------------------------------------------------------------
# dual-quaternion image model

def to_pure_quaternion(channels: np.ndarray) -> QuaternionMatrix:
    """Place the three channels in the ``i``, ``j``, ``k`` components."""
    ch = np.asarray(channels, dtype=np.float64)
    data = np.zeros(ch.shape[:2] + (4,))
    data[..., 1:] = ch
    return QuaternionMatrix(data)


def encode_pair(feature: np.ndarray, encrypted_wm) -> DualQuaternionMatrix:
    feature = np.asarray(feature, dtype=np.float64)
    wm = np.asarray(encrypted_wm, dtype=np.float64)
    if feature.shape != wm.shape:
        raise DimensionMismatch(f"feature {feature.shape} and watermark {wm.shape} differ")
    return DualQuaternionMatrix(to_pure_quaternion(feature), to_pure_quaternion(wm))


def decode_dual_part(Ai: QuaternionMatrix) -> tuple[np.ndarray, float]:
    """Read an RGB image out of the imaginary components.

    Returns the rounded, clamped image and the largest absolute real
    component, which is ~0 when the reconstruction is authentic.
    """
    img = np.clip(np.rint(Ai.data[..., 1:]), 0, 255).astype(np.uint8)
    residual = float(np.abs(Ai.data[..., 0]).max(initial=0.0))
    return img, residual
