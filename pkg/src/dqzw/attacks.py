"""Seedable image attacks used to exercise the fragile verifier."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import BadParameters
from .imaging import as_rgb

KINDS = ("none", "gaussian_noise", "jpeg_compress", "rotate", "center_crop", "brighten", "pixel_edit")

DEFAULTS = {
    "none": {},
    "gaussian_noise": {"mean": 0.0, "variance": 0.01},
    "jpeg_compress": {"quality": 10},
    "rotate": {"angle": 3.0},
    "center_crop": {"fraction": 0.25},
    "brighten": {"delta": 30},
    "pixel_edit": {"x": 0, "y": 0, "channel": 0, "delta": 1},
}

# short names accepted on the command line and in suite files
ALIASES = {
    "identity": "none",
    "gaussian": "gaussian_noise",
    "noise": "gaussian_noise",
    "jpeg": "jpeg_compress",
    "crop": "center_crop",
    "pixel": "pixel_edit",
}


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    name: str | None = None

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise BadParameters(f"unknown attack kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        unknown = set(self.params) - set(DEFAULTS[kind]) - {"value"}
        if unknown:
            raise BadParameters(f"unexpected parameters for {kind}: {sorted(unknown)}")

    @property
    def resolved(self) -> dict:
        out = dict(DEFAULTS[self.kind])
        out.update(self.params)
        return out

    @property
    def label(self) -> str:
        return self.name or self.kind

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": dict(self.params), "seed": self.seed}
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AttackSpec":
        if "kind" not in d:
            raise BadParameters("attack entry is missing 'kind'")
        return cls(kind=d["kind"], params=dict(d.get("params", {})), seed=int(d.get("seed", 0)), name=d.get("name"))


def default_suite(seed: int = 0) -> list[AttackSpec]:
    """The six attacks with their default parameters."""
    return [AttackSpec(k, seed=seed) for k in KINDS if k != "none"]


def load_suite(path) -> list[AttackSpec]:
    """Read a JSON suite: either a list of attack entries or ``{"attacks": [...]}``."""
    raw = json.loads(Path(path).read_text())
    if isinstance(raw, dict):
        raw = raw.get("attacks", [])
    if not isinstance(raw, list):
        raise BadParameters("attack suite must be a list of attack entries")
    return [AttackSpec.from_dict(d) for d in raw]


def gaussian_noise(img: np.ndarray, mean: float, variance: float, seed: int) -> np.ndarray:
    if not (math.isfinite(variance) and variance >= 0):
        raise BadParameters("variance must be finite and nonnegative")
    if variance == 0 and mean == 0:
        return img.copy()
    rng = np.random.default_rng(seed)
    x = img.astype(np.float64) / 255.0
    x = x + rng.normal(mean, math.sqrt(variance), size=x.shape)
    return np.rint(np.clip(x, 0.0, 1.0) * 255.0).astype(np.uint8)


def jpeg_compress(img: np.ndarray, quality: int) -> np.ndarray:
    if not (1 <= int(quality) <= 100):
        raise BadParameters("JPEG quality must lie in [1, 100]")
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="JPEG", quality=int(quality))
    buf.seek(0)
    with Image.open(buf) as im:
        return np.array(im.convert("RGB"))


def rotate(img: np.ndarray, angle: float) -> np.ndarray:
    """Counterclockwise rotation about the centre, same frame, black fill."""
    if not math.isfinite(angle):
        raise BadParameters("rotation angle must be finite")
    out = Image.fromarray(img, mode="RGB").rotate(angle, resample=Image.BILINEAR, expand=False, fillcolor=(0, 0, 0))
    return np.array(out)


def center_crop(img: np.ndarray, fraction: float) -> np.ndarray:
    """Zero the central rectangle covering ``fraction`` of the area."""
    if not (0.0 < fraction < 1.0):
        raise BadParameters("crop fraction must lie in (0, 1)")
    h, w = img.shape[:2]
    s = math.sqrt(fraction)
    ch, cw = max(1, int(round(h * s))), max(1, int(round(w * s)))
    top, left = (h - ch) // 2, (w - cw) // 2
    out = img.copy()
    out[top:top + ch, left:left + cw] = 0
    return out


def brighten(img: np.ndarray, delta: int) -> np.ndarray:
    if int(delta) != delta:
        raise BadParameters("brightness delta must be an integer")
    return np.clip(img.astype(np.int64) + int(delta), 0, 255).astype(np.uint8)


def pixel_edit(img: np.ndarray, x: int, y: int, channel: int, delta: int = 1, value: int | None = None) -> np.ndarray:
    """Change exactly one pixel-channel (row ``x``, column ``y``).

    ``value`` sets it outright; otherwise ``delta`` is added, flipping sign
    when the result would leave ``[0, 255]``.
    """
    h, w = img.shape[:2]
    if not (0 <= x < h and 0 <= y < w and 0 <= channel < 3):
        raise BadParameters(f"pixel ({x}, {y}, {channel}) is outside a {h}x{w}x3 image")
    old = int(img[x, y, channel])
    if value is None:
        if delta == 0:
            raise BadParameters("pixel delta must be nonzero")
        new = old + int(delta)
        if not 0 <= new <= 255:
            new = old - int(delta)
    else:
        new = int(value)
    if not 0 <= new <= 255:
        raise BadParameters("edited value must lie in [0, 255]")
    out = img.copy()
    out[x, y, channel] = new
    return out


def apply_attack(img, spec: AttackSpec) -> np.ndarray:
    img = as_rgb(img)
    p = spec.resolved
    if spec.kind == "none":
        return img.copy()
    if spec.kind == "gaussian_noise":
        return gaussian_noise(img, float(p["mean"]), float(p["variance"]), spec.seed)
    if spec.kind == "jpeg_compress":
        return jpeg_compress(img, p["quality"])
    if spec.kind == "rotate":
        return rotate(img, float(p["angle"]))
    if spec.kind == "center_crop":
        return center_crop(img, float(p["fraction"]))
    if spec.kind == "brighten":
        return brighten(img, p["delta"])
    if spec.kind == "pixel_edit":
        return pixel_edit(img, int(p["x"]), int(p["y"]), int(p["channel"]), int(p.get("delta", 1)), p.get("value"))
    raise BadParameters(f"unknown attack kind {spec.kind!r}")
