"""Zero-watermark generation, verification and batch experiments."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arnold import CLASSIC, ArnoldKey, arnold_scramble, arnold_unscramble
from .attacks import AttackSpec, apply_attack
from .errors import DimensionMismatch, DQZWError, MethodError, NotSquare
from .factor import (
    TOL_GAP,
    TOL_RANK,
    dqlu,
    dqqr,
    dqsvd,
    lu_dual_part,
    qr_dual_part,
    standard_svd_with_keys,
    svd_dual_part,
)
from .formats import KeyFile, ZeroWatermark
from .imaging import FeatureParams, as_rgb, decode_dual_part, encode_pair, fft_feature, resize, to_pure_quaternion
from .metrics import MetricsReport, score
from .quaternion import QuaternionMatrix, qlu, qqr

log = logging.getLogger(__name__)

METHODS = ("DQLU", "DQQR", "DQSVD")
_ALIASES = {"lu": "DQLU", "qr": "DQQR", "svd": "DQSVD"}


def normalize_method(method: str) -> str:
    m = _ALIASES.get(method.lower(), method.upper())
    if m not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from lu, qr, svd")
    return m


@dataclass
class GenerateConfig:
    arnold_k: int = 10
    arnold_matrix: tuple = CLASSIC
    size: int | None = None
    feature: FeatureParams = field(default_factory=FeatureParams)
    tol_rank: float = TOL_RANK
    tol_gap: float = TOL_GAP


def _prepare_pair(carrier, watermark, size):
    carrier = as_rgb(carrier)
    watermark = as_rgb(watermark)
    record = {
        "size": size,
        "carrier_original": list(carrier.shape[:2]),
        "watermark_original": list(watermark.shape[:2]),
    }
    if size is not None:
        carrier = resize(carrier, size)
    h, w = carrier.shape[:2]
    if h != w:
        raise NotSquare(f"carrier is {h}x{w}; pass a size to resize it")
    if watermark.shape[:2] != (h, w):
        watermark = resize(watermark, h, w)
    return carrier, watermark, record


def generate(carrier, watermark, method: str = "DQLU", config: GenerateConfig | None = None):
    """Bind ``watermark`` to ``carrier``; return ``(ZeroWatermark, KeyFile)``."""
    config = config or GenerateConfig()
    method = normalize_method(method)
    carrier, watermark, record = _prepare_pair(carrier, watermark, config.size)
    N = carrier.shape[0]
    a, b, c, d = (int(v) for v in config.arnold_matrix)
    akey = ArnoldKey(a, b, c, d, int(config.arnold_k), N)

    feature = fft_feature(carrier, config.feature)
    encrypted = arnold_scramble(watermark, akey)
    A = encode_pair(feature, encrypted)

    key = KeyFile(method=method, dims=(N, N), arnold=akey, feature=config.feature, resize=record)
    try:
        if method == "DQLU":
            f = dqlu(A)
            factors = {"L_i": f.L.i, "U_i": f.U.i}
        elif method == "DQQR":
            f = dqqr(A)
            factors = {"Q_i": f.Q.i, "R_i": f.R.i}
        else:
            f = dqsvd(A, config.tol_rank, config.tol_gap)
            factors = {"U_i": f.U.i, "Sigma_i": f.sigma_i, "V_i": f.V.i}
            key.rank = f.rank
            if f.rank < N:
                key.W1, key.W2 = f.W1, f.W2
    except DQZWError as exc:
        raise MethodError(method, exc) from exc
    return ZeroWatermark(method, N, N, factors), key


def _prepare_suspect(suspect, key: KeyFile) -> np.ndarray:
    suspect = as_rgb(suspect)
    dims = tuple(key.dims)
    if suspect.shape[:2] != dims:
        if key.resize.get("size") is None:
            raise DimensionMismatch(f"suspect is {suspect.shape[:2]}, key expects {dims}")
        suspect = resize(suspect, *dims)
    return suspect


def reconstruct_dual_part(As: QuaternionMatrix, zw: ZeroWatermark, key: KeyFile) -> QuaternionMatrix:
    """Rebuild the dual part from a fresh standard-part factorization of ``As``."""
    F = zw.factors
    try:
        if zw.method == "DQLU":
            Ls, Us = qlu(As)
            return lu_dual_part(Ls, Us, F["L_i"], F["U_i"])
        if zw.method == "DQQR":
            Qs, Rs = qqr(As)
            return qr_dual_part(Qs, Rs, F["Q_i"], F["R_i"])
        W1, W2 = key.w_keys()
        rank = key.rank if key.rank is not None else min(As.shape)
        Us, sig, Vs = standard_svd_with_keys(As, rank, W1, W2)
        return svd_dual_part(Us, sig, Vs, F["U_i"], F["Sigma_i"], F["V_i"])
    except DQZWError as exc:
        raise MethodError(zw.method, exc) from exc


@dataclass
class Recovery:
    watermark: np.ndarray
    encrypted: np.ndarray
    real_residual: float


def recover_watermark(suspect, zw: ZeroWatermark, key: KeyFile) -> Recovery:
    if zw.method != key.method:
        raise DimensionMismatch(f"zero-watermark is {zw.method} but key is for {key.method}")
    suspect = _prepare_suspect(suspect, key)
    As = to_pure_quaternion(fft_feature(suspect, key.feature))
    Ai = reconstruct_dual_part(As, zw, key)
    encrypted, residual = decode_dual_part(Ai)
    return Recovery(arnold_unscramble(encrypted, key.arnold), encrypted, residual)


def reference_for(reference_wm, key: KeyFile) -> np.ndarray:
    ref = as_rgb(reference_wm)
    dims = tuple(key.dims)
    if ref.shape[:2] != dims:
        ref = resize(ref, *dims)
    return ref


def verify(suspect, zw: ZeroWatermark, key: KeyFile, reference_wm, ber_threshold: float = 0.0) -> MetricsReport:
    rec = recover_watermark(suspect, zw, key)
    return score(reference_for(reference_wm, key), rec.watermark, ber_threshold)


# ---------------------------------------------------------------------------
# batch experiments

REPORT_FIELDS = ("image", "method", "attack", "psnr", "ssim", "ber", "nc", "authentic", "error")


def _cell(args):
    name, method, attack, carrier, generated, ref = args
    row = {"image": name, "method": method, "attack": attack.label}
    try:
        if isinstance(generated, Exception):
            raise generated
        zw, key = generated
        suspect = apply_attack(carrier, attack)
        rep = verify(suspect, zw, key, ref)
        row.update(rep.to_dict())
        row["error"] = ""
    except Exception as exc:  # recorded per cell, the run continues
        log.warning("cell %s/%s/%s failed: %s", name, method, attack.label, exc)
        row.update({"psnr": None, "ssim": None, "ber": None, "nc": None, "authentic": None, "error": str(exc)})
    return row


def run_experiment(corpus, watermark, suite, methods=METHODS, config: GenerateConfig | None = None, workers: int = 1):
    """Metric rows for every (image, method, attack) cell, in cell order.

    ``corpus`` is a mapping or sequence of ``(name, image)`` pairs.  An empty
    suite is treated as the single identity attack.
    """
    items = list(corpus.items()) if isinstance(corpus, dict) else list(corpus)
    suite = list(suite) or [AttackSpec("none")]
    methods = [normalize_method(m) for m in methods]
    cells = []
    for name, img in items:
        img = as_rgb(img)
        for method in methods:
            try:
                generated = generate(img, watermark, method, config)
                carrier = _prepare_pair(img, watermark, (config or GenerateConfig()).size)[0]
                ref = reference_for(watermark, generated[1])
            except Exception as exc:
                generated, carrier, ref = exc, img, None
            for attack in suite:
                cells.append((name, method, attack, carrier, generated, ref))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def write_report(rows, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / "report.csv", out / "report.json"
    with csv_path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_FIELDS)
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in REPORT_FIELDS})
    json_path.write_text(json.dumps(rows, indent=2))
    return csv_path, json_path


def summarize(rows) -> str:
    lines = [f"{'image':<16}{'method':<8}{'attack':<16}{'PSNR':>9}{'SSIM':>9}{'BER':>8}{'NC':>8}"]
    for r in rows:
        if r.get("error"):
            lines.append(f"{r['image']:<16}{r['method']:<8}{r['attack']:<16}  error: {r['error']}")
            continue
        p = r["psnr"]
        ps = "inf" if p == "inf" or (isinstance(p, float) and math.isinf(p)) else f"{p:.3f}"
        lines.append(f"{r['image']:<16}{r['method']:<8}{r['attack']:<16}{ps:>9}{r['ssim']:>9.4f}{r['ber']:>8.4f}{r['nc']:>8.4f}")
    return "\n".join(lines)
