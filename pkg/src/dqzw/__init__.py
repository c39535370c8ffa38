"""Fragile zero-watermarking of colour images with dual quaternion matrix factorizations."""

from .arnold import ArnoldKey, arnold_period, arnold_scramble, arnold_unscramble
from .attacks import AttackSpec, apply_attack, default_suite, load_suite
from .dual import (
    DualNumber,
    DualQuaternion,
    DualQuaternionMatrix,
    dq_inverse,
    dq_magnitude,
    dual_cmp,
    dual_div,
    dual_sqrt,
    fr_norm,
)
from .errors import DQZWError
from .factor import dqlu, dqqr, dqsvd
from .formats import KeyFile, ZeroWatermark, read_key, read_zw, write_key, write_zw
from .imaging import FeatureParams, encode_pair, fft_feature
from .metrics import MetricsReport, ber, nc, psnr, score, ssim
from .pipeline import GenerateConfig, generate, recover_watermark, run_experiment, verify
from .quaternion import Quaternion, QuaternionMatrix, q_determinant, qlu, qqr, qsvd

__version__ = "0.1.0"

__all__ = [
    "ArnoldKey", "arnold_period", "arnold_scramble", "arnold_unscramble",
    "AttackSpec", "apply_attack", "default_suite", "load_suite",
    "DualNumber", "DualQuaternion", "DualQuaternionMatrix",
    "dq_inverse", "dq_magnitude", "dual_cmp", "dual_div", "dual_sqrt", "fr_norm",
    "DQZWError", "dqlu", "dqqr", "dqsvd",
    "KeyFile", "ZeroWatermark", "read_key", "read_zw", "write_key", "write_zw",
    "FeatureParams", "encode_pair", "fft_feature",
    "MetricsReport", "ber", "nc", "psnr", "score", "ssim",
    "GenerateConfig", "generate", "recover_watermark", "run_experiment", "verify",
    "Quaternion", "QuaternionMatrix", "q_determinant", "qlu", "qqr", "qsvd",
]
